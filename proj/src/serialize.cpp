#include "sobext/serialize.hpp"

#include <cmath>
#include <fstream>

namespace sobext {

namespace {

Json site_ref(const SiteSet& sites, SiteIndex s) {
  if (s == kAuxSite) return nullptr;
  return sites.input_index(s);
}

Json interval_json(const Rational& lo, const Rational& hi) { return Json::array({to_string(lo), to_string(hi)}); }

Json keys(std::span<const SquareId> ids) {
  Json out = Json::array();
  for (SquareId id : ids) out.push_back(square_key(id));
  return out;
}

Rational parse_site(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError("site is not finite");
    return from_double(d);
  }
  throw ValidationError("site must be a rational string or a number");
}

std::vector<double> parse_values(const Json& arr) {
  if (!arr.is_array()) throw ValidationError("\"values\" must be an array");
  std::vector<double> out;
  for (const Json& v : arr) {
    if (!v.is_number()) throw ValidationError("values must be numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError("values must be finite");
    out.push_back(d);
  }
  return out;
}

}  // namespace

InputFile parse_input(const Json& doc) {
  if (!doc.is_object() || !doc.contains("sites")) throw ValidationError("input must be an object with \"sites\"");
  const Json& sites = doc.at("sites");
  if (!sites.is_array()) throw ValidationError("\"sites\" must be an array");
  InputFile in;
  for (const Json& v : sites) in.sites.push_back(parse_site(v));
  if (doc.contains("values")) {
    in.values = parse_values(doc.at("values"));
    if (in.values.size() != in.sites.size()) {
      throw ValidationError("got " + std::to_string(in.values.size()) + " values for " +
                            std::to_string(in.sites.size()) + " sites");
    }
  }
  return in;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

InputFile read_input(const std::string& path) { return parse_input(read_json(path)); }

std::vector<double> read_values(const std::string& path) {
  const Json doc = read_json(path);
  if (doc.is_array()) return parse_values(doc);
  if (doc.is_object() && doc.contains("values")) return parse_values(doc.at("values"));
  throw ValidationError(path + ": expected {\"values\": [...]} or an array");
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << doc.dump(1) << '\n';
  if (!out) throw ValidationError("write failed: " + path);
}

std::string square_key(SquareId id) { return "q" + std::to_string(id); }

Json instance_json(const Instance& instance) {
  Json sites = Json::array();
  for (const Rational& x : instance.sites) sites.push_back(to_string(x));
  return Json{{"family", to_string(instance.family)},
              {"seed", instance.seed},
              {"sites", std::move(sites)},
              {"values", instance.values}};
}

Json cz_json(const Pipeline& pipeline) {
  const SiteSet& sites = pipeline.sites;
  const CzDecomposition& cz = pipeline.cz;
  Json squares = Json::array();
  for (SquareId id = 0; id < static_cast<SquareId>(cz.size()); ++id) {
    const CzSquare& c = cz.square(id);
    const DyadicInterval xi = c.square.x_interval();
    const DyadicInterval yi = c.square.y_interval();
    squares.push_back(Json{
        {"id", square_key(id)},
        {"level", c.square.level},
        {"i", c.square.i},
        {"j", c.square.j},
        {"x", interval_json(xi.left(), xi.right())},
        {"y", interval_json(yi.left(), yi.right())},
        {"kind", to_string(c.kind)},
        {"relevant", c.relevant},
        {"shadow", c.shadow},
        {"site_in_core", c.site_in_core ? site_ref(sites, *c.site_in_core) : Json(nullptr)},
        {"neighbors", keys(cz.neighbors(id))},
    });
  }
  Json shadows = Json::array();
  for (ShadowId s = 0; s < static_cast<ShadowId>(cz.shadows().size()); ++s) {
    const DyadicInterval& I = cz.shadows()[static_cast<std::size_t>(s)];
    shadows.push_back(Json{{"id", s},
                           {"level", I.level},
                           {"index", I.index},
                           {"interval", interval_json(I.left(), I.right())},
                           {"xhat", site_ref(sites, cz.xhat(s))},
                           {"squares", keys(cz.squares_over(s))}});
  }
  return Json{{"frame", {{"scale", to_string(sites.scale())}, {"translate", to_string(sites.translate())}}},
              {"sites", sites.size()},
              {"max_level", cz.max_level()},
              {"squares", std::move(squares)},
              {"shadows", std::move(shadows)}};
}

Json groups_json(const Pipeline& pipeline) {
  const SiteSet& sites = pipeline.sites;
  const CzDecomposition& cz = pipeline.cz;
  const GroupTable& g = pipeline.groups;
  const AnchorAssignment& a = pipeline.anchors;

  Json groups = Json::array();
  for (const Group& group : g.groups()) {
    Json gangs = Json::array();
    for (const auto& gang : group.gangs) gangs.push_back(keys(gang));
    groups.push_back(Json{{"owner", site_ref(sites, group.owner)},
                          {"owner_x", to_string(sites.x(group.owner))},
                          {"shadows", group.shadows},
                          {"squares", keys(group.squares)},
                          {"tower", keys(group.tower)},
                          {"gangs", std::move(gangs)}});
  }

  Json squares = Json::object();
  for (SquareId id = 0; id < static_cast<SquareId>(cz.size()); ++id) {
    Json entry{{"easy", g.square_easy(cz, id)}, {"relevant", cz.square(id).relevant}};
    const auto group = g.group_of(cz, id);
    entry["group"] = group ? Json(*group) : Json(nullptr);
    if (a.has(id)) {
      const Anchor& an = a.at(id);
      entry["z1"] = to_string(sites.x(an.z1));
      entry["z2"] = to_string(sites.x(an.z2));
      entry["zbar"] = to_string(sites.x(an.zbar));
      entry["sites"] = Json{{"z1", site_ref(sites, an.z1)},
                            {"z2", site_ref(sites, an.z2)},
                            {"zbar", site_ref(sites, an.zbar)}};
      entry["pair_source"] = to_string(an.pair_source);
      entry["zbar_source"] = to_string(an.zbar_source);
    }
    squares[square_key(id)] = std::move(entry);
  }
  return Json{{"K", g.K()}, {"groups", std::move(groups)}, {"squares", std::move(squares)}};
}

Json functionals_json(const Pipeline& pipeline) {
  const SiteSet& sites = pipeline.sites;
  Json out = Json::array();
  for (const SparseFunctional& fn : pipeline.family.functionals()) {
    Json terms = Json::array();
    for (const Term& t : fn.terms) terms.push_back(Json{{"site", site_ref(sites, t.site)}, {"coeff", to_string(t.coeff)}});
    out.push_back(Json{{"lambda", to_double(fn.lambda)},
                       {"lambda_exact", to_string(fn.lambda)},
                       {"terms", std::move(terms)},
                       {"pair", Json::array({square_key(fn.q), square_key(fn.q_other)})},
                       {"kind", to_string(fn.kind)},
                       {"merged", fn.sources.size()}});
  }
  return out;
}

Json jet_json(const Jet& jet) {
  return Json{{"value", jet.value},
              {"dx", jet.grad[0]},
              {"dy", jet.grad[1]},
              {"hxx", jet.hess[0]},
              {"hxy", jet.hess[1]},
              {"hyy", jet.hess[2]}};
}

Json field_json(const ExtensionField& field, const FieldGrid& grid) {
  if (grid.width < 1 || grid.height < 1) throw ValidationError("grid must be at least 1x1");
  const std::size_t count = static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height);
  std::vector<double> value(count), dx(count), dy(count), hxx(count), hxy(count), hyy(count);
  auto at = [](double lo, double hi, int k, int n) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); };
  for (int r = 0; r < grid.height; ++r) {
    const Rational y = from_double(at(grid.y0, grid.y1, r, grid.height));
    for (int c = 0; c < grid.width; ++c) {
      const Jet j = field.evaluate_user({from_double(at(grid.x0, grid.x1, c, grid.width)), y});
      const std::size_t k = static_cast<std::size_t>(r) * static_cast<std::size_t>(grid.width) + static_cast<std::size_t>(c);
      value[k] = j.value;
      dx[k] = j.grad[0];
      dy[k] = j.grad[1];
      hxx[k] = j.hess[0];
      hxy[k] = j.hess[1];
      hyy[k] = j.hess[2];
    }
  }
  return Json{{"width", grid.width},
              {"height", grid.height},
              {"bbox", Json::array({grid.x0, grid.y0, grid.x1, grid.y1})},
              {"order", "row-major, x fastest, y ascending"},
              {"value", std::move(value)},
              {"dx", std::move(dx)},
              {"dy", std::move(dy)},
              {"hxx", std::move(hxx)},
              {"hxy", std::move(hxy)},
              {"hyy", std::move(hyy)}};
}

Json report_json(const Pipeline& pipeline, const std::vector<ComparabilityRow>& rows, const ComparabilityOptions& options) {
  Json out_rows = Json::array();
  for (const ComparabilityRow& row : rows) {
    Json oracle = Json::array();
    for (const OracleEntry& e : row.oracle) {
      Json trace = Json::array();
      for (const OracleStage& s : e.trace) {
        trace.push_back(Json{{"eps", s.eps}, {"objective", s.objective}, {"newton_steps", s.newton_steps}});
      }
      Json entry{{"n", e.n},
                 {"value", e.value},
                 {"smoothing_bound", e.smoothing_bound},
                 {"max_snap", e.max_snap},
                 {"newton_steps", e.newton_steps},
                 {"converged", e.converged},
                 {"sampled_extension", e.sampled_extension},
                 {"trace", std::move(trace)}};
      if (e.error) entry["error"] = *e.error;
      oracle.push_back(std::move(entry));
    }
    Json r{{"p", row.p},
           {"triple_norm", row.triple_norm},
           {"quadrature", row.quadrature},
           {"quadrature_refined", row.quadrature_refined},
           {"r_upper", row.r_upper},
           {"r_lower", Json::array()},
           {"oracle", std::move(oracle)},
           {"degenerate", row.degenerate},
           {"pullback_factor", pipeline.sites.seminorm_pullback_factor(row.p)}};
    // NaN marks a failed oracle solve; JSON has no NaN, so write null.
    for (double v : row.r_lower) r["r_lower"].push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
    r["oracle_extrapolated"] = row.oracle_extrapolated ? Json(*row.oracle_extrapolated) : Json(nullptr);
    r["inconsistency"] = row.inconsistency ? Json(*row.inconsistency) : Json(nullptr);
    out_rows.push_back(std::move(r));
  }
  return Json{{"frame", "normalized"},
              {"sites", pipeline.sites.size()},
              {"nu_max", pipeline.family.size()},
              {"grids", options.grids},
              {"quadrature_order", options.order},
              {"quadrature_refine", options.refine},
              {"rows", std::move(out_rows)}};
}

}  // namespace sobext
