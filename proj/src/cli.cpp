#include "sobext/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sobext/parallel.hpp"

namespace sobext {

namespace {

namespace fs = std::filesystem;

bool needs_sites(Command c) { return c != Command::gen; }
bool needs_values(Command c) {
  return c == Command::norm || c == Command::extend || c == Command::eval || c == Command::verify;
}

void check_readable(const std::string& path, const char* flag) {
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ValidationError(std::string(flag) + ": no such file: " + path);
  std::ifstream probe(path);
  if (!probe) throw ValidationError(std::string(flag) + ": cannot read " + path);
}

void check_writable(const std::string& path) {
  if (path.empty()) return;
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw ValidationError("output directory does not exist: " + parent.string());
  }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ValidationError("cannot write " + path);
  file << text;
  if (!file) throw ValidationError("write failed: " + path);
}

void emit(const std::string& path, const Json& doc, std::ostream& out) { emit(path, doc.dump(1) + "\n", out); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Internal checks that name the failed check; a non-empty list is exit 2.
int report_violations(const std::vector<std::string>& bad, std::ostream& err) {
  if (bad.empty()) return 0;
  for (const auto& msg : bad) err << "invariant violated: " << msg << '\n';
  return 2;
}

struct Loaded {
  InputFile input;
  Pipeline pipeline;
  DataVector f;
};

Loaded load(const RunConfig& config) {
  InputFile input = read_input(config.sites_path);
  if (!config.values_path.empty()) {
    input.values = read_values(config.values_path);
    if (input.values.size() != input.sites.size()) {
      throw ValidationError("got " + std::to_string(input.values.size()) + " values for " +
                            std::to_string(input.sites.size()) + " sites");
    }
  }
  if (needs_values(config.command) && input.values.empty()) {
    throw ValidationError("no values: pass --values or include \"values\" in the sites file");
  }
  Pipeline pipeline = Pipeline::build(input.sites);
  DataVector f;
  if (!input.values.empty()) f = data_from_input_order(pipeline.sites, input.values);
  return {std::move(input), std::move(pipeline), std::move(f)};
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == Command::gen) {
    emit(config.out_path, instance_json(generate(config.family, config.n, config.seed)), out);
    return 0;
  }
  const Loaded loaded = load(config);
  const Pipeline& pl = loaded.pipeline;
  switch (config.command) {
    case Command::decompose: {
      if (int rc = report_violations(audit_decomposition(pl.cz, pl.sites), err)) return rc;
      emit(config.out_path, cz_json(pl), out);
      return 0;
    }
    case Command::groups: {
      if (int rc = report_violations(audit_groups(pl.cz, pl.groups, pl.sites), err)) return rc;
      emit(config.out_path, groups_json(pl), out);
      return 0;
    }
    case Command::functionals:
      emit(config.out_path, functionals_json(pl), out);
      return 0;
    case Command::norm: {
      const std::vector<double> v = pl.family.norms(loaded.f, config.ps);
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (config.ps.size() > 1) out << fmt(config.ps[k]) << ' ';
        out << fmt(v[k]) << '\n';
      }
      return 0;
    }
    case Command::extend: {
      const ExtensionField field(pl, loaded.f);
      emit(config.out_path, field_json(field, config.field), out);
      return 0;
    }
    case Command::eval: {
      const ExtensionField field(pl, loaded.f);
      const Jet j = field.evaluate_user({parse_rational(config.at_x), parse_rational(config.at_y)});
      emit(config.out_path, jet_json(j).dump() + "\n", out);
      return 0;
    }
    case Command::verify: {
      ComparabilityOptions options;
      options.grids = config.oracle_grids;
      options.refine = config.refine;
      const auto rows = comparability_report(pl, loaded.f, config.ps, options);
      emit(config.out_path, report_json(pl, rows, options), out);
      int rc = 0;
      for (const auto& row : rows) {
        if (row.inconsistency) {
          err << "p = " << fmt(row.p) << ": " << *row.inconsistency << '\n';
          rc = 2;
        }
      }
      return rc;
    }
    case Command::render:
      emit(config.out_path, render_svg(pl, config.render), out);
      return 0;
    case Command::gen:
      break;
  }
  throw InvariantError("unhandled command");
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::decompose: return "decompose";
    case Command::groups: return "groups";
    case Command::functionals: return "functionals";
    case Command::norm: return "norm";
    case Command::extend: return "extend";
    case Command::eval: return "eval";
    case Command::verify: return "verify";
    case Command::render: return "render";
    case Command::gen: return "gen";
  }
  return "?";
}

void validate(const RunConfig& config) {
  if (needs_sites(config.command)) check_readable(config.sites_path, "--sites");
  if (!config.values_path.empty()) check_readable(config.values_path, "--values");
  check_writable(config.out_path);
  if (config.ps.empty()) throw ValidationError("--p needs at least one exponent");
  for (double p : config.ps) check_exponent(p);
  if (config.threads < 0) throw ValidationError("--threads must be positive");
  switch (config.command) {
    case Command::extend:
      if (config.field.width < 1 || config.field.height < 1 || config.field.width * 1.0 * config.field.height > 1e8) {
        throw ValidationError("--grid must be WxH with 1 <= W*H <= 1e8");
      }
      if (!(config.field.x0 < config.field.x1) || !(config.field.y0 < config.field.y1)) {
        throw ValidationError("--bbox must be x0,y0,x1,y1 with x0 < x1 and y0 < y1");
      }
      break;
    case Command::eval:
      if (config.at_x.empty() || config.at_y.empty()) throw ValidationError("--at x,y is required");
      parse_rational(config.at_x);
      parse_rational(config.at_y);
      break;
    case Command::verify:
      if (config.oracle_grids.empty()) throw ValidationError("--grid needs at least one size");
      for (int n : config.oracle_grids) OracleGrid{n}.validate();
      if (config.refine < 0 || config.refine > 4) throw ValidationError("--refine must be in [0, 4]");
      break;
    case Command::gen:
      if (config.n < 2) throw ValidationError("--n must be at least 2");
      break;
    default:
      break;
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.threads > 0) set_thread_count(config.threads);
    return execute(config, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace sobext
