#include "sobext/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sobext/outer_constants.hpp"
#include "sobext/parallel.hpp"

namespace sobext {

void check_exponent(double p) {
  if (!(p > 1.0 && p < 2.0)) throw ValidationError("p must lie in (1, 2), got " + std::to_string(p));
}

const char* to_string(FunctionalKind kind) { return kind == FunctionalKind::slope ? "slope" : "value"; }

Rational AffineSlice::slope(const ExactDataVector& f_plus) const {
  return (f_plus.at(z2) - f_plus.at(z1)) * inv_gap;
}

Rational AffineSlice::value(const ExactDataVector& f_plus, const Rational& x) const {
  return f_plus.at(zbar) + slope(f_plus) * (x - xbar);
}

AffineSlice affine_slice(SquareId q, const AnchorAssignment& anchors, const SiteSet& sites) {
  const Anchor& a = anchors.at(q);
  AffineSlice s;
  s.zbar = a.zbar;
  s.z1 = a.z1;
  s.z2 = a.z2;
  s.xbar = sites.x(a.zbar);
  const Rational gap = sites.x(a.z2) - sites.x(a.z1);
  if (gap == 0) throw InvariantError("anchors z1 and z2 coincide");
  s.inv_gap = 1 / gap;
  return s;
}

Rational SparseFunctional::apply(const ExactDataVector& f) const {
  Rational sum = 0;
  for (const Term& t : terms) sum += t.coeff * f.at(t.site);
  return sum;
}

std::vector<Term> expand_over_e(std::vector<Term> over_e_plus, const SiteSet& sites) {
  static const OuterConstants k = outer_affine_constants();
  std::vector<Term> terms;
  terms.reserve(over_e_plus.size() + 1);
  for (Term& t : over_e_plus) {
    if (t.site == kAuxSite) {
      terms.push_back({sites.max_site(), t.coeff * k.a_plus});
      terms.push_back({sites.min_site(), t.coeff * k.a_minus});
    } else {
      terms.push_back(std::move(t));
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.site < b.site; });
  std::vector<Term> out;
  for (Term& t : terms) {
    if (!out.empty() && out.back().site == t.site) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return out;
}

namespace {

std::pair<SparseFunctional, SparseFunctional> functionals_of(const CzDecomposition& d, const AffineSlice& s,
                                                             const AffineSlice& t, const SiteSet& sites, SquareId q,
                                                             SquareId q_other) {
  const Rational delta = d.square(q).square.side();
  const Rational lambda = delta * delta;
  if (s.zbar == t.zbar && s.z1 == t.z1 && s.z2 == t.z2) {
    // Equal slices: both functionals vanish identically.
    return {SparseFunctional{lambda, {}, q, q_other, FunctionalKind::slope, {}},
            SparseFunctional{lambda, {}, q, q_other, FunctionalKind::value, {}}};
  }
  const Rational inv_delta = 1 / delta;
  const Rational ws = s.inv_gap * inv_delta;
  const Rational wt = t.inv_gap * inv_delta;
  std::vector<Term> slope{{s.z2, ws}, {s.z1, -ws}, {t.z2, -wt}, {t.z1, wt}};

  const Rational scale = 1 / lambda;
  const Rational lever = (t.xbar - s.xbar) * s.inv_gap * scale;
  std::vector<Term> value{{t.zbar, scale}, {s.zbar, -scale}, {s.z2, -lever}, {s.z1, lever}};

  SparseFunctional a{lambda, expand_over_e(std::move(slope), sites), q, q_other, FunctionalKind::slope, {}};
  SparseFunctional b{lambda, expand_over_e(std::move(value), sites), q, q_other, FunctionalKind::value, {}};
  return {std::move(a), std::move(b)};
}

}  // namespace

std::pair<SparseFunctional, SparseFunctional> pair_functionals(const CzDecomposition& d, const AnchorAssignment& anchors,
                                                              const SiteSet& sites, SquareId q, SquareId q_other) {
  return functionals_of(d, affine_slice(q, anchors, sites), affine_slice(q_other, anchors, sites), sites, q, q_other);
}

bool passes_filter(const CzDecomposition& d, const GroupTable& g, SquareId q, SquareId q_other) {
  return g.square_easy(d, q) || g.square_easy(d, q_other) || d.square(q).site_in_core.has_value() ||
         d.square(q_other).site_in_core.has_value();
}

FunctionalFamily FunctionalFamily::build(const CzDecomposition& d, const GroupTable& g,
                                         const AnchorAssignment& anchors, const SiteSet& sites) {
  std::vector<std::pair<SquareId, SquareId>> pairs;
  for (std::size_t q = 0; q < d.size(); ++q) {
    const auto id = static_cast<SquareId>(q);
    if (!d.square(id).relevant) continue;
    for (SquareId r : d.neighbors(id)) {
      if (r <= id || !d.square(r).relevant) continue;
      if (passes_filter(d, g, id, r)) pairs.emplace_back(id, r);
    }
  }
  FunctionalFamily fam;
  fam.slices_.assign(d.size(), std::nullopt);
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (d.square(static_cast<SquareId>(q)).relevant) fam.slices_[q] = affine_slice(static_cast<SquareId>(q), anchors, sites);
  }
  fam.raw_.resize(2 * pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    auto [q, r] = pairs[k];
    auto [a, b] = functionals_of(d, *fam.slices_[static_cast<std::size_t>(q)], *fam.slices_[static_cast<std::size_t>(r)],
                                 sites, q, r);
    fam.raw_[2 * k] = std::move(a);
    fam.raw_[2 * k + 1] = std::move(b);
  });

  // Merge functionals equal up to sign; lambda |ell|^p adds exactly.
  auto less = [](const std::vector<Term>* a, const std::vector<Term>* b) {
    return std::lexicographical_compare(a->begin(), a->end(), b->begin(), b->end(), [](const Term& x, const Term& y) {
      return x.site != y.site ? x.site < y.site : x.coeff < y.coeff;
    });
  };
  std::vector<std::vector<Term>> keys(fam.raw_.size());
  for (std::size_t nu = 0; nu < fam.raw_.size(); ++nu) {
    keys[nu] = fam.raw_[nu].terms;
    if (!keys[nu].empty() && keys[nu].front().coeff < 0) {
      for (Term& t : keys[nu]) t.coeff = -t.coeff;
    }
  }
  std::map<const std::vector<Term>*, std::size_t, decltype(less)> seen(less);
  for (std::size_t nu = 0; nu < fam.raw_.size(); ++nu) {
    if (fam.raw_[nu].is_zero()) continue;
    auto [it, inserted] = seen.emplace(&keys[nu], fam.items_.size());
    if (inserted) {
      SparseFunctional merged = fam.raw_[nu];
      merged.terms = keys[nu];
      merged.sources = {nu};
      fam.items_.push_back(std::move(merged));
    } else {
      SparseFunctional& merged = fam.items_[it->second];
      merged.lambda += fam.raw_[nu].lambda;
      merged.sources.push_back(nu);
    }
  }

  fam.by_site_.assign(sites.size(), {});
  for (std::size_t nu = 0; nu < fam.items_.size(); ++nu) {
    for (const Term& t : fam.items_[nu].terms) fam.by_site_[static_cast<std::size_t>(t.site)].push_back(nu);
  }
  return fam;
}

const AffineSlice& FunctionalFamily::slice(SquareId q) const {
  const auto& s = slices_.at(static_cast<std::size_t>(q));
  if (!s) throw ValidationError("square " + std::to_string(q) + " is not relevant and has no affine slice");
  return *s;
}

std::size_t FunctionalFamily::raw_nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(raw_.begin(), raw_.end(), [](const auto& f) { return !f.is_zero(); }));
}

std::size_t FunctionalFamily::max_terms() const {
  std::size_t m = 0;
  for (const auto& f : items_) m = std::max(m, f.terms.size());
  return m;
}

std::vector<Rational> FunctionalFamily::apply(const ExactDataVector& f) const {
  std::vector<Rational> out(items_.size());
  parallel_for(items_.size(), [&](std::size_t nu) { out[nu] = items_[nu].apply(f); });
  return out;
}

std::vector<double> FunctionalFamily::norms(const DataVector& f, std::span<const double> ps) const {
  for (double p : ps) check_exponent(p);
  const std::vector<Rational> ell = apply(to_exact(f));
  std::vector<double> out(ps.size(), 0.0);
  for (std::size_t nu = 0; nu < items_.size(); ++nu) {
    const double v = std::fabs(to_double(ell[nu]));
    if (v == 0.0) continue;
    const double lambda = to_double(items_[nu].lambda);
    for (std::size_t k = 0; k < ps.size(); ++k) out[k] += lambda * std::pow(v, ps[k]);
  }
  return out;
}

double FunctionalFamily::norm(const DataVector& f, double p) const {
  const double ps[] = {p};
  return norms(f, ps).front();
}

std::vector<double> FunctionalFamily::breakdown(const DataVector& f, double p) const {
  check_exponent(p);
  const std::vector<Rational> ell = apply(to_exact(f));
  std::vector<double> out(items_.size());
  for (std::size_t nu = 0; nu < items_.size(); ++nu) {
    out[nu] = to_double(items_[nu].lambda) * std::pow(std::fabs(to_double(ell[nu])), p);
  }
  return out;
}

}  // namespace sobext
