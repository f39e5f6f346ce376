// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (all nine when none are given)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "sobext/comparability.hpp"
#include "sobext/instances.hpp"
#include "sobext/outer_constants.hpp"
#include "sobext/pipeline.hpp"

using namespace sobext;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInner = 0x1p-10;
const double kPs[] = {1.25, 1.5, 1.75};

// Frozen regression bands for criterion 6. The first full run gave R_upper in
// [60.2, 2890] and R_lower in [0.0608, 0.29]; the R_lower band is that range
// widened by 2x on each side.
constexpr double kUpperBound = 1e4;
constexpr double kLowerMin = 0.03;
constexpr double kLowerMax = 0.6;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

void report(int id, const char* name, const Outcome& o) {
  std::printf("%s [%d] %s: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              o.first_failure.empty() ? "" : "; first failure: ", o.first_failure.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every family at a spread of sizes; the lattice family stops at 21 sites.
std::vector<Instance> battery() {
  std::vector<Instance> out;
  std::uint64_t seed = 1000;
  for (Family fam : {Family::uniform, Family::cluster, Family::near_pair, Family::lattice}) {
    for (std::size_t n : {2, 3, 5, 9, 17, 21, 33, 65, 129, 257, 512}) {
      if (fam == Family::lattice && n > 21) continue;
      for (int rep = 0; rep < 2; ++rep) out.push_back(generate(fam, n, seed++));
    }
  }
  return out;
}

// ---------------------------------------------------------------- 1

Outcome interpolation() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const Family fams[] = {Family::uniform, Family::cluster, Family::near_pair};
  double worst = 0.0;
  std::size_t total_sites = 0;
  for (int k = 0; k < 200; ++k) {
    // Log-uniform sizes in [2, 512], with both ends present.
    std::size_t n = k == 0 ? 2 : k == 1 ? 512 : static_cast<std::size_t>(std::lround(std::exp2(1.0 + 8.0 * std::uniform_real_distribution<double>(0, 1)(rng))));
    n = std::clamp<std::size_t>(n, 2, 512);
    const Instance inst = generate(fams[k % 3], n, 5000 + static_cast<std::uint64_t>(k));
    const Pipeline pl = Pipeline::build(inst.sites);
    const DataVector f = data_from_input_order(pl.sites, inst.values);
    const ExtensionField F(pl, f);
    double fmax = 0.0;
    for (double v : inst.values) fmax = std::max(fmax, std::fabs(v));
    for (std::size_t s = 0; s < inst.sites.size(); ++s) {
      const double err = std::fabs(F.evaluate_user({inst.sites[s], Rational(0)}).value - inst.values[s]);
      const double rel = err / fmax;
      worst = std::max(worst, rel);
      if (rel > 1e-9) o.fail(fmt("%s N=%zu site %zu: error %.3g", to_string(inst.family), n, s, err));
    }
    total_sites += n;
  }
  const double dt = seconds_since(t0);
  if (dt >= 60.0) o.fail(fmt("runtime %.1f s", dt));
  o.detail = fmt("200 instances, %zu sites, max |Tf(z)-f(z)|/max|f| = %.2e (limit 1e-9), %.1f s (limit 60 s)",
                 total_sites, worst, dt);
  return o;
}

// ---------------------------------------------------------------- 2

// Structural checks written against the definitions, independent of the
// library's own audit. Square corners are exact in double.
std::vector<std::string> structural_violations(const CzDecomposition& d, const SiteSet& s) {
  std::vector<std::string> bad;
  auto key = [](int level, std::int64_t i, std::int64_t j) {
    return std::to_string(level) + ":" + std::to_string(i) + ":" + std::to_string(j);
  };
  std::unordered_set<std::string> present;
  Rational area(0);
  for (const CzSquare& c : d.squares()) {
    area += c.square.area();
    if (!c.square.root) present.insert(key(c.square.level, c.square.i, c.square.j));
  }
  if (area != 4) bad.push_back("areas sum to " + to_string(area));

  // Two dyadic squares overlap in their interiors only if one contains the other.
  for (const CzSquare& c : d.squares()) {
    if (c.square.root) {
      if (d.size() != 1) bad.push_back("root square next to others");
      continue;
    }
    std::int64_t i = c.square.i, j = c.square.j;
    for (int level = c.square.level - 1; level >= 0; --level) {
      i = i >= 0 ? i / 2 : -((-i + 1) / 2);
      j = j >= 0 ? j / 2 : -((-j + 1) / 2);
      if (present.count(key(level, i, j))) bad.push_back("nested squares at level " + std::to_string(level));
    }
  }

  auto count_triple = [&](const Rational& x0, const Rational& x1, const Rational& y0, const Rational& y1) {
    const Rational w = x1 - x0;
    const Rational ylo = y0 - w, yhi = y1 + w;
    if (!(ylo < 0 && 0 < yhi)) return std::size_t{0};
    std::size_t k = 0;
    for (const Rational& x : s.xs()) {
      if (x0 - w < x && x < x1 + w) ++k;
    }
    return k;
  };
  for (const CzSquare& c : d.squares()) {
    const DyadicSquare& q = c.square;
    const auto X = q.x_interval(), Y = q.y_interval();
    if (count_triple(X.left(), X.right(), Y.left(), Y.right()) > 1) bad.push_back("3Q holds two sites");
    if (!q.root) {
      // Maximality: the parent's triple holds at least two sites.
      // The parent of a level-0 square is Q0 = [-1, 1]^2.
      const Rational side = q.level == 0 ? Rational(2) : Rational(2 * q.side());
      const Rational px = q.level == 0 ? Rational(-1) : Rational(X.left() - (q.i % 2 == 0 ? Rational(0) : q.side()));
      const Rational py = q.level == 0 ? Rational(-1) : Rational(Y.left() - (q.j % 2 == 0 ? Rational(0) : q.side()));
      if (count_triple(px, px + side, py, py + side) < 2) bad.push_back("square is not maximal");
    }
    if (!q.root) {
      const std::int64_t j = q.j;
      const SquareKind want = j == 0    ? SquareKind::contact_above
                              : j == -1 ? SquareKind::contact_below
                              : j == 1  ? SquareKind::contactless_above
                                        : SquareKind::contactless_below;
      if (j > 1 || j < -2) bad.push_back("square is neither contact nor contactless");
      else if (c.kind != want) bad.push_back("wrong kind");
    }
    if (c.relevant && q.side() > pow2(-8)) bad.push_back("relevant square larger than 2^-8");
    // 1.1Q meets Q_inner.
    const double h = q.side_d(), cx = X.center_d(), cy = Y.center_d();
    const bool relevant = std::fabs(cx) - 0.55 * h < kInner && std::fabs(cy) - 0.55 * h < kInner;
    if (relevant != c.relevant) bad.push_back("relevance flag disagrees");
  }

  // Touching pairs by brute force; sides within a factor 2; neighbor lists agree.
  const std::size_t m = d.size();
  std::vector<std::array<double, 4>> box(m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto X = d.squares()[a].square.x_interval(), Y = d.squares()[a].square.y_interval();
    box[a] = {X.left_d(), X.right_d(), Y.left_d(), Y.right_d()};
  }
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<SquareId> touching;
    for (std::size_t b = 0; b < m; ++b) {
      if (box[a][0] <= box[b][1] && box[b][0] <= box[a][1] && box[a][2] <= box[b][3] && box[b][2] <= box[a][3]) {
        touching.push_back(static_cast<SquareId>(b));
        const double r = (box[b][1] - box[b][0]) / (box[a][1] - box[a][0]);
        if (r != 0.5 && r != 1.0 && r != 2.0) bad.push_back(fmt("touching side ratio %g", r));
      }
    }
    const auto nb = d.neighbors(static_cast<SquareId>(a));
    if (!std::equal(touching.begin(), touching.end(), nb.begin(), nb.end())) bad.push_back("neighbor list differs");
  }
  return bad;
}

Outcome cz_structure(const std::vector<Instance>& instances) {
  Outcome o;
  std::size_t squares = 0, violations = 0;
  for (const Instance& inst : instances) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    auto bad = audit_decomposition(d, s);
    if (inst.sites.size() <= 129) {
      const auto brute = structural_violations(d, s);
      bad.insert(bad.end(), brute.begin(), brute.end());
    }
    squares += d.size();
    violations += bad.size();
    if (!bad.empty()) o.fail(fmt("%s N=%zu: %s", to_string(inst.family), inst.sites.size(), bad.front().c_str()));
  }
  o.detail = fmt("%zu instances, %zu squares, %zu violations", instances.size(), squares, violations);
  return o;
}

// ---------------------------------------------------------------- 3

Outcome grouping(const std::vector<Instance>& instances) {
  Outcome o;
  std::size_t groups = 0, violations = 0, hard = 0;
  for (const Instance& inst : instances) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    const GroupTable g = GroupTable::build(d, s);
    auto bad = audit_groups(d, g, s);
    // Independent: every hard relevant shadow has exactly one owner, found by brute force.
    for (ShadowId sh = 0; sh < static_cast<ShadowId>(d.shadows().size()); ++sh) {
      bool relevant = false;
      for (SquareId q : d.squares_over(sh)) relevant = relevant || d.square(q).relevant;
      if (!relevant || g.shadow_easy(sh)) continue;
      ++hard;
      const DyadicInterval& I = d.shadows()[static_cast<std::size_t>(sh)];
      const Rational inf41 = I.center() - Rational(41) * I.length() / 2;
      const Rational inf9 = I.center() - Rational(9) * I.length() / 2;
      std::vector<Rational> eplus{Rational(-1)};
      for (const Rational& x : s.xs()) eplus.push_back(x);
      std::size_t owners = 0;
      for (const Rational& x : eplus) {
        if (!(x <= inf41)) continue;
        bool empty = true;
        for (const Rational& y : eplus) empty = empty && !(x < y && y <= inf9);
        owners += empty;
      }
      if (owners != 1) bad.push_back(fmt("hard relevant shadow with %zu owners", owners));
      else if (!g.shadow_owner(sh)) bad.push_back("hard relevant shadow left without a group");
    }
    // Squares of different groups never touch.
    for (SquareId q = 0; q < static_cast<SquareId>(d.size()); ++q) {
      const auto gq = g.group_of(d, q);
      if (!gq) continue;
      for (SquareId r : d.neighbors(q)) {
        const auto gr = g.group_of(d, r);
        if (gr && *gr != *gq) bad.push_back("touching squares from different groups");
      }
    }
    groups += g.groups().size();
    violations += bad.size();
    if (!bad.empty()) o.fail(fmt("%s N=%zu: %s", to_string(inst.family), inst.sites.size(), bad.front().c_str()));
  }
  o.detail = fmt("%zu instances, %zu groups, %zu hard relevant shadows, %zu violations", instances.size(), groups,
                 hard, violations);
  return o;
}

// ---------------------------------------------------------------- 4

Outcome sparsity(const std::vector<Instance>& instances) {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 999);
  auto random_exact = [&](std::size_t n) {
    ExactDataVector f;
    for (std::size_t k = 0; k < n; ++k) {
      Rational v(num(rng), den(rng));
      v.canonicalize();
      f.values.push_back(v);
    }
    return f;
  };
  double worst_ratio = 0.0, sxy = 0.0, sxx = 0.0;
  std::size_t max_terms = 0, checked = 0;
  for (const Instance& inst : instances) {
    const Pipeline pl = Pipeline::build(inst.sites);
    const double n = static_cast<double>(inst.sites.size());
    const double nu = static_cast<double>(pl.family.size());
    worst_ratio = std::max(worst_ratio, nu / n);
    sxy += nu * n;
    sxx += n * n;
    if (nu > 40 * n) o.fail(fmt("N=%zu: nu_max = %zu", inst.sites.size(), pl.family.size()));
    for (const auto& fn : pl.family.functionals()) max_terms = std::max(max_terms, fn.terms.size());
    // Linearity, exact.
    const ExactDataVector f = random_exact(inst.sites.size()), g = random_exact(inst.sites.size());
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    ExactDataVector h;
    for (std::size_t k = 0; k < f.size(); ++k) h.values.push_back(a * f.values[k] + b * g.values[k]);
    const auto lf = pl.family.apply(f), lg = pl.family.apply(g), lh = pl.family.apply(h);
    for (std::size_t k = 0; k < lf.size(); ++k) {
      ++checked;
      if (lh[k] != a * lf[k] + b * lg[k]) o.fail(fmt("N=%zu: functional %zu is not linear", inst.sites.size(), k));
    }
  }
  if (max_terms > 6) o.fail(fmt("a functional references %zu sites", max_terms));
  o.detail = fmt("max nu_max/N = %.2f (limit 40), fitted slope nu_max ~ %.2f N, max sites per functional %zu (limit 6), "
                 "%zu exact linearity checks",
                 worst_ratio, sxy / sxx, max_terms, checked);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome degeneracy() {
  Outcome o;
  double worst_triple = 0.0, worst_quad = 0.0, worst_oracle = 0.0;
  std::size_t cases = 0;
  std::uint64_t seed = 300;
  for (Family fam : {Family::lattice, Family::uniform}) {
    for (std::size_t n : {3, 7, 12, 21}) {
      const Instance inst = generate(fam, n, seed++);
      const Pipeline pl = Pipeline::build(inst.sites);
      // On the lattice k/10240 a slope of 10240 keeps every value an integer.
      const Rational slope = fam == Family::lattice ? Rational(-10240) : Rational(3, 8);
      const DataVector f = data_from_input_order(pl.sites, affine_values(inst.sites, slope, Rational(5, 4)));
      for (const Rational& v : pl.family.apply(to_exact(f))) {
        if (v != 0) o.fail(fmt("%s N=%zu: a functional is nonzero on affine data", to_string(fam), n));
      }
      const ExtensionField F(pl, f);
      const QuadratureReport q = seminorm_quadrature(F, kPs, 5, 1);
      const auto triple = pl.family.norms(f, kPs);
      for (std::size_t k = 0; k < 3; ++k) {
        ++cases;
        worst_triple = std::max(worst_triple, triple[k]);
        worst_quad = std::max(worst_quad, q.totals[k]);
        if (triple[k] != 0.0) o.fail(fmt("%s N=%zu p=%g: triple norm %.3g", to_string(fam), n, kPs[k], triple[k]));
        if (q.totals[k] > 1e-12) o.fail(fmt("%s N=%zu p=%g: quadrature %.3g", to_string(fam), n, kPs[k], q.totals[k]));
        // Uniform sites are far finer than any oracle grid; the oracle runs on the lattice.
        if (fam != Family::lattice) continue;
        const OracleReport r = variational_oracle(pl.sites, f, kPs[k], 129);
        worst_oracle = std::max(worst_oracle, r.value);
        if (!(r.value <= 1e-8)) o.fail(fmt("lattice N=%zu p=%g: oracle %.3g", n, kPs[k], r.value));
      }
    }
  }
  o.detail = fmt("%zu (instance, p) cases: max triple norm %.1e (want 0), max quadrature %.1e (limit 1e-12), "
                 "max oracle %.1e (limit 1e-8)",
                 cases, worst_triple, worst_quad, worst_oracle);
  return o;
}

// ---------------------------------------------------------------- 6, 7

struct ComparabilityRun {
  std::vector<double> upper, lower129, lower257;
  double worst_upper_drift = 1.0, worst_lower_drift = 1.0;
  double worst_gap = 0.0;  // max over instances of max(0, oracle(257) - quadrature) / quadrature
  double worst_feasible = 0.0;  // max oracle(n) / sampled extension objective
  std::vector<std::string> failures6, failures7;
  double seconds = 0.0;
  std::size_t rows = 0;
};

ComparabilityRun run_comparability() {
  ComparabilityRun run;
  const auto t0 = Clock::now();
  ComparabilityOptions opts;
  opts.grids = {129, 257};
  opts.refine = 1;
  opts.check_refinement = true;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k % 10);
    const Instance inst = generate(Family::lattice, n, 9000 + static_cast<std::uint64_t>(k));
    const Pipeline pl = Pipeline::build(inst.sites);
    const DataVector f = data_from_input_order(pl.sites, inst.values);
    const auto rows = comparability_report(pl, f, kPs, opts);
    for (const auto& row : rows) {
      ++run.rows;
      const std::string tag = fmt("instance %d (N=%zu) p=%g", k, n, row.p);
      if (row.degenerate || row.inconsistency || row.oracle.size() != 2 || row.oracle[0].error || row.oracle[1].error) {
        run.failures6.push_back(tag + ": row unusable");
        continue;
      }
      const double up = row.r_upper;
      const double up_refined = row.quadrature_refined / row.triple_norm;
      const double lo129 = row.r_lower[0], lo257 = row.r_lower[1];
      run.upper.push_back(up);
      run.lower129.push_back(lo129);
      run.lower257.push_back(lo257);
      const double du = std::max(up / up_refined, up_refined / up);
      const double dl = std::max(lo129 / lo257, lo257 / lo129);
      run.worst_upper_drift = std::max(run.worst_upper_drift, du);
      run.worst_lower_drift = std::max(run.worst_lower_drift, dl);
      if (!(up >= 1 / kUpperBound && up <= kUpperBound)) run.failures6.push_back(tag + fmt(": R_upper %.3g", up));
      for (double lo : {lo129, lo257}) {
        if (!(lo >= kLowerMin && lo <= kLowerMax)) run.failures6.push_back(tag + fmt(": R_lower %.3g", lo));
      }
      if (du > 2.0) run.failures6.push_back(tag + fmt(": R_upper drifts %.3gx under refinement", du));
      if (dl > 2.0) run.failures6.push_back(tag + fmt(": R_lower drifts %.3gx from 129 to 257", dl));
      if (!row.oracle[0].converged || !row.oracle[1].converged) run.failures6.push_back(tag + ": oracle did not converge");

      const double gap = std::max(0.0, row.oracle[1].value - row.quadrature) / row.quadrature;
      run.worst_gap = std::max(run.worst_gap, gap);
      if (gap > 0.1) run.failures7.push_back(tag + fmt(": oracle(257) exceeds quadrature by %.3g", gap));
      for (const auto& e : row.oracle) {
        const double ratio = e.value / e.sampled_extension;
        run.worst_feasible = std::max(run.worst_feasible, ratio);
        if (ratio > 1 + 1e-9) run.failures7.push_back(tag + fmt(": oracle(%d) above the sampled extension", e.n));
      }
    }
  }
  run.seconds = seconds_since(t0);
  return run;
}

Outcome comparability(const ComparabilityRun& run) {
  Outcome o;
  for (const auto& f : run.failures6) o.fail(f);
  if (run.seconds >= 1800) o.fail(fmt("runtime %.0f s", run.seconds));
  const Band u = summarize(run.upper), l1 = summarize(run.lower129), l2 = summarize(run.lower257);
  o.detail = fmt("%zu rows (50 instances x 3 p); R_upper in [%.3g, %.3g] median %.3g (band [1e-4, 1e4]); "
                 "R_lower(129) in [%.3g, %.3g], R_lower(257) in [%.3g, %.3g] (band [%g, %g]); "
                 "max drift R_upper %.3gx, R_lower %.3gx (limit 2x); %.0f s (limit 1800 s)",
                 run.rows, u.min, u.max, u.median, l1.min, l1.max, l2.min, l2.max, kLowerMin, kLowerMax,
                 run.worst_upper_drift, run.worst_lower_drift, run.seconds);
  return o;
}

Outcome feasibility(const ComparabilityRun& run) {
  Outcome o;
  for (const auto& f : run.failures7) o.fail(f);
  o.detail = fmt("%zu rows: max (oracle(257) - quadrature)+ / quadrature = %.3g (limit 0.1), "
                 "max oracle / sampled extension = %.6f (limit 1)",
                 run.rows, run.worst_gap, run.worst_feasible);
  return o;
}

// ---------------------------------------------------------------- 8

Outcome outer_constants() {
  Outcome o;
  // L(x) = c0 + c1 x through (x+, F+) and (x-, F-); L(-1) = a+ F+ + a- F-.
  // Solve [1 x+; 1 x-]^T [a+; a-] = [1; -1] by elimination.
  const Rational xp = pow2(-11), xm = -pow2(-11);
  Rational m[2][3] = {{Rational(1), Rational(1), Rational(1)}, {xp, xm, Rational(-1)}};
  const Rational factor = m[1][0] / m[0][0];
  for (int c = 0; c < 3; ++c) m[1][c] -= factor * m[0][c];
  const Rational am = m[1][2] / m[1][1];
  const Rational ap = (m[0][2] - m[0][1] * am) / m[0][0];
  const OuterConstants lib = outer_affine_constants();
  if (ap != Rational(-2047, 2) || am != Rational(2049, 2)) o.fail("the 2x2 solve disagrees with -1023.5 / 1024.5");
  if (lib.a_plus != ap || lib.a_minus != am) o.fail("library constants " + to_string(lib.a_plus) + ", " + to_string(lib.a_minus));

  // Affine data must come back exactly at (-1, 0).
  std::size_t cases = 0;
  double worst = 0.0;
  std::uint64_t seed = 40;
  for (Family fam : {Family::uniform, Family::cluster, Family::near_pair, Family::lattice}) {
    for (std::size_t n : {2, 5, 17}) {
      const Instance inst = generate(fam, n, seed++);
      const Pipeline pl = Pipeline::build(inst.sites);
      for (const auto& [a, b] : {std::pair{Rational(0), Rational(7, 4)}, std::pair{Rational(2048), Rational(-1, 2)}}) {
        ++cases;
        // Data a x + b in the normalized frame, exact in double.
        DataVector f;
        for (const Rational& x : pl.sites.xs()) f.values.push_back(to_double(a * x + b));
        const ExtensionField F(pl, f);
        const Rational want = b - a;
        if (from_double(*F.data().aux) != want) o.fail(fmt("%s N=%zu: f+(-1, 0) = %.17g", to_string(fam), n, *F.data().aux));
        const double got = F.evaluate_global(-1.0, 0.0).value;
        worst = std::max(worst, std::fabs(got - to_double(want)));
        if (from_double(got) != want) o.fail(fmt("%s N=%zu: eF(-1, 0) = %.17g, want %s", to_string(fam), n, got, to_string(want).c_str()));
      }
    }
  }
  o.detail = fmt("a+ = %s, a- = %s (2x2 solve and library agree); %zu affine cases, max |eF(-1,0) - L(-1)| = %.1e",
                 to_string(ap).c_str(), to_string(am).c_str(), cases, worst);
  return o;
}

// ---------------------------------------------------------------- 9

double d1(const std::function<double(double)>& f, double h) {
  return (-f(-3 * h) + 9 * f(-2 * h) - 45 * f(-h) + 45 * f(h) - 9 * f(2 * h) + f(3 * h)) / (60 * h);
}

double theta_at(const BumpSystem& b, SquareId q, double x, double y, int what) {
  for (const auto& w : b.weights(x, y)) {
    if (w.square != q) continue;
    return what == 0 ? w.theta.value : w.theta.grad[what - 1];
  }
  return 0.0;
}

double breakpoint_distance(const CzDecomposition& d, SquareId cell, double x, double y) {
  double best = INFINITY;
  for (SquareId q : d.neighbors(cell)) {
    if (!d.square(q).relevant) continue;
    const DyadicSquare& s = d.square(q).square;
    const double side = s.side_d(), cx = s.x_interval().center_d(), cy = s.y_interval().center_d();
    for (double r : {kBumpPlateau * side, kBumpSupport * side}) {
      best = std::min({best, std::fabs(std::fabs(x - cx) - r), std::fabs(std::fabs(y - cy) - r)});
    }
  }
  return best;
}

Outcome partition() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-kInner, kInner);
  const Instance instances[] = {generate(Family::uniform, 64, 1), generate(Family::cluster, 64, 2),
                                generate(Family::near_pair, 64, 3), generate(Family::lattice, 12, 4)};
  double worst_sum = 0.0, worst_fd = 0.0;
  std::size_t points = 0, fd_checks = 0;
  for (const Instance& inst : instances) {
    const Pipeline pl = Pipeline::build(inst.sites);
    const BumpSystem b(pl.cz);
    for (int k = 0; k < 2500; ++k, ++points) {
      // Half the sample hugs the axis, where the squares are small.
      const double x = u(rng), y = k % 2 ? u(rng) * 1e-3 : u(rng);
      double sum = 0.0;
      for (const auto& w : b.weights(x, y)) sum += w.theta.value;
      worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
      if (std::fabs(sum - 1.0) > 1e-12) o.fail(fmt("sum of theta = 1 %+.3g at (%.17g, %.17g)", sum - 1.0, x, y));
      if (k % 10) continue;
      const SquareId cell = pl.cz.locate(x, y);
      const double delta = pl.cz.square(cell).square.side_d();
      const double h = delta * 2.5e-4;
      if (breakpoint_distance(pl.cz, cell, x, y) < 4 * h) continue;
      if (std::fabs(x) + 4 * h > kInner || std::fabs(y) + 4 * h > kInner) continue;
      for (const auto& w : b.weights(x, y)) {
        const SquareId q = w.square;
        auto along_x = [&](int what) { return [&, what](double s) { return theta_at(b, q, x + s, y, what); }; };
        auto along_y = [&](int what) { return [&, what](double s) { return theta_at(b, q, x, y + s, what); }; };
        const double fd[5] = {d1(along_x(0), h), d1(along_y(0), h), d1(along_x(1), h), d1(along_y(1), h),
                              d1(along_y(2), h)};
        const double an[5] = {w.theta.grad[0], w.theta.grad[1], w.theta.hess[0], w.theta.hess[1], w.theta.hess[2]};
        const int order[5] = {1, 1, 2, 2, 2};
        for (int i = 0; i < 5; ++i) {
          const double rel = std::fabs(an[i] - fd[i]) / std::max(std::fabs(an[i]), std::pow(delta, -order[i]));
          worst_fd = std::max(worst_fd, rel);
          ++fd_checks;
          if (rel > 1e-6) o.fail(fmt("derivative %d of theta at (%.17g, %.17g): relative error %.3g", i, x, y, rel));
        }
      }
    }
  }
  o.detail = fmt("%zu points: max |sum theta - 1| = %.1e (limit 1e-12); %zu derivative checks, max relative FD "
                 "error %.1e (limit 1e-6)",
                 points, worst_sum, fd_checks, worst_fd);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int k = 1; k < argc; ++k) want.insert(std::atoi(argv[k]));
  auto on = [&](int id) { return want.empty() || want.count(id) > 0; };
  bool ok = true;
  auto record = [&](int id, const char* name, const Outcome& o) {
    report(id, name, o);
    ok = ok && o.pass;
  };

  if (on(1)) record(1, "interpolation", interpolation());
  if (on(2) || on(3) || on(4)) {
    const auto instances = battery();
    if (on(2)) record(2, "CZ structure", cz_structure(instances));
    if (on(3)) record(3, "grouping", grouping(instances));
    if (on(4)) record(4, "sparsity and linearity", sparsity(instances));
  }
  if (on(5)) record(5, "affine degeneracy", degeneracy());
  if (on(6) || on(7)) {
    const ComparabilityRun run = run_comparability();
    if (on(6)) record(6, "two-sided comparability", comparability(run));
    if (on(7)) record(7, "feasibility sandwich", feasibility(run));
  }
  if (on(8)) record(8, "outer constants", outer_constants());
  if (on(9)) record(9, "partition of unity", partition());
  return ok ? 0 : 1;
}
