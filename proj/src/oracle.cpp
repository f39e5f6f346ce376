#include "sobext/oracle.hpp"

#include <cholmod.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace sobext {

void OracleGrid::validate() const {
  if (n < 33 || n % 2 == 0) throw ValidationError("oracle grid size must be odd and at least 33");
}

std::vector<std::pair<int, double>> snap_sites(const OracleGrid& grid, const SiteSet& sites) {
  grid.validate();
  std::vector<std::pair<int, double>> out;
  const double h = grid.h();
  for (SiteIndex s = 0; s < static_cast<SiteIndex>(sites.size()); ++s) {
    const Rational exact = (sites.x(s) + from_double(grid.half_width)) / from_double(h);
    const double pos = to_double(exact);
    int i = static_cast<int>(std::lround(pos));
    // Sites are sorted, so a shared node shows up between neighbors.
    if (!out.empty() && out.back().first == i) {
      throw ValidationError("oracle grid n = " + std::to_string(grid.n) + " is too coarse: two sites share a node");
    }
    out.emplace_back(i, std::fabs(pos - i) * h);
  }
  return out;
}

namespace {

// Node-centered stencil: (di, dj, coefficient of a, of b, of d) with
// a = Dxx, b = Dxy, d = Dyy in units of h^-2.
struct Tap {
  int di, dj;
  double a, b, d;
};
constexpr std::array<Tap, 9> kStencil{{
    {0, 0, -2.0, 0.0, -2.0},
    {1, 0, 1.0, 0.0, 0.0},
    {-1, 0, 1.0, 0.0, 0.0},
    {0, 1, 0.0, 0.0, 1.0},
    {0, -1, 0.0, 0.0, 1.0},
    {1, 1, 0.0, 0.25, 0.0},
    {1, -1, 0.0, -0.25, 0.0},
    {-1, 1, 0.0, -0.25, 0.0},
    {-1, -1, 0.0, 0.25, 0.0},
}};

struct CholmodDeleter {
  cholmod_common* common;
  void operator()(cholmod_sparse* a) const { cholmod_free_sparse(&a, common); }
  void operator()(cholmod_factor* l) const { cholmod_free_factor(&l, common); }
  void operator()(cholmod_dense* x) const { cholmod_free_dense(&x, common); }
};

class Problem {
 public:
  Problem(int n, std::vector<int> fixed_nodes, std::vector<double> fixed_values)
      : n_(n), size_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)), fixed_(size_, false) {
    for (std::size_t k = 0; k < fixed_nodes.size(); ++k) {
      fixed_[static_cast<std::size_t>(fixed_nodes[k])] = true;
      fixed_values_.emplace_back(fixed_nodes[k], fixed_values[k]);
    }
    cholmod_start(&common_);
    common_.supernodal = CHOLMOD_SUPERNODAL;
    common_.print = 0;
    build_pattern();
  }
  ~Problem() {
    if (factor_) cholmod_free_factor(&factor_, &common_);
    if (matrix_) cholmod_free_sparse(&matrix_, &common_);
    cholmod_finish(&common_);
  }
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  std::size_t size() const { return size_; }
  int factorizations() const { return factorizations_; }

  void impose(std::vector<double>& x) const {
    for (auto [node, v] : fixed_values_) x[static_cast<std::size_t>(node)] = v;
  }

  std::array<double, 3> stencil_at(const std::vector<double>& x, int i, int j) const {
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (const Tap& t : kStencil) {
      const double v = x[index(i + t.di, j + t.dj)];
      w[0] += t.a * v;
      w[1] += t.b * v;
      w[2] += t.d * v;
    }
    return w;
  }

  /// Sum over interior nodes of (a^2 + 2b^2 + d^2 + eta^2)^(p/2), unit spacing.
  double objective(const std::vector<double>& x, double eta, double power) const {
    double sum = 0.0;
    for (int j = 1; j < n_ - 1; ++j) {
      for (int i = 1; i < n_ - 1; ++i) {
        auto w = stencil_at(x, i, j);
        const double s = w[0] * w[0] + 2.0 * w[1] * w[1] + w[2] * w[2] + eta * eta;
        if (s > 0.0) sum += std::pow(s, 0.5 * power);
      }
    }
    return sum;
  }

  double max_curvature(const std::vector<double>& x) const {
    double m = 0.0;
    for (int j = 1; j < n_ - 1; ++j) {
      for (int i = 1; i < n_ - 1; ++i) {
        auto w = stencil_at(x, i, j);
        m = std::max(m, std::sqrt(w[0] * w[0] + 2.0 * w[1] * w[1] + w[2] * w[2]));
      }
    }
    return m;
  }

  /// Newton direction for the smoothed objective at x; returns the decrement
  /// -g.d and writes the direction. power = 2 gives the biharmonic step.
  double newton_direction(const std::vector<double>& x, double eta, double power, std::vector<double>& dir) {
    std::fill(values_.begin(), values_.end(), 0.0);
    std::vector<double> grad(size_, 0.0);
    std::array<std::size_t, 9> nodes{};
    for (int j = 1; j < n_ - 1; ++j) {
      for (int i = 1; i < n_ - 1; ++i) {
        auto w = stencil_at(x, i, j);
        const std::array<double, 3> v{w[0], 2.0 * w[1], w[2]};
        const double s = w[0] * w[0] + 2.0 * w[1] * w[1] + w[2] * w[2] + eta * eta;
        const double q = 0.5 * power - 1.0;
        const double sq = q == 0.0 ? 1.0 : std::pow(s, q);
        const double c1 = power * sq;
        const double c2 = s > 0.0 ? 2.0 * power * q * sq / s : 0.0;
        // Hessian in (a, b, d): c1 diag(1, 2, 1) + c2 v v^T.
        std::array<std::array<double, 3>, 3> hw{};
        const std::array<double, 3> m{1.0, 2.0, 1.0};
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) hw[r][c] = c2 * v[r] * v[c] + (r == c ? c1 * m[r] : 0.0);
        }
        std::array<std::array<double, 3>, 9> cw{};
        for (std::size_t k = 0; k < kStencil.size(); ++k) {
          const Tap& t = kStencil[k];
          nodes[k] = index(i + t.di, j + t.dj);
          const std::array<double, 3> col{t.a, t.b, t.d};
          grad[nodes[k]] += c1 * (col[0] * v[0] + col[1] * v[1] + col[2] * v[2]);
          for (int r = 0; r < 3; ++r) cw[k][r] = hw[r][0] * col[0] + hw[r][1] * col[1] + hw[r][2] * col[2];
        }
        const std::size_t base = local_slots_offset(i, j);
        std::size_t slot = 0;
        for (std::size_t a = 0; a < kStencil.size(); ++a) {
          const Tap& ta = kStencil[a];
          for (std::size_t b = a; b < kStencil.size(); ++b, ++slot) {
            const std::int64_t pos = slots_[base + slot];
            if (pos < 0) continue;
            values_[static_cast<std::size_t>(pos)] += ta.a * cw[b][0] + ta.b * cw[b][1] + ta.d * cw[b][2];
          }
        }
      }
    }
    for (std::size_t k = 0; k < size_; ++k) {
      if (fixed_[k]) {
        grad[k] = 0.0;
        values_[diag_[k]] = 1.0;
      }
    }
    double* ax = static_cast<double*>(matrix_->x);
    std::copy(values_.begin(), values_.end(), ax);
    if (!factor_) factor_ = cholmod_analyze(matrix_, &common_);
    cholmod_factorize(matrix_, factor_, &common_);
    ++factorizations_;
    if (common_.status != CHOLMOD_OK) throw InvariantError("oracle Hessian is not positive definite");
    cholmod_dense* rhs = cholmod_allocate_dense(size_, 1, size_, CHOLMOD_REAL, &common_);
    double* bx = static_cast<double*>(rhs->x);
    for (std::size_t k = 0; k < size_; ++k) bx[k] = -grad[k];
    cholmod_dense* sol = cholmod_solve(CHOLMOD_A, factor_, rhs, &common_);
    const double* sx = static_cast<double*>(sol->x);
    dir.assign(sx, sx + size_);
    double decrement = 0.0;
    for (std::size_t k = 0; k < size_; ++k) {
      if (fixed_[k]) dir[k] = 0.0;
      decrement -= grad[k] * dir[k];
    }
    cholmod_free_dense(&sol, &common_);
    cholmod_free_dense(&rhs, &common_);
    return decrement;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  std::size_t local_slots_offset(int i, int j) const {
    return (static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(n_ - 2) + static_cast<std::size_t>(i - 1)) * 45;
  }

  void build_pattern() {
    std::vector<std::pair<std::size_t, std::size_t>> entries;  // (col, row) with row <= col
    for (std::size_t k = 0; k < size_; ++k) entries.emplace_back(k, k);
    for (int j = 1; j < n_ - 1; ++j) {
      for (int i = 1; i < n_ - 1; ++i) {
        for (std::size_t a = 0; a < kStencil.size(); ++a) {
          for (std::size_t b = a; b < kStencil.size(); ++b) {
            std::size_t u = index(i + kStencil[a].di, j + kStencil[a].dj);
            std::size_t v = index(i + kStencil[b].di, j + kStencil[b].dj);
            if (fixed_[u] || fixed_[v]) continue;
            entries.emplace_back(std::max(u, v), std::min(u, v));
          }
        }
      }
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    matrix_ = cholmod_allocate_sparse(size_, size_, entries.size(), 1, 1, 1, CHOLMOD_REAL, &common_);
    auto* ap = static_cast<std::int32_t*>(matrix_->p);
    auto* ai = static_cast<std::int32_t*>(matrix_->i);
    std::size_t e = 0;
    diag_.assign(size_, 0);
    for (std::size_t col = 0; col < size_; ++col) {
      ap[col] = static_cast<std::int32_t>(e);
      while (e < entries.size() && entries[e].first == col) {
        ai[e] = static_cast<std::int32_t>(entries[e].second);
        if (entries[e].second == col) diag_[col] = e;
        ++e;
      }
    }
    ap[size_] = static_cast<std::int32_t>(e);
    values_.assign(entries.size(), 0.0);

    auto find_slot = [&](std::size_t u, std::size_t v) -> std::int64_t {
      if (fixed_[u] || fixed_[v]) return -1;
      const std::size_t col = std::max(u, v);
      const std::size_t row = std::min(u, v);
      auto first = ai + ap[col];
      auto last = ai + ap[col + 1];
      auto it = std::lower_bound(first, last, static_cast<std::int32_t>(row));
      return it - ai;
    };
    slots_.assign(static_cast<std::size_t>(n_ - 2) * static_cast<std::size_t>(n_ - 2) * 45, -1);
    for (int j = 1; j < n_ - 1; ++j) {
      for (int i = 1; i < n_ - 1; ++i) {
        std::size_t base = local_slots_offset(i, j);
        std::size_t slot = 0;
        for (std::size_t a = 0; a < kStencil.size(); ++a) {
          for (std::size_t b = a; b < kStencil.size(); ++b, ++slot) {
            slots_[base + slot] = find_slot(index(i + kStencil[a].di, j + kStencil[a].dj),
                                            index(i + kStencil[b].di, j + kStencil[b].dj));
          }
        }
      }
    }
  }

  int n_;
  std::size_t size_;
  std::vector<bool> fixed_;
  std::vector<std::pair<int, double>> fixed_values_;
  cholmod_common common_{};
  cholmod_sparse* matrix_ = nullptr;
  cholmod_factor* factor_ = nullptr;
  std::vector<double> values_;
  std::vector<std::size_t> diag_;
  std::vector<std::int64_t> slots_;
  int factorizations_ = 0;
};

std::vector<double> interpolate(const std::vector<double>& coarse, int nc, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const double ratio = static_cast<double>(nc - 1) / (n - 1);
  for (int j = 0; j < n; ++j) {
    const double y = j * ratio;
    const int j0 = std::min(static_cast<int>(y), nc - 2);
    const double ty = y - j0;
    for (int i = 0; i < n; ++i) {
      const double x = i * ratio;
      const int i0 = std::min(static_cast<int>(x), nc - 2);
      const double tx = x - i0;
      auto at = [&](int a, int b) { return coarse[static_cast<std::size_t>(b) * nc + static_cast<std::size_t>(a)]; };
      out[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] =
          (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) + (1 - tx) * ty * at(i0, j0 + 1) +
          tx * ty * at(i0 + 1, j0 + 1);
    }
  }
  return out;
}

}  // namespace

double discrete_objective(const OracleGrid& grid, const std::vector<double>& values, double p) {
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.n) * static_cast<std::size_t>(grid.n)) {
    throw ValidationError("grid function has the wrong size");
  }
  Problem problem(grid.n, {}, {});
  return std::pow(grid.h(), 2.0 - 2.0 * p) * problem.objective(values, 0.0, p);
}

std::vector<double> sample_field(const OracleGrid& grid, const ExtensionField& field) {
  grid.validate();
  std::vector<double> out(static_cast<std::size_t>(grid.n) * static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      out[static_cast<std::size_t>(j) * grid.n + static_cast<std::size_t>(i)] =
          field.evaluate_global(grid.coord(i), grid.coord(j)).value;
    }
  }
  return out;
}

OracleReport variational_oracle(const SiteSet& sites, const DataVector& f, double p, int n,
                                const OracleOptions& options) {
  check_exponent(p);
  OracleGrid grid{n};
  grid.validate();
  const auto snapped = snap_sites(grid, sites);
  const int mid = (n - 1) / 2;
  std::vector<int> nodes;
  std::vector<double> values;
  OracleReport report;
  report.n = n;
  report.p = p;
  report.h = grid.h();
  double scale = 0.0;
  for (std::size_t s = 0; s < snapped.size(); ++s) {
    nodes.push_back(mid * n + snapped[s].first);
    values.push_back(f.values.at(s));
    report.max_snap = std::max(report.max_snap, snapped[s].second);
    scale = std::max(scale, std::fabs(f.values[s]));
  }
  // Adding c*y changes neither the objective nor the site values; pinning
  // one node off the axis removes that direction.
  nodes.push_back((mid + 1) * n + snapped.front().first);
  values.push_back(f.values.front());

  Problem problem(n, nodes, values);
  std::vector<double> x(problem.size(), 0.0);
  std::vector<double> dir;
  const double unit = std::pow(grid.h(), 2.0 - 2.0 * p);
  const double interior = static_cast<double>(n - 2) * (n - 2);

  if (options.warm_start) {
    x = interpolate(*options.warm_start, options.warm_start_n, n);
    problem.impose(x);
  } else {
    problem.impose(x);
    problem.newton_direction(x, 0.0, 2.0, dir);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += dir[k];
    problem.impose(x);
  }

  const double top = problem.max_curvature(x);
  if (top <= 1e-12 * std::max(scale, 1e-300)) {
    report.value = unit * problem.objective(x, 0.0, p);
    report.converged = true;
    report.factorizations = problem.factorizations();
    report.grid = std::move(x);
    return report;
  }

  double eta = options.warm_start ? 1e-3 * top : top;
  std::vector<double> trial(x.size());
  for (;;) {
    const bool last_stage = interior * std::pow(eta, p) <= options.smoothing_tol * problem.objective(x, 0.0, p);
    const double tol = last_stage ? options.rel_tol : 1e-3;
    double current = problem.objective(x, eta, p);
    int steps = 0;
    bool done = false;
    while (report.newton_steps < options.max_newton) {
      const double decrement = problem.newton_direction(x, eta, p, dir);
      ++steps;
      ++report.newton_steps;
      if (0.5 * decrement <= tol * current) {
        done = true;
        break;
      }
      double t = 1.0;
      double next = current;
      for (int k = 0; k < 60; ++k) {
        for (std::size_t m = 0; m < x.size(); ++m) trial[m] = x[m] + t * dir[m];
        next = problem.objective(trial, eta, p);
        if (next <= current - 1e-4 * t * decrement) break;
        t *= 0.5;
      }
      if (!(next < current)) {
        done = true;
        break;
      }
      x.swap(trial);
      current = next;
    }
    report.trace.push_back({eta / (grid.h() * grid.h()), unit * problem.objective(x, 0.0, p), steps});
    if (!done) break;
    if (last_stage) {
      report.converged = true;
      break;
    }
    eta *= 0.1;
  }
  report.value = unit * problem.objective(x, 0.0, p);
  report.smoothing_bound = unit * interior * std::pow(eta, p);
  report.factorizations = problem.factorizations();
  report.grid = std::move(x);
  return report;
}

}  // namespace sobext
