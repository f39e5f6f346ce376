#include "sobext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sobext/parallel.hpp"

namespace sobext {

GaussRule gauss_legendre(int order) {
  if (order < 1 || order > 64) throw ValidationError("quadrature order must be in [1, 64]");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double hessian_density(const Jet& j, double p) {
  const double s = j.hess[0] * j.hess[0] + 2.0 * j.hess[1] * j.hess[1] + j.hess[2] * j.hess[2];
  return s == 0.0 ? 0.0 : std::pow(s, 0.5 * p);
}

namespace {

constexpr double kInner = 0x1p-10;

std::vector<double> breakpoints(double lo, double hi, std::vector<double> cuts) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::vector<double> out;
  for (double c : cuts) {
    if (c >= lo && c <= hi) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

QuadratureReport seminorm_quadrature(const ExtensionField& field, std::span<const double> ps, int order, int refine) {
  for (double p : ps) check_exponent(p);
  if (refine < 0 || refine > 8) throw ValidationError("refinement level must be in [0, 8]");
  const CzDecomposition& cz = field.pipeline().cz;
  const GaussRule rule = gauss_legendre(order);
  QuadratureReport report;
  report.ps.assign(ps.begin(), ps.end());
  report.order = order;
  report.refine = refine;
  report.cells = cz.relevant();
  report.cell_totals.assign(report.cells.size(), std::vector<double>(ps.size(), 0.0));
  std::vector<std::size_t> panel_count(report.cells.size(), 0);

  parallel_for(report.cells.size(), [&](std::size_t c) {
    const SquareId cell = report.cells[c];
    const DyadicSquare& sq = cz.square(cell).square;
    const double x_lo = std::max(sq.x_interval().left_d(), -kInner);
    const double x_hi = std::min(sq.x_interval().right_d(), kInner);
    const double y_lo = std::max(sq.y_interval().left_d(), -kInner);
    const double y_hi = std::min(sq.y_interval().right_d(), kInner);
    if (!(x_lo < x_hi && y_lo < y_hi)) return;
    std::vector<double> xcuts{-3.0 * 0x1p-12, 3.0 * 0x1p-12};
    std::vector<double> ycuts{-0x1p-12, 0x1p-12};
    for (SquareId q : cz.neighbors(cell)) {
      if (!cz.square(q).relevant) continue;
      const DyadicSquare& nq = cz.square(q).square;
      const double cx = nq.x_interval().center_d();
      const double cy = nq.y_interval().center_d();
      const double s = nq.side_d();
      for (double r : {kBumpPlateau * s, 0.5 * s, kBumpSupport * s}) {
        xcuts.push_back(cx - r);
        xcuts.push_back(cx + r);
        ycuts.push_back(cy - r);
        ycuts.push_back(cy + r);
      }
    }
    const std::vector<double> xs = breakpoints(x_lo, x_hi, std::move(xcuts));
    const std::vector<double> ys = breakpoints(y_lo, y_hi, std::move(ycuts));
    const int split = 1 << refine;
    auto& sums = report.cell_totals[c];
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
      for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
        const double wx = (xs[a + 1] - xs[a]) / split;
        const double wy = (ys[b + 1] - ys[b]) / split;
        for (int u = 0; u < split; ++u) {
          for (int v = 0; v < split; ++v) {
            const double x0 = xs[a] + u * wx;
            const double y0 = ys[b] + v * wy;
            ++panel_count[c];
            for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
              const double x = x0 + 0.5 * wx * (rule.nodes[m] + 1.0);
              for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
                const double y = y0 + 0.5 * wy * (rule.nodes[n] + 1.0);
                const Jet j = field.evaluate_global_in_cell(cell, x, y);
                const double w = 0.25 * wx * wy * rule.weights[m] * rule.weights[n];
                for (std::size_t k = 0; k < ps.size(); ++k) sums[k] += w * hessian_density(j, ps[k]);
              }
            }
          }
        }
      }
    }
  });

  report.totals.assign(ps.size(), 0.0);
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    for (std::size_t k = 0; k < ps.size(); ++k) report.totals[k] += report.cell_totals[c][k];
    report.panels += panel_count[c];
  }
  report.points = report.panels * rule.nodes.size() * rule.nodes.size();
  return report;
}

}  // namespace sobext
