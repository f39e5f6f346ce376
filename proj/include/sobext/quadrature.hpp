#pragma once

#include <span>
#include <vector>

#include "sobext/extension.hpp"

namespace sobext {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// (Fxx^2 + 2 Fxy^2 + Fyy^2)^(p/2).
double hessian_density(const Jet& j, double p);

struct QuadratureReport {
  std::vector<double> ps;
  /// Integral of the density of the Hessian of T#f over the plane, per p.
  std::vector<double> totals;
  /// cell_totals[c][k]: contribution of cells[c] for ps[k].
  std::vector<SquareId> cells;
  std::vector<std::vector<double>> cell_totals;
  int order = 5;
  int refine = 0;
  std::size_t panels = 0;
  std::size_t points = 0;
};

/// Tensor Gauss quadrature over every relevant cell intersected with
/// Q_inner, split where any bump or the cutoff changes formula, each panel
/// quadrisected `refine` times. Outside Q_inner T#f is affine.
QuadratureReport seminorm_quadrature(const ExtensionField& field, std::span<const double> ps, int order = 5,
                                     int refine = 0);

}  // namespace sobext
