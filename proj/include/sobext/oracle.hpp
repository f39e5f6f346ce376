#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sobext/extension.hpp"

namespace sobext {

/// Square grid of n x n nodes on [-6.4 2^-11, 6.4 2^-11]^2 (normalized frame),
/// which contains 3 Q_inner. For n = 129 and n = 257 the nodes include every
/// multiple of 2^-11 / 10 in range, and y = 0 is the middle row.
struct OracleGrid {
  int n = 129;
  double half_width = 6.4 * 0x1p-11;

  double h() const { return 2.0 * half_width / (n - 1); }
  double coord(int i) const { return -half_width + i * h(); }
  /// Rejects even n and n < 33.
  void validate() const;
};

struct OracleOptions {
  /// Relative suboptimality target for the final stage.
  double rel_tol = 1e-6;
  /// The smoothing eps is shrunk until its effect is below this fraction of the objective.
  double smoothing_tol = 1e-7;
  int max_newton = 400;
  /// Grid values from a previous solve (any odd size), interpolated as a start.
  const std::vector<double>* warm_start = nullptr;
  int warm_start_n = 0;
};

struct OracleStage {
  double eps;
  double objective;
  int newton_steps;
};

struct OracleReport {
  int n = 0;
  double p = 0.0;
  double h = 0.0;
  /// min over grid functions of h^2 sum (Dxx^2 + 2 Dxy^2 + Dyy^2)^(p/2), normalized frame.
  double value = 0.0;
  /// Upper bound on value - (true discrete minimum) caused by smoothing.
  double smoothing_bound = 0.0;
  double max_snap = 0.0;
  int newton_steps = 0;
  int factorizations = 0;
  bool converged = false;
  std::vector<OracleStage> trace;
  /// Minimizer, row-major with x fastest.
  std::vector<double> grid;
};

/// Column of the node on the axis row nearest to each site, with the snap
/// distance. Throws ValidationError when two sites snap to one node.
std::vector<std::pair<int, double>> snap_sites(const OracleGrid& grid, const SiteSet& sites);

/// The discrete objective of a grid function (no smoothing).
double discrete_objective(const OracleGrid& grid, const std::vector<double>& values, double p);

/// T#f sampled at the grid nodes.
std::vector<double> sample_field(const OracleGrid& grid, const ExtensionField& field);

/// Minimizes the discrete p-seminorm over grid functions that match f at
/// the nodes nearest the sites. Newton's method with Armijo backtracking on
/// (|D^2 F|^2 + eps^2)^(p/2), with eps driven to zero in stages.
OracleReport variational_oracle(const SiteSet& sites, const DataVector& f, double p, int n,
                                const OracleOptions& options = {});

}  // namespace sobext
