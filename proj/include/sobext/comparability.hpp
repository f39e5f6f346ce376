#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobext/oracle.hpp"
#include "sobext/quadrature.hpp"

namespace sobext {

struct OracleEntry {
  int n = 0;
  double value = 0.0;
  double smoothing_bound = 0.0;
  double max_snap = 0.0;
  int newton_steps = 0;
  bool converged = false;
  std::vector<OracleStage> trace;
  /// Discrete objective of T#f sampled on the same grid (a feasible point).
  double sampled_extension = 0.0;
  std::optional<std::string> error;
};

struct ComparabilityRow {
  double p = 0.0;
  double triple_norm = 0.0;
  double quadrature = 0.0;
  double quadrature_refined = 0.0;
  std::vector<OracleEntry> oracle;
  double r_upper = 0.0;
  /// oracle / triple norm, per entry of `oracle`.
  std::vector<double> r_lower;
  /// Richardson extrapolation of the oracle over three successive grids.
  std::optional<double> oracle_extrapolated;
  bool degenerate = false;
  std::optional<std::string> inconsistency;
};

struct ComparabilityOptions {
  std::vector<int> grids{129, 257};
  int order = 5;
  int refine = 0;
  bool check_refinement = true;
  /// Below these, a quantity counts as zero for the degeneracy check.
  double quadrature_zero = 1e-12;
  double oracle_zero = 1e-8;
};

/// For each p: R_upper = quadrature(T#f) / |||f|||_p and R_lower = oracle / |||f|||_p,
/// all in the normalized frame.
std::vector<ComparabilityRow> comparability_report(const Pipeline& pipeline, const DataVector& f,
                                                   std::span<const double> ps,
                                                   const ComparabilityOptions& options = {});

struct Band {
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};
Band summarize(std::vector<double> values);

/// J_n extrapolated from three grids, each with twice the resolution of the
/// previous one, when the differences contract.
std::optional<double> richardson(double coarse, double middle, double fine);

}  // namespace sobext
