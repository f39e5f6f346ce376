#include "sobext/comparability.hpp"

#include <algorithm>
#include <cmath>

namespace sobext {

Band summarize(std::vector<double> values) {
  Band b;
  b.count = values.size();
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  b.min = values.front();
  b.max = values.back();
  const std::size_t m = values.size() / 2;
  b.median = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
  return b;
}

std::optional<double> richardson(double coarse, double middle, double fine) {
  const double d1 = coarse - middle;
  const double d2 = middle - fine;
  if (d1 == 0.0 || d2 == 0.0) return std::nullopt;
  const double r = d1 / d2;
  if (!(r > 1.0)) return std::nullopt;
  return fine - d2 / (r - 1.0);
}

std::vector<ComparabilityRow> comparability_report(const Pipeline& pipeline, const DataVector& f,
                                                   std::span<const double> ps,
                                                   const ComparabilityOptions& options) {
  ExtensionField field(pipeline, f);
  const std::vector<double> triple = pipeline.family.norms(f, ps);
  const QuadratureReport quad = seminorm_quadrature(field, ps, options.order, options.refine);
  std::optional<QuadratureReport> refined;
  if (options.check_refinement) refined = seminorm_quadrature(field, ps, options.order, options.refine + 1);

  std::vector<int> grids = options.grids;
  std::sort(grids.begin(), grids.end());
  std::vector<std::vector<double>> samples;
  for (int n : grids) {
    try {
      samples.push_back(sample_field(OracleGrid{n}, field));
    } catch (const ValidationError&) {
      samples.emplace_back();
    }
  }

  std::vector<ComparabilityRow> rows;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    ComparabilityRow row;
    row.p = ps[k];
    row.triple_norm = triple[k];
    row.quadrature = quad.totals[k];
    row.quadrature_refined = refined ? refined->totals[k] : quad.totals[k];
    const std::vector<double>* warm = nullptr;
    int warm_n = 0;
    std::vector<double> previous;
    for (std::size_t g = 0; g < grids.size(); ++g) {
      OracleEntry entry;
      entry.n = grids[g];
      try {
        OracleOptions opts;
        opts.warm_start = warm;
        opts.warm_start_n = warm_n;
        OracleReport rep = variational_oracle(pipeline.sites, f, ps[k], grids[g], opts);
        entry.value = rep.value;
        entry.smoothing_bound = rep.smoothing_bound;
        entry.max_snap = rep.max_snap;
        entry.newton_steps = rep.newton_steps;
        entry.converged = rep.converged;
        entry.trace = rep.trace;
        entry.sampled_extension = discrete_objective(OracleGrid{grids[g]}, samples[g], ps[k]);
        previous = std::move(rep.grid);
        warm = &previous;
        warm_n = grids[g];
      } catch (const ValidationError& e) {
        entry.error = e.what();
      }
      row.oracle.push_back(entry);
    }
    const bool zero_triple = row.triple_norm == 0.0;
    const bool zero_quad = row.quadrature <= options.quadrature_zero;
    bool zero_oracle = true;
    for (const auto& e : row.oracle) {
      if (!e.error && e.value > options.oracle_zero) zero_oracle = false;
    }
    row.degenerate = zero_triple;
    if (zero_triple && !(zero_quad && zero_oracle)) {
      row.inconsistency = "triple norm vanishes but the seminorm estimates do not";
    } else if (!zero_triple && zero_oracle && zero_quad) {
      row.inconsistency = "seminorm estimates vanish but the triple norm does not";
    }
    if (!zero_triple) {
      row.r_upper = row.quadrature / row.triple_norm;
      for (const auto& e : row.oracle) row.r_lower.push_back(e.error ? NAN : e.value / row.triple_norm);
    }
    if (row.oracle.size() >= 3) {
      const auto& o = row.oracle;
      const std::size_t m = o.size();
      if (!o[m - 3].error && !o[m - 2].error && !o[m - 1].error && o[m - 2].n == 2 * o[m - 3].n - 1 &&
          o[m - 1].n == 2 * o[m - 2].n - 1) {
        row.oracle_extrapolated = richardson(o[m - 3].value, o[m - 2].value, o[m - 1].value);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sobext
