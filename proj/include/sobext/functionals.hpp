#pragma once

#include <utility>
#include <optional>
#include <span>
#include <vector>

#include "sobext/anchors.hpp"

namespace sobext {

/// L_Q(x, y) = f+(zbar) + D_Q (x - xbar), with D_Q = (f+(z2) - f+(z1)) / (x2 - x1).
struct AffineSlice {
  SiteIndex zbar = 0;
  SiteIndex z1 = kAuxSite;
  SiteIndex z2 = kAuxSite;
  Rational xbar;
  Rational inv_gap;

  Rational slope(const ExactDataVector& f_plus) const;
  Rational value(const ExactDataVector& f_plus, const Rational& x) const;
};

AffineSlice affine_slice(SquareId q, const AnchorAssignment& anchors, const SiteSet& sites);

enum class FunctionalKind { slope, value };
const char* to_string(FunctionalKind kind);

struct Term {
  SiteIndex site;
  Rational coeff;
};

/// lambda |ell(f)|^p with ell a sparse rational combination of values on E.
struct SparseFunctional {
  Rational lambda;
  std::vector<Term> terms;
  SquareId q = 0;
  SquareId q_other = 0;
  FunctionalKind kind = FunctionalKind::slope;
  /// For merged functionals: indices into FunctionalFamily::raw() of every
  /// per-pair functional equal to this one up to sign.
  std::vector<std::size_t> sources;

  bool is_zero() const { return terms.empty(); }
  Rational apply(const ExactDataVector& f) const;
};

/// Sparse combination over E+ with the value at (-1, 0) rewritten through
/// f+(-1, 0) = a+ f(max E) + a- f(min E). Repeated sites are merged and zero
/// coefficients dropped; the result is sorted by site.
std::vector<Term> expand_over_e(std::vector<Term> over_e_plus, const SiteSet& sites);

/// The slope and value functionals of an ordered pair, without filtering.
std::pair<SparseFunctional, SparseFunctional> pair_functionals(const CzDecomposition& d, const AnchorAssignment& anchors,
                                                              const SiteSet& sites, SquareId q, SquareId q_other);

/// Q or Q' easy, or one of 1.1Q, 1.1Q' meets E.
bool passes_filter(const CzDecomposition& d, const GroupTable& g, SquareId q, SquareId q_other);

/// The family (lambda_nu, ell_nu). Every filtered touching pair contributes a
/// slope and a value functional to raw(). functionals() merges raw entries
/// that agree up to sign, summing their lambdas, and drops zero ones; the
/// sum of lambda |ell(f)|^p is the same over either list.
class FunctionalFamily {
 public:
  static FunctionalFamily build(const CzDecomposition& d, const GroupTable& g, const AnchorAssignment& anchors,
                                const SiteSet& sites);

  std::span<const SparseFunctional> functionals() const { return items_; }
  std::span<const SparseFunctional> raw() const { return raw_; }
  /// L_Q of a relevant square.
  const AffineSlice& slice(SquareId q) const;
  /// nu_max.
  std::size_t size() const { return items_.size(); }
  std::size_t raw_nonzero_count() const;
  std::size_t max_terms() const;
  /// Functionals whose terms reference the site.
  std::span<const std::size_t> touching(SiteIndex site) const { return by_site_.at(static_cast<std::size_t>(site)); }

  /// ell_nu(f) for every nu, exactly.
  std::vector<Rational> apply(const ExactDataVector& f) const;
  /// sum lambda |ell(f)|^p for each p, from one exact pass.
  std::vector<double> norms(const DataVector& f, std::span<const double> ps) const;
  double norm(const DataVector& f, double p) const;
  /// lambda |ell(f)|^p per functional.
  std::vector<double> breakdown(const DataVector& f, double p) const;

 private:
  std::vector<std::optional<AffineSlice>> slices_;
  std::vector<SparseFunctional> raw_;
  std::vector<SparseFunctional> items_;
  std::vector<std::vector<std::size_t>> by_site_;
};

/// Rejects p outside (1, 2).
void check_exponent(double p);

}  // namespace sobext
