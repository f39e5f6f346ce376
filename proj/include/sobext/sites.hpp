#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sobext/geometry.hpp"
#include "sobext/rational.hpp"

namespace sobext {

/// Index of a site in the sorted normalized set E. kAuxSite denotes the
/// auxiliary point (-1, 0) of E+ = E u {(-1, 0)}.
using SiteIndex = std::int32_t;
inline constexpr SiteIndex kAuxSite = -1;

/// Normalized sites on the x-axis: sorted, distinct, min = -2^-11,
/// max = 2^-11. Keeps the affine map back to the caller's coordinates
/// and the permutation back to the caller's ordering.
class SiteSet {
 public:
  /// x -> s (x - t) with s = 2^-10 / (max - min) and t = (max + min) / 2.
  static SiteSet normalize(std::span<const Rational> raw);

  std::size_t size() const { return xs_.size(); }
  std::span<const Rational> xs() const { return xs_; }
  std::span<const double> xs_d() const { return xs_d_; }

  /// Coordinate of a site of E+, including kAuxSite.
  const Rational& x(SiteIndex site) const;
  double x_d(SiteIndex site) const;

  SiteIndex min_site() const { return 0; }
  SiteIndex max_site() const { return static_cast<SiteIndex>(xs_.size()) - 1; }

  std::size_t input_index(SiteIndex site) const { return input_of_sorted_.at(static_cast<std::size_t>(site)); }
  SiteIndex sorted_index(std::size_t input) const { return sorted_of_input_.at(input); }

  const Rational& scale() const { return scale_; }
  const Rational& translate() const { return translate_; }
  Rational to_user(const Rational& x) const { return x / scale_ + translate_; }
  Rational from_user(const Rational& x) const { return scale_ * (x - translate_); }
  RationalPoint to_user(const RationalPoint& z) const;
  RationalPoint from_user(const RationalPoint& z) const;

  /// ||F o A||^p = s^(2p-2) ||F||^p for the normalizing map A; multiply a
  /// normalized-frame p-th power seminorm by this to express it in user
  /// coordinates.
  double seminorm_pullback_factor(double p) const;

  /// Sites of E (or E+ when with_aux) inside the open interval, ascending.
  std::vector<SiteIndex> sites_in(const OpenInterval& interval, bool with_aux) const;
  std::size_t count_in(const OpenInterval& interval, bool with_aux) const;
  /// Leftmost and rightmost site inside the open interval.
  std::optional<std::pair<SiteIndex, SiteIndex>> extremes_in(const OpenInterval& interval,
                                                             bool with_aux) const;
  /// Largest site <= bound.
  std::optional<SiteIndex> last_at_most(const Rational& bound, bool with_aux) const;

  // The same queries for intervals with exact double endpoints. Sites are
  // compared through their rounded doubles, which decides every case but
  // equality of the rounded value exactly; equality falls back to rationals.
  std::vector<SiteIndex> sites_in(const DyadicOpenInterval& interval, bool with_aux) const;
  std::size_t count_in(const DyadicOpenInterval& interval, bool with_aux) const;
  std::optional<std::pair<SiteIndex, SiteIndex>> extremes_in(const DyadicOpenInterval& interval,
                                                             bool with_aux) const;
  std::optional<SiteIndex> last_at_most(double bound, bool with_aux) const;
  /// The site of E inside the open interval closest to `center` (a point of
  /// the interval), ties to the smaller.
  std::optional<SiteIndex> nearest_in(const DyadicOpenInterval& interval, double center) const;

  /// Sign of x(site) - bound, exactly.
  int compare(SiteIndex site, double bound) const;

 private:
  std::vector<Rational> xs_;
  std::vector<double> xs_d_;
  std::vector<std::size_t> input_of_sorted_;
  std::vector<SiteIndex> sorted_of_input_;
  Rational scale_;
  // First site with x > bound (strict) or x >= bound.
  std::size_t first_above(double bound, bool strict) const;
  Rational translate_;
};

/// Values on E in sorted site order, optionally with the value at (-1, 0).
template <class T>
struct BasicDataVector {
  std::vector<T> values;
  std::optional<T> aux;

  const T& at(SiteIndex site) const {
    if (site == kAuxSite) {
      if (!aux) throw InvariantError("data vector is not augmented");
      return *aux;
    }
    return values.at(static_cast<std::size_t>(site));
  }
  std::size_t size() const { return values.size(); }
};

using DataVector = BasicDataVector<double>;
using ExactDataVector = BasicDataVector<Rational>;

/// Reorders caller-ordered values into sorted site order.
DataVector data_from_input_order(const SiteSet& sites, std::span<const double> values);
ExactDataVector to_exact(const DataVector& data);

/// f+(-1, 0) = a+ f(2^-11) + a- f(-2^-11).
DataVector augment(const DataVector& f, const SiteSet& sites);
ExactDataVector augment(const ExactDataVector& f, const SiteSet& sites);

}  // namespace sobext
