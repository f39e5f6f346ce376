#include "sobext/sites.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sobext/outer_constants.hpp"

namespace sobext {

OuterConstants outer_affine_constants() {
  // Through (-h, F-) and (h, F+): L(x) = (F+ + F-)/2 + (F+ - F-) x / (2h).
  const Rational h = pow2(-11);
  const Rational x = -1;
  Rational a_plus = Rational(1, 2) + x / (2 * h);
  Rational a_minus = Rational(1, 2) - x / (2 * h);
  return {a_plus, a_minus};
}

SiteSet SiteSet::normalize(std::span<const Rational> input) {
  if (input.size() < 2) throw ValidationError("need at least two sites");
  // Equality on mpq_class assumes canonical form.
  std::vector<Rational> raw(input.begin(), input.end());
  for (Rational& x : raw) x.canonicalize();
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (raw[order[k]] == raw[order[k - 1]]) {
      throw ValidationError("duplicate site " + to_string(raw[order[k]]));
    }
  }

  SiteSet s;
  const Rational& lo = raw[order.front()];
  const Rational& hi = raw[order.back()];
  s.scale_ = pow2(-10) / (hi - lo);
  s.translate_ = (hi + lo) / 2;
  s.input_of_sorted_ = order;
  s.sorted_of_input_.assign(raw.size(), 0);
  s.xs_.reserve(raw.size());
  s.xs_d_.reserve(raw.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    s.sorted_of_input_[order[k]] = static_cast<SiteIndex>(k);
    Rational x = s.scale_ * (raw[order[k]] - s.translate_);
    x.canonicalize();
    s.xs_d_.push_back(to_double(x));
    s.xs_.push_back(std::move(x));
  }
  if (s.xs_.front() != -pow2(-11) || s.xs_.back() != pow2(-11)) {
    throw InvariantError("normalization did not map the extreme sites to +-2^-11");
  }
  return s;
}

const Rational& SiteSet::x(SiteIndex site) const {
  static const Rational aux(-1);
  if (site == kAuxSite) return aux;
  return xs_.at(static_cast<std::size_t>(site));
}

double SiteSet::x_d(SiteIndex site) const {
  if (site == kAuxSite) return -1.0;
  return xs_d_.at(static_cast<std::size_t>(site));
}

RationalPoint SiteSet::to_user(const RationalPoint& z) const { return {to_user(z.x), z.y / scale_}; }
RationalPoint SiteSet::from_user(const RationalPoint& z) const { return {from_user(z.x), scale_ * z.y}; }

double SiteSet::seminorm_pullback_factor(double p) const {
  return std::pow(to_double(scale_), 2.0 * p - 2.0);
}

namespace {

// Sorted-order range [first, last) of E strictly inside the interval.
std::pair<std::size_t, std::size_t> open_range(const std::vector<Rational>& xs, const OpenInterval& iv) {
  auto first = std::upper_bound(xs.begin(), xs.end(), iv.lo);
  auto last = std::lower_bound(first, xs.end(), iv.hi);
  return {static_cast<std::size_t>(first - xs.begin()), static_cast<std::size_t>(last - xs.begin())};
}

}  // namespace

std::vector<SiteIndex> SiteSet::sites_in(const OpenInterval& interval, bool with_aux) const {
  std::vector<SiteIndex> out;
  if (with_aux && interval.contains(Rational(-1))) out.push_back(kAuxSite);
  auto [first, last] = open_range(xs_, interval);
  for (std::size_t k = first; k < last; ++k) out.push_back(static_cast<SiteIndex>(k));
  return out;
}

std::size_t SiteSet::count_in(const OpenInterval& interval, bool with_aux) const {
  auto [first, last] = open_range(xs_, interval);
  std::size_t n = last > first ? last - first : 0;
  if (with_aux && interval.contains(Rational(-1))) ++n;
  return n;
}

std::optional<std::pair<SiteIndex, SiteIndex>> SiteSet::extremes_in(const OpenInterval& interval,
                                                                    bool with_aux) const {
  auto [first, last] = open_range(xs_, interval);
  const bool aux = with_aux && interval.contains(Rational(-1));
  if (first >= last) {
    if (aux) return std::pair{kAuxSite, kAuxSite};
    return std::nullopt;
  }
  SiteIndex lo = aux ? kAuxSite : static_cast<SiteIndex>(first);
  return std::pair{lo, static_cast<SiteIndex>(last - 1)};
}

std::optional<SiteIndex> SiteSet::last_at_most(const Rational& bound, bool with_aux) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), bound);
  if (it != xs_.begin()) return static_cast<SiteIndex>((it - xs_.begin()) - 1);
  if (with_aux && Rational(-1) <= bound) return kAuxSite;
  return std::nullopt;
}

int SiteSet::compare(SiteIndex site, double bound) const {
  const double x = x_d(site);
  if (x < bound) return -1;
  if (x > bound) return 1;
  const Rational& exact = this->x(site);
  const Rational b = from_double(bound);
  return exact < b ? -1 : (exact > b ? 1 : 0);
}

std::size_t SiteSet::first_above(double bound, bool strict) const {
  std::size_t lo = 0, hi = xs_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const int c = compare(static_cast<SiteIndex>(mid), bound);
    if (c > 0 || (!strict && c == 0)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::vector<SiteIndex> SiteSet::sites_in(const DyadicOpenInterval& interval, bool with_aux) const {
  std::vector<SiteIndex> out;
  if (with_aux && interval.lo < -1.0 && -1.0 < interval.hi) out.push_back(kAuxSite);
  const std::size_t first = first_above(interval.lo, true);
  const std::size_t last = first_above(interval.hi, false);
  for (std::size_t k = first; k < last; ++k) out.push_back(static_cast<SiteIndex>(k));
  return out;
}

std::size_t SiteSet::count_in(const DyadicOpenInterval& interval, bool with_aux) const {
  const std::size_t first = first_above(interval.lo, true);
  const std::size_t last = first_above(interval.hi, false);
  std::size_t n = last > first ? last - first : 0;
  if (with_aux && interval.lo < -1.0 && -1.0 < interval.hi) ++n;
  return n;
}

std::optional<std::pair<SiteIndex, SiteIndex>> SiteSet::extremes_in(const DyadicOpenInterval& interval,
                                                                    bool with_aux) const {
  const std::size_t first = first_above(interval.lo, true);
  const std::size_t last = first_above(interval.hi, false);
  const bool aux = with_aux && interval.lo < -1.0 && -1.0 < interval.hi;
  if (first >= last) {
    if (aux) return std::pair{kAuxSite, kAuxSite};
    return std::nullopt;
  }
  SiteIndex lo = aux ? kAuxSite : static_cast<SiteIndex>(first);
  return std::pair{lo, static_cast<SiteIndex>(last - 1)};
}

std::optional<SiteIndex> SiteSet::last_at_most(double bound, bool with_aux) const {
  const std::size_t k = first_above(bound, true);
  if (k > 0) return static_cast<SiteIndex>(k - 1);
  if (with_aux && -1.0 <= bound) return kAuxSite;
  return std::nullopt;
}

std::optional<SiteIndex> SiteSet::nearest_in(const DyadicOpenInterval& interval, double center) const {
  const std::size_t first = first_above(interval.lo, true);
  const std::size_t last = first_above(interval.hi, false);
  if (first >= last) return std::nullopt;
  const std::size_t split = std::clamp(first_above(center, false), first, last);
  if (split == first) return static_cast<SiteIndex>(first);
  if (split == last) return static_cast<SiteIndex>(last - 1);
  // below <= center <= above: compare center - below with above - center.
  const auto below = static_cast<SiteIndex>(split - 1);
  const auto above = static_cast<SiteIndex>(split);
  const Rational twice = 2 * from_double(center);
  const Rational sum = x(below) + x(above);
  // center - below > above - center exactly when 2 center > below + above.
  if (sum < twice) return above;
  return below;
}

DataVector data_from_input_order(const SiteSet& sites, std::span<const double> values) {
  if (values.size() != sites.size()) {
    throw ValidationError("got " + std::to_string(values.size()) + " values for " +
                          std::to_string(sites.size()) + " sites");
  }
  DataVector out;
  out.values.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) throw ValidationError("non-finite data value");
    out.values[static_cast<std::size_t>(sites.sorted_index(k))] = values[k];
  }
  return out;
}

ExactDataVector to_exact(const DataVector& data) {
  ExactDataVector out;
  out.values.reserve(data.values.size());
  for (double v : data.values) out.values.push_back(from_double(v));
  if (data.aux) out.aux = from_double(*data.aux);
  return out;
}

DataVector augment(const DataVector& f, const SiteSet& sites) {
  if (f.size() != sites.size()) throw ValidationError("data length does not match the site count");
  static const OuterConstants k = outer_affine_constants();
  DataVector out = f;
  out.aux = to_double(k.a_plus) * f.at(sites.max_site()) + to_double(k.a_minus) * f.at(sites.min_site());
  return out;
}

ExactDataVector augment(const ExactDataVector& f, const SiteSet& sites) {
  if (f.size() != sites.size()) throw ValidationError("data length does not match the site count");
  static const OuterConstants k = outer_affine_constants();
  ExactDataVector out = f;
  out.aux = k.a_plus * f.at(sites.max_site()) + k.a_minus * f.at(sites.min_site());
  return out;
}

}  // namespace sobext
