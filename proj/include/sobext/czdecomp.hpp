#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sobext/geometry.hpp"
#include "sobext/sites.hpp"

namespace sobext {

using SquareId = std::int32_t;
using ShadowId = std::int32_t;

/// The four shapes a CZ square can take relative to the x-axis.
enum class SquareKind {
  contact_above,      // I x [0, |I|]
  contact_below,      // I x [-|I|, 0]
  contactless_above,  // I x [|I|, 2|I|]
  contactless_below,  // I x [-2|I|, -|I|]
};

const char* to_string(SquareKind kind);
inline bool is_contact(SquareKind kind) {
  return kind == SquareKind::contact_above || kind == SquareKind::contact_below;
}

struct CzSquare {
  DyadicSquare square;
  SquareKind kind = SquareKind::contact_above;
  bool relevant = false;
  ShadowId shadow = -1;
  /// The unique site of E inside the open square 1.1Q, when there is one.
  std::optional<SiteIndex> site_in_core;
};

/// Maximal dyadic squares Q with #(E n 3Q) <= 1 tiling Q0, with the
/// touching graph, the shadow inventory and a fixed x-hat per shadow.
/// Squares are ordered by (level, i, j); a SquareId indexes that order.
class CzDecomposition {
 public:
  static CzDecomposition decompose(const SiteSet& sites);

  std::span<const CzSquare> squares() const { return squares_; }
  const CzSquare& square(SquareId id) const { return squares_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return squares_.size(); }
  std::optional<SquareId> find(const DyadicSquare& q) const;

  /// CZ squares whose closure meets that of `id`, including `id`, ascending.
  std::span<const SquareId> neighbors(SquareId id) const { return neighbors_.at(static_cast<std::size_t>(id)); }

  std::span<const DyadicInterval> shadows() const { return shadows_; }
  std::optional<ShadowId> find_shadow(const DyadicInterval& interval) const;
  /// CZ squares over a shadow (one to four of them), ascending.
  std::span<const SquareId> squares_over(ShadowId shadow) const { return over_.at(static_cast<std::size_t>(shadow)); }
  /// The point x-hat(I) of E n 3I+ fixed for each shadow.
  SiteIndex xhat(ShadowId shadow) const { return xhat_.at(static_cast<std::size_t>(shadow)); }

  std::vector<SquareId> relevant() const;
  int max_level() const { return max_level_; }

  /// A CZ square containing the point; requires (x, y) in Q0.
  SquareId locate(double x, double y) const;

 private:
  std::vector<CzSquare> squares_;
  std::unordered_map<DyadicSquare, SquareId, DyadicSquareHash> index_;
  std::vector<std::vector<SquareId>> neighbors_;
  std::vector<DyadicInterval> shadows_;
  std::unordered_map<DyadicInterval, ShadowId, DyadicIntervalHash> shadow_index_;
  std::vector<std::vector<SquareId>> over_;
  std::vector<SiteIndex> xhat_;
  int max_level_ = 0;
};

/// #(E n 3Q), using that 3Q meets the x-axis only for squares within one
/// side length of it.
std::size_t sites_in_triple(const DyadicSquare& q, const SiteSet& sites);

/// CZ squares touching q. Throws ValidationError if q is not a CZ square.
std::vector<SquareId> neighbors(const CzDecomposition& d, const DyadicSquare& q);

/// The element of E n 3I+ closest to the center of I, ties to the smaller.
/// Throws InvariantError when the candidate set is empty.
SiteIndex pick_xhat(const DyadicInterval& shadow, const SiteSet& sites);

/// 1.1Q n Q_inner != {} (exact).
bool is_relevant(const DyadicSquare& q);

}  // namespace sobext
