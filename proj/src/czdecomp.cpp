#include "sobext/czdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace sobext {

const char* to_string(SquareKind kind) {
  switch (kind) {
    case SquareKind::contact_above: return "contact-above";
    case SquareKind::contact_below: return "contact-below";
    case SquareKind::contactless_above: return "contactless-above";
    case SquareKind::contactless_below: return "contactless-below";
  }
  return "?";
}

std::size_t sites_in_triple(const DyadicSquare& q, const SiteSet& sites) {
  const DyadicOpenInterval y = dilate_exact(q.y_interval(), 3);
  if (!(y.lo < 0.0 && 0.0 < y.hi)) return 0;
  return sites.count_in(dilate_exact(q.x_interval(), 3), false);
}

bool is_relevant(const DyadicSquare& q) { return intersects(dilate(q, Rational(11, 10)), inner_square()); }

SiteIndex pick_xhat(const DyadicInterval& shadow, const SiteSet& sites) {
  const DyadicInterval up = shadow.root ? shadow : parent(shadow);
  auto best = sites.nearest_in(dilate_exact(up, 3), shadow.center_d());
  if (!best) throw InvariantError("E n 3I+ is empty for a CZ shadow (x-hat has no candidate)");
  return *best;
}

namespace {

SquareKind classify(const DyadicSquare& q) {
  switch (q.j) {
    case 0: return SquareKind::contact_above;
    case -1: return SquareKind::contact_below;
    case 1: return SquareKind::contactless_above;
    case -2: return SquareKind::contactless_below;
    default:
      throw InvariantError("CZ square at level " + std::to_string(q.level) + " row " + std::to_string(q.j) +
                           " is neither a contact nor a contactless square");
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

CzDecomposition CzDecomposition::decompose(const SiteSet& sites) {
  CzDecomposition d;
  std::vector<DyadicSquare> stack;
  // Q0 always holds both extreme sites in 3Q0, so it is always bisected.
  for (std::int64_t j : {0, -1}) {
    for (std::int64_t i : {0, -1}) stack.push_back(DyadicSquare{false, 0, i, j});
  }
  std::vector<DyadicSquare> found;
  while (!stack.empty()) {
    DyadicSquare q = stack.back();
    stack.pop_back();
    if (sites_in_triple(q, sites) <= 1) {
      found.push_back(q);
      continue;
    }
    if (q.level + 1 > kMaxLevel) {
      throw ValidationError("sites are too close together: decomposition exceeds level " +
                            std::to_string(kMaxLevel));
    }
    for (std::int64_t dj : {1, 0}) {
      for (std::int64_t di : {1, 0}) {
        stack.push_back(DyadicSquare{false, q.level + 1, 2 * q.i + di, 2 * q.j + dj});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const DyadicSquare& a, const DyadicSquare& b) {
    return std::tie(a.level, a.i, a.j) < std::tie(b.level, b.i, b.j);
  });

  d.squares_.reserve(found.size());
  d.index_.reserve(found.size() * 2);
  for (const DyadicSquare& q : found) {
    CzSquare cz;
    cz.square = q;
    cz.kind = classify(q);
    cz.relevant = is_relevant(q);
    if (is_contact(cz.kind)) {
      OpenBox core = dilate(q, Rational(11, 10));
      std::vector<SiteIndex> inside = sites.sites_in(core.x, false);
      if (inside.size() > 1) throw InvariantError("1.1Q holds two sites although 3Q holds at most one");
      if (!inside.empty()) cz.site_in_core = inside.front();
    }
    d.max_level_ = std::max(d.max_level_, q.level);
    d.index_.emplace(q, static_cast<SquareId>(d.squares_.size()));
    d.squares_.push_back(std::move(cz));
  }

  // Good geometry keeps touching squares within one level of each other,
  // so only levels k-1, k, k+1 are probed.
  d.neighbors_.resize(d.squares_.size());
  for (std::size_t id = 0; id < d.squares_.size(); ++id) {
    const DyadicSquare& q = d.squares_[id].square;
    auto& out = d.neighbors_[id];
    for (int level = std::max(0, q.level - 1); level <= std::min(kMaxLevel, q.level + 1); ++level) {
      // Work in units of 2^-(k+1); a level-L cell spans `cell` units.
      const std::int64_t cell = std::int64_t{1} << (q.level + 1 - level);
      const std::int64_t limit = std::int64_t{1} << level;
      const std::int64_t x_lo = std::max(-limit, ceil_div(2 * q.i, cell) - 1);
      const std::int64_t x_hi = std::min(limit - 1, floor_div(2 * q.i + 2, cell));
      const std::int64_t y_lo = std::max(-limit, ceil_div(2 * q.j, cell) - 1);
      const std::int64_t y_hi = std::min(limit - 1, floor_div(2 * q.j + 2, cell));
      for (std::int64_t a = x_lo; a <= x_hi; ++a) {
        for (std::int64_t b = y_lo; b <= y_hi; ++b) {
          auto it = d.index_.find(DyadicSquare{false, level, a, b});
          if (it != d.index_.end() && touches(q, d.squares_[static_cast<std::size_t>(it->second)].square)) {
            out.push_back(it->second);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
  }

  for (auto& cz : d.squares_) {
    DyadicInterval shadow = cz.square.x_interval();
    auto [it, inserted] = d.shadow_index_.emplace(shadow, static_cast<ShadowId>(d.shadows_.size()));
    if (inserted) d.shadows_.push_back(shadow);
  }
  // Renumber shadows in (level, index) order.
  std::vector<DyadicInterval> ordered = d.shadows_;
  std::sort(ordered.begin(), ordered.end(), [](const DyadicInterval& a, const DyadicInterval& b) {
    return std::tie(a.level, a.index) < std::tie(b.level, b.index);
  });
  d.shadows_ = ordered;
  d.shadow_index_.clear();
  for (std::size_t k = 0; k < d.shadows_.size(); ++k) d.shadow_index_.emplace(d.shadows_[k], static_cast<ShadowId>(k));
  d.over_.assign(d.shadows_.size(), {});
  for (std::size_t id = 0; id < d.squares_.size(); ++id) {
    ShadowId s = d.shadow_index_.at(d.squares_[id].square.x_interval());
    d.squares_[id].shadow = s;
    d.over_[static_cast<std::size_t>(s)].push_back(static_cast<SquareId>(id));
  }
  d.xhat_.reserve(d.shadows_.size());
  for (const DyadicInterval& shadow : d.shadows_) d.xhat_.push_back(pick_xhat(shadow, sites));
  return d;
}

std::optional<SquareId> CzDecomposition::find(const DyadicSquare& q) const {
  auto it = index_.find(q);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ShadowId> CzDecomposition::find_shadow(const DyadicInterval& interval) const {
  auto it = shadow_index_.find(interval);
  if (it == shadow_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<SquareId> CzDecomposition::relevant() const {
  std::vector<SquareId> out;
  for (std::size_t id = 0; id < squares_.size(); ++id) {
    if (squares_[id].relevant) out.push_back(static_cast<SquareId>(id));
  }
  return out;
}

SquareId CzDecomposition::locate(double x, double y) const {
  if (!(x >= -1.0 && x <= 1.0 && y >= -1.0 && y <= 1.0)) {
    throw ValidationError("point outside Q0");
  }
  for (int level = 0; level <= max_level_; ++level) {
    const double scale = std::ldexp(1.0, level);
    const std::int64_t limit = std::int64_t{1} << level;
    auto i = std::clamp(static_cast<std::int64_t>(std::floor(x * scale)), -limit, limit - 1);
    auto j = std::clamp(static_cast<std::int64_t>(std::floor(y * scale)), -limit, limit - 1);
    auto it = index_.find(DyadicSquare{false, level, i, j});
    if (it != index_.end()) return it->second;
  }
  throw InvariantError("point is not covered by the CZ tiling");
}

std::vector<SquareId> neighbors(const CzDecomposition& d, const DyadicSquare& q) {
  auto id = d.find(q);
  if (!id) throw ValidationError("square is not a CZ square of this decomposition");
  auto span = d.neighbors(*id);
  return {span.begin(), span.end()};
}

}  // namespace sobext
