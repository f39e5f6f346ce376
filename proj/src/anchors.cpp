#include "sobext/anchors.hpp"

#include <algorithm>

namespace sobext {

const char* to_string(PairSource source) {
  return source == PairSource::easy_pair ? "easy-pair" : "big-square-pair";
}

const char* to_string(ZbarSource source) {
  switch (source) {
    case ZbarSource::unique_core: return "unique-1.1Q";
    case ZbarSource::easy_7q: return "easy-7Q";
    case ZbarSource::group_small: return "group-small";
  }
  return "?";
}

SiteIndex closest_in_seven(const DyadicSquare& q, const SiteSet& sites) {
  const DyadicOpenInterval y = dilate_exact(q.y_interval(), 7);
  std::optional<SiteIndex> best;
  if (y.lo < 0.0 && 0.0 < y.hi) best = sites.nearest_in(dilate_exact(q.x_interval(), 7), q.x_interval().center_d());
  if (!best) throw InvariantError("E n 7Q is empty for a square that needs a zbar");
  return *best;
}

Rational containing_dilation(const DyadicSquare& q, const Rational& x) {
  Rational dx = abs(x - q.x_interval().center());
  Rational dy = abs(q.y_interval().center());
  return 2 * std::max(dx, dy) / q.side();
}

AnchorAssignment AnchorAssignment::assign(const CzDecomposition& d, const GroupTable& g, const SiteSet& sites) {
  AnchorAssignment a;
  a.anchors_.assign(d.size(), std::nullopt);
  a.easy_pairs_.assign(d.size(), std::nullopt);
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (!g.square_easy(d, static_cast<SquareId>(q))) continue;
    auto ext = sites.extremes_in(dilate_exact(d.square(static_cast<SquareId>(q)).square.x_interval(), g.K()), true);
    if (!ext || ext->first == ext->second) throw InvariantError("easy square without a witnessing pair");
    a.easy_pairs_[q] = *ext;
  }

  std::vector<std::optional<SiteIndex>> group_zbar(g.groups().size());
  for (std::size_t k = 0; k < g.groups().size(); ++k) {
    group_zbar[k] = closest_in_seven(d.square(g.groups()[k].small()).square, sites);
  }

  for (std::size_t q = 0; q < d.size(); ++q) {
    const CzSquare& cz = d.square(static_cast<SquareId>(q));
    if (!cz.relevant) continue;
    Anchor anchor;
    const bool easy = g.square_easy(d, static_cast<SquareId>(q));
    auto group = g.group_of(d, static_cast<SquareId>(q));
    if (easy) {
      std::tie(anchor.z1, anchor.z2) = *a.easy_pairs_[q];
      anchor.pair_source = PairSource::easy_pair;
    } else {
      if (!group) throw InvariantError("relevant-hard: hard relevant square has no group");
      auto pair = a.easy_pairs_.at(static_cast<std::size_t>(g.groups()[*group].big()));
      if (!pair) throw InvariantError("easy top: Q_big of a group is hard");
      std::tie(anchor.z1, anchor.z2) = *pair;
      anchor.pair_source = PairSource::big_square_pair;
    }
    if (cz.site_in_core) {
      anchor.zbar = *cz.site_in_core;
      anchor.zbar_source = ZbarSource::unique_core;
    } else if (easy) {
      anchor.zbar = closest_in_seven(cz.square, sites);
      anchor.zbar_source = ZbarSource::easy_7q;
    } else {
      anchor.zbar = *group_zbar[*group];
      anchor.zbar_source = ZbarSource::group_small;
    }
    a.anchors_[q] = anchor;
  }
  return a;
}

const Anchor& AnchorAssignment::at(SquareId q) const {
  const auto& slot = anchors_.at(static_cast<std::size_t>(q));
  if (!slot) throw ValidationError("square " + std::to_string(q) + " is not relevant and has no anchors");
  return *slot;
}

double AnchorAssignment::zbar_dilation(const CzDecomposition& d, const SiteSet& sites) const {
  Rational worst = 0;
  for (std::size_t q = 0; q < anchors_.size(); ++q) {
    if (!anchors_[q]) continue;
    worst = std::max(worst, containing_dilation(d.square(static_cast<SquareId>(q)).square, sites.x(anchors_[q]->zbar)));
  }
  return to_double(worst);
}

double AnchorAssignment::pair_dilation(const CzDecomposition& d, const SiteSet& sites) const {
  Rational worst = 0;
  for (std::size_t q = 0; q < anchors_.size(); ++q) {
    if (!anchors_[q]) continue;
    const DyadicSquare& sq = d.square(static_cast<SquareId>(q)).square;
    worst = std::max({worst, containing_dilation(sq, sites.x(anchors_[q]->z1)),
                      containing_dilation(sq, sites.x(anchors_[q]->z2))});
  }
  return to_double(worst);
}

std::vector<SiteIndex> anchor_sites(const AnchorAssignment& a, SquareId q) {
  const Anchor& anchor = a.at(q);
  std::vector<SiteIndex> out{anchor.z1, anchor.z2, anchor.zbar};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sobext
