#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sobext/grouping.hpp"

namespace sobext {

enum class PairSource { easy_pair, big_square_pair };
enum class ZbarSource { unique_core, easy_7q, group_small };

const char* to_string(PairSource source);
const char* to_string(ZbarSource source);

/// Special points of one relevant square: z1, z2 in E+ and zbar in E.
struct Anchor {
  SiteIndex z1 = kAuxSite;
  SiteIndex z2 = kAuxSite;
  SiteIndex zbar = 0;
  PairSource pair_source = PairSource::easy_pair;
  ZbarSource zbar_source = ZbarSource::unique_core;
};

class AnchorAssignment {
 public:
  static AnchorAssignment assign(const CzDecomposition& d, const GroupTable& g, const SiteSet& sites);

  /// Anchor of a relevant square. Throws ValidationError otherwise.
  const Anchor& at(SquareId q) const;
  bool has(SquareId q) const { return anchors_.at(static_cast<std::size_t>(q)).has_value(); }
  /// The easy pair of any easy square (relevant or not).
  std::optional<std::pair<SiteIndex, SiteIndex>> easy_pair(SquareId q) const {
    return easy_pairs_.at(static_cast<std::size_t>(q));
  }

  /// Smallest C with zbar(Q) in CQ, over relevant squares.
  double zbar_dilation(const CzDecomposition& d, const SiteSet& sites) const;
  /// Smallest C with z1(Q), z2(Q) in CQ, over relevant squares.
  double pair_dilation(const CzDecomposition& d, const SiteSet& sites) const;

 private:
  std::vector<std::optional<Anchor>> anchors_;
  std::vector<std::optional<std::pair<SiteIndex, SiteIndex>>> easy_pairs_;
};

/// {z1, z2, zbar} of a relevant square, deduplicated and ascending.
std::vector<SiteIndex> anchor_sites(const AnchorAssignment& a, SquareId q);

/// The site of E n 7Q closest to the center of Q's shadow, ties to the smaller.
SiteIndex closest_in_seven(const DyadicSquare& q, const SiteSet& sites);

/// Smallest C with the point (x, 0) in the open square CQ.
Rational containing_dilation(const DyadicSquare& q, const Rational& x);

}  // namespace sobext
