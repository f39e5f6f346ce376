#include "sobext/pipeline.hpp"

namespace sobext {

Pipeline Pipeline::build(std::span<const Rational> raw_sites, int K) {
  SiteSet sites = SiteSet::normalize(raw_sites);
  CzDecomposition cz = CzDecomposition::decompose(sites);
  GroupTable groups = GroupTable::build(cz, sites, K);
  AnchorAssignment anchors = AnchorAssignment::assign(cz, groups, sites);
  FunctionalFamily family = FunctionalFamily::build(cz, groups, anchors, sites);
  return {std::move(sites), std::move(cz), std::move(groups), std::move(anchors), std::move(family)};
}

}  // namespace sobext
