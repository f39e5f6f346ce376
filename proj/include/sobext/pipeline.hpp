#pragma once

#include <span>

#include "sobext/functionals.hpp"

namespace sobext {

/// Everything that depends on the sites alone, built in order.
struct Pipeline {
  SiteSet sites;
  CzDecomposition cz;
  GroupTable groups;
  AnchorAssignment anchors;
  FunctionalFamily family;

  static Pipeline build(std::span<const Rational> raw_sites, int K = kEasyDilation);
};

}  // namespace sobext
