#pragma once

#include <string>

#include "sobext/pipeline.hpp"

namespace sobext {

struct RenderOptions {
  /// Visible window [-r, r]^2 in the normalized frame; squares outside it are
  /// omitted.
  double radius = 0x1p-9;
  int pixels = 1000;
  bool towers = true;
  bool gangs = true;
  bool sites = true;
};

/// Static SVG of the CZ squares: fill by easy/hard shadow (relevant squares
/// darker), tower squares outlined, gang members dashed. Each square is a
/// <rect> whose id is its square_key.
std::string render_svg(const Pipeline& pipeline, const RenderOptions& options = {});

}  // namespace sobext
