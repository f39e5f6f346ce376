#pragma once

#include "sobext/rational.hpp"

namespace sobext {

/// Coefficients of L(-1, 0) = a+ F(2^-11, 0) + a- F(-2^-11, 0) for the affine
/// L through the two endpoint values.
struct OuterConstants {
  Rational a_plus;
  Rational a_minus;
};

OuterConstants outer_affine_constants();

}  // namespace sobext
