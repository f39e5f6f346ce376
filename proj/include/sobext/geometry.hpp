#pragma once

#include <compare>
#include <cstdint>
#include <functional>

#include "sobext/rational.hpp"

namespace sobext {

/// Deepest supported dyadic level. Indices stay exact in int64 and square
/// corners stay exact in double up to this depth.
inline constexpr int kMaxLevel = 50;

/// Closed dyadic interval [i 2^-k, (i+1) 2^-k], or the root I0 = [-1, 1].
struct DyadicInterval {
  bool root = false;
  int level = 0;
  std::int64_t index = 0;

  static DyadicInterval whole() { return {true, 0, 0}; }
  /// Validates -2^k <= i < 2^k.
  static DyadicInterval at(int level, std::int64_t index);

  Rational left() const;
  Rational right() const;
  Rational length() const;
  Rational center() const;
  double left_d() const;
  double right_d() const;
  double length_d() const;
  double center_d() const;

  auto operator<=>(const DyadicInterval&) const = default;
};

/// Closed dyadic square, or the root Q0 = [-1, 1]^2.
struct DyadicSquare {
  bool root = false;
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  static DyadicSquare whole() { return {true, 0, 0, 0}; }
  static DyadicSquare at(int level, std::int64_t i, std::int64_t j);

  DyadicInterval x_interval() const;
  DyadicInterval y_interval() const;
  Rational side() const;
  Rational area() const;
  double side_d() const;

  auto operator<=>(const DyadicSquare&) const = default;
};

struct RationalPoint {
  Rational x;
  Rational y;
};

/// Open interval (lo, hi).
struct OpenInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo < x && x < hi; }
  Rational center() const { return (lo + hi) / 2; }
  Rational length() const { return hi - lo; }
};

/// Open axis-aligned rectangle. Membership is strict in both coordinates.
struct OpenBox {
  OpenInterval x;
  OpenInterval y;

  Rational center_x() const { return x.center(); }
  Rational center_y() const { return y.center(); }
  Rational half_width_x() const { return x.length() / 2; }
  Rational half_width_y() const { return y.length() / 2; }
  bool contains(const RationalPoint& z) const { return x.contains(z.x) && y.contains(z.y); }
};

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct ClosedBox {
  Rational x_lo, x_hi, y_lo, y_hi;
};

ClosedBox closed_box(const DyadicSquare& q);

/// The open interval c*I concentric with I. Requires c > 1.
OpenInterval dilate(const DyadicInterval& interval, const Rational& c);

/// Open interval whose endpoints are exact doubles (dyadic rationals).
struct DyadicOpenInterval {
  double lo;
  double hi;
};

/// c*I for an integer c > 1. The endpoints (2i + 1 -+ c) 2^-(k+1) are exact
/// in double for every level up to kMaxLevel.
DyadicOpenInterval dilate_exact(const DyadicInterval& interval, int c);
/// The open square c*Q concentric with Q. Requires c > 1/4 and c != 1.
OpenBox dilate(const DyadicSquare& square, const Rational& c);

DyadicInterval parent(const DyadicInterval& interval);
DyadicSquare parent(const DyadicSquare& square);

inline DyadicInterval shadow(const DyadicSquare& square) { return square.x_interval(); }

/// Closed squares intersect (shared edge, shared corner, or overlap).
bool touches(const DyadicSquare& a, const DyadicSquare& b);

/// Closed intervals intersect.
bool touches(const DyadicInterval& a, const DyadicInterval& b);

bool intersects(const OpenInterval& a, const OpenInterval& b);
bool intersects(const OpenBox& a, const OpenBox& b);
bool intersects(const OpenBox& a, const ClosedBox& b);

/// The closed square Q_inner = [-2^-10, 2^-10]^2.
ClosedBox inner_square();

struct DyadicSquareHash {
  std::size_t operator()(const DyadicSquare& q) const noexcept;
};
struct DyadicIntervalHash {
  std::size_t operator()(const DyadicInterval& q) const noexcept;
};

}  // namespace sobext
