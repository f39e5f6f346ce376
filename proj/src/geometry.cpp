#include "sobext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sobext {

namespace {

void check_index(int level, std::int64_t index) {
  if (level < 0 || level > kMaxLevel) {
    throw ValidationError("dyadic level " + std::to_string(level) + " outside [0, " +
                          std::to_string(kMaxLevel) + "]");
  }
  const std::int64_t half = std::int64_t{1} << level;
  if (index < -half || index >= half) {
    throw ValidationError("dyadic index " + std::to_string(index) + " outside level " +
                          std::to_string(level));
  }
}

// [lo, hi] in units of 2^-scale, for scale >= level.
struct Span {
  __int128 lo;
  __int128 hi;
};

Span span_at(const DyadicInterval& interval, int scale) {
  const __int128 unit = __int128{1} << scale;
  if (interval.root) return {-unit, unit};
  const __int128 cell = __int128{1} << (scale - interval.level);
  return {interval.index * cell, (interval.index + 1) * cell};
}

int level_of(const DyadicInterval& interval) { return interval.root ? 0 : interval.level; }

}  // namespace

DyadicInterval DyadicInterval::at(int level, std::int64_t index) {
  check_index(level, index);
  return {false, level, index};
}

Rational DyadicInterval::left() const { return root ? Rational(-1) : Rational(index) * pow2(-level); }
Rational DyadicInterval::right() const { return root ? Rational(1) : Rational(index + 1) * pow2(-level); }
Rational DyadicInterval::length() const { return root ? Rational(2) : pow2(-level); }
Rational DyadicInterval::center() const { return (left() + right()) / 2; }

double DyadicInterval::left_d() const { return root ? -1.0 : std::ldexp(static_cast<double>(index), -level); }
double DyadicInterval::right_d() const {
  return root ? 1.0 : std::ldexp(static_cast<double>(index + 1), -level);
}
double DyadicInterval::length_d() const { return root ? 2.0 : std::ldexp(1.0, -level); }
double DyadicInterval::center_d() const {
  return root ? 0.0 : std::ldexp(static_cast<double>(2 * index + 1), -level - 1);
}

DyadicSquare DyadicSquare::at(int level, std::int64_t i, std::int64_t j) {
  check_index(level, i);
  check_index(level, j);
  return {false, level, i, j};
}

DyadicInterval DyadicSquare::x_interval() const {
  return root ? DyadicInterval::whole() : DyadicInterval{false, level, i};
}
DyadicInterval DyadicSquare::y_interval() const {
  return root ? DyadicInterval::whole() : DyadicInterval{false, level, j};
}
Rational DyadicSquare::side() const { return x_interval().length(); }
Rational DyadicSquare::area() const {
  Rational s = side();
  return s * s;
}
double DyadicSquare::side_d() const { return x_interval().length_d(); }

ClosedBox closed_box(const DyadicSquare& q) {
  DyadicInterval x = q.x_interval();
  DyadicInterval y = q.y_interval();
  return {x.left(), x.right(), y.left(), y.right()};
}

OpenInterval dilate(const DyadicInterval& interval, const Rational& c) {
  if (!(c > 1)) throw ValidationError("interval dilation factor must exceed 1, got " + to_string(c));
  Rational center = interval.center();
  Rational half = c * interval.length() / 2;
  return {center - half, center + half};
}

DyadicOpenInterval dilate_exact(const DyadicInterval& interval, int c) {
  if (c <= 1) throw ValidationError("interval dilation factor must exceed 1, got " + std::to_string(c));
  if (interval.root) return {-static_cast<double>(c), static_cast<double>(c)};
  const double center2 = static_cast<double>(2 * interval.index + 1);
  return {std::ldexp(center2 - c, -interval.level - 1), std::ldexp(center2 + c, -interval.level - 1)};
}

OpenBox dilate(const DyadicSquare& square, const Rational& c) {
  if (!(c > Rational(1, 4)) || c == 1) {
    throw ValidationError("square dilation factor must exceed 1/4 and differ from 1, got " + to_string(c));
  }
  Rational half = c * square.side() / 2;
  Rational cx = square.x_interval().center();
  Rational cy = square.y_interval().center();
  return {{cx - half, cx + half}, {cy - half, cy + half}};
}

DyadicInterval parent(const DyadicInterval& interval) {
  if (interval.root) throw ValidationError("the root interval has no dyadic parent");
  if (interval.level == 0) return DyadicInterval::whole();
  return {false, interval.level - 1, interval.index >> 1};
}

DyadicSquare parent(const DyadicSquare& square) {
  if (square.root) throw ValidationError("the root square has no dyadic parent");
  if (square.level == 0) return DyadicSquare::whole();
  return {false, square.level - 1, square.i >> 1, square.j >> 1};
}

bool touches(const DyadicInterval& a, const DyadicInterval& b) {
  const int scale = std::max(level_of(a), level_of(b));
  Span sa = span_at(a, scale);
  Span sb = span_at(b, scale);
  return sa.lo <= sb.hi && sb.lo <= sa.hi;
}

bool touches(const DyadicSquare& a, const DyadicSquare& b) {
  return touches(a.x_interval(), b.x_interval()) && touches(a.y_interval(), b.y_interval());
}

bool intersects(const OpenInterval& a, const OpenInterval& b) { return a.lo < b.hi && b.lo < a.hi; }

bool intersects(const OpenBox& a, const OpenBox& b) { return intersects(a.x, b.x) && intersects(a.y, b.y); }

bool intersects(const OpenBox& a, const ClosedBox& b) {
  return a.x.lo < b.x_hi && b.x_lo < a.x.hi && a.y.lo < b.y_hi && b.y_lo < a.y.hi;
}

ClosedBox inner_square() {
  Rational r = pow2(-10);
  return {-r, r, -r, r};
}

std::size_t DyadicSquareHash::operator()(const DyadicSquare& q) const noexcept {
  std::size_t h = std::hash<std::int64_t>{}(q.i);
  h ^= std::hash<std::int64_t>{}(q.j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<int>{}(q.level * 2 + (q.root ? 1 : 0)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t DyadicIntervalHash::operator()(const DyadicInterval& q) const noexcept {
  std::size_t h = std::hash<std::int64_t>{}(q.index);
  h ^= std::hash<int>{}(q.level * 2 + (q.root ? 1 : 0)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace sobext
