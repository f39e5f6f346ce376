#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "sobext/grouping.hpp"
#include "support.hpp"

using namespace sobext;

namespace {

using Key = std::tuple<int, std::int64_t, std::int64_t>;

std::size_t brute_triple(const DyadicSquare& q, const SiteSet& s) {
  const OpenBox box = dilate(q, Rational(3));
  std::size_t count = 0;
  for (const Rational& x : s.xs()) count += box.contains({x, Rational(0)});
  return count;
}

// Plain recursive bisection with exact rational membership.
void recurse(const DyadicSquare& q, const SiteSet& s, std::set<Key>& out) {
  if (brute_triple(q, s) <= 1) {
    out.insert({q.level, q.i, q.j});
    return;
  }
  for (std::int64_t di : {0, 1}) {
    for (std::int64_t dj : {0, 1}) recurse(DyadicSquare::at(q.level + 1, 2 * q.i + di, 2 * q.j + dj), s, out);
  }
}

std::set<Key> oracle_decomposition(const SiteSet& s) {
  std::set<Key> out;
  for (std::int64_t i : {-1, 0}) {
    for (std::int64_t j : {-1, 0}) recurse(DyadicSquare::at(0, i, j), s, out);
  }
  return out;
}

}  // namespace

TEST_SUITE("czdecomp") {

TEST_CASE("decomposition equals recursive bisection") {
  for (const Instance& inst : test::small_battery(24)) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    std::set<Key> got;
    for (const CzSquare& c : d.squares()) got.insert({c.square.level, c.square.i, c.square.j});
    REQUIRE(got.size() == d.size());
    CHECK(got == oracle_decomposition(s));
    for (const CzSquare& c : d.squares()) REQUIRE(sites_in_triple(c.square, s) == brute_triple(c.square, s));
  }
}

TEST_CASE("squares are ordered by level, i, j") {
  const SiteSet s = SiteSet::normalize(generate(Family::cluster, 20, 2).sites);
  const CzDecomposition d = CzDecomposition::decompose(s);
  for (std::size_t k = 1; k < d.size(); ++k) {
    const auto& a = d.squares()[k - 1].square;
    const auto& b = d.squares()[k].square;
    REQUIRE(std::tie(a.level, a.i, a.j) < std::tie(b.level, b.i, b.j));
  }
}

TEST_CASE("neighbor lists agree with an all-pairs scan") {
  for (const Instance& inst : test::small_battery(17)) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    for (SquareId a = 0; a < static_cast<SquareId>(d.size()); ++a) {
      std::vector<SquareId> want;
      for (SquareId b = 0; b < static_cast<SquareId>(d.size()); ++b) {
        if (touches(d.square(a).square, d.square(b).square)) want.push_back(b);
      }
      const auto got = d.neighbors(a);
      REQUIRE(std::vector<SquareId>(got.begin(), got.end()) == want);
    }
  }
}

TEST_CASE("x-hat is the nearest site of 3I+ to the centre") {
  for (const Instance& inst : test::small_battery()) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    for (ShadowId sh = 0; sh < static_cast<ShadowId>(d.shadows().size()); ++sh) {
      const DyadicInterval I = d.shadows()[static_cast<std::size_t>(sh)];
      const OpenInterval box = dilate(I.root ? I : parent(I), Rational(3));
      std::optional<SiteIndex> best;
      for (SiteIndex k = 0; k < static_cast<SiteIndex>(s.size()); ++k) {
        if (!box.contains(s.x(k))) continue;
        if (!best || abs(s.x(k) - I.center()) < abs(s.x(*best) - I.center())) best = k;
      }
      REQUIRE(best.has_value());
      REQUIRE(d.xhat(sh) == *best);
    }
  }
}

TEST_CASE("relevance, kinds and core sites") {
  const ClosedBox inner = inner_square();
  for (const Instance& inst : test::small_battery()) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    for (const CzSquare& c : d.squares()) {
      const OpenBox b = dilate(c.square, Rational(11, 10));
      const bool meets = b.x.lo < inner.x_hi && inner.x_lo < b.x.hi && b.y.lo < inner.y_hi && inner.y_lo < b.y.hi;
      REQUIRE(c.relevant == meets);
      REQUIRE(c.kind == [&] {
        switch (c.square.j) {
          case 0: return SquareKind::contact_above;
          case -1: return SquareKind::contact_below;
          case 1: return SquareKind::contactless_above;
          default: return SquareKind::contactless_below;
        }
      }());
      std::vector<SiteIndex> core;
      for (SiteIndex k = 0; k < static_cast<SiteIndex>(s.size()); ++k) {
        if (b.contains({s.x(k), Rational(0)})) core.push_back(k);
      }
      REQUIRE(core.size() <= 1);
      REQUIRE(c.site_in_core == (core.empty() ? std::nullopt : std::optional<SiteIndex>(core.front())));
    }
  }
}

TEST_CASE("structural audit is clean") {
  for (const Instance& inst : test::small_battery(64)) {
    const SiteSet s = SiteSet::normalize(inst.sites);
    const CzDecomposition d = CzDecomposition::decompose(s);
    const auto bad = audit_decomposition(d, s);
    CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
  }
}

TEST_CASE("locate finds the containing square") {
  const SiteSet s = SiteSet::normalize(generate(Family::near_pair, 30, 6).sites);
  const CzDecomposition d = CzDecomposition::decompose(s);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double scale = trial % 2 ? 1.0 : 0x1p-10;
    const double x = u(rng) * scale, y = u(rng) * scale;
    const ClosedBox b = closed_box(d.square(d.locate(x, y)).square);
    const Rational X = from_double(x), Y = from_double(y);
    REQUIRE((b.x_lo <= X && X <= b.x_hi && b.y_lo <= Y && Y <= b.y_hi));
  }
  CHECK_THROWS_AS(d.locate(2.0, 0.0), ValidationError);
}

TEST_CASE("sites closer than the deepest level are rejected") {
  const std::vector<Rational> raw{Rational(0), pow2(-60), Rational(1)};
  CHECK_THROWS_AS(CzDecomposition::decompose(SiteSet::normalize(raw)), ValidationError);
}

TEST_CASE("neighbors() rejects non-CZ squares") {
  const SiteSet s = SiteSet::normalize(generate(Family::uniform, 5, 1).sites);
  const CzDecomposition d = CzDecomposition::decompose(s);
  CHECK_THROWS_AS(neighbors(d, DyadicSquare::at(0, 0, 0)), ValidationError);
  const auto n = neighbors(d, d.square(0).square);
  CHECK(std::find(n.begin(), n.end(), 0) != n.end());
}

}
