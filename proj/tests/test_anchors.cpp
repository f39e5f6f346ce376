#include <doctest.h>

#include "sobext/anchors.hpp"
#include "support.hpp"

using namespace sobext;

namespace {

SiteIndex brute_closest_in_seven(const DyadicSquare& q, const SiteSet& s) {
  const OpenBox box = dilate(q, Rational(7));
  const Rational c = q.x_interval().center();
  std::optional<SiteIndex> best;
  for (SiteIndex k = 0; k < static_cast<SiteIndex>(s.size()); ++k) {
    if (!box.contains({s.x(k), Rational(0)})) continue;
    if (!best || abs(s.x(k) - c) < abs(s.x(*best) - c)) best = k;
  }
  REQUIRE(best.has_value());
  return *best;
}

}  // namespace

TEST_SUITE("anchors") {

TEST_CASE("every relevant square gets anchors by the three rules") {
  for (const Instance& inst : test::small_battery(64)) {
    const Pipeline pl = test::build(inst);
    const auto& d = pl.cz;
    const auto& g = pl.groups;
    const auto& a = pl.anchors;
    for (SquareId q = 0; q < static_cast<SquareId>(d.size()); ++q) {
      const CzSquare& c = d.square(q);
      REQUIRE(a.has(q) == c.relevant);
      if (g.square_easy(d, q)) {
        const auto pair = a.easy_pair(q);
        REQUIRE(pair.has_value());
        const OpenInterval window = dilate(c.square.x_interval(), Rational(g.K()));
        REQUIRE(window.contains(pl.sites.x(pair->first)));
        REQUIRE(window.contains(pl.sites.x(pair->second)));
        REQUIRE(pl.sites.x(pair->second) - pl.sites.x(pair->first) >= c.square.side() / g.K());
      }
      if (!c.relevant) {
        CHECK_THROWS_AS(a.at(q), ValidationError);
        continue;
      }
      const Anchor& an = a.at(q);
      REQUIRE(an.z1 < an.z2);
      REQUIRE(an.zbar != kAuxSite);
      if (c.site_in_core) {
        REQUIRE(an.zbar_source == ZbarSource::unique_core);
        REQUIRE(an.zbar == *c.site_in_core);
      } else if (g.square_easy(d, q)) {
        REQUIRE(an.zbar_source == ZbarSource::easy_7q);
        REQUIRE(an.zbar == brute_closest_in_seven(c.square, pl.sites));
      } else {
        REQUIRE(an.zbar_source == ZbarSource::group_small);
        const Group& group = g.groups()[*g.group_of(d, q)];
        REQUIRE(an.zbar == brute_closest_in_seven(d.square(group.small()).square, pl.sites));
      }
      if (g.square_easy(d, q)) {
        REQUIRE(an.pair_source == PairSource::easy_pair);
        REQUIRE(std::pair{an.z1, an.z2} == *a.easy_pair(q));
      } else {
        REQUIRE(an.pair_source == PairSource::big_square_pair);
        const Group& group = g.groups()[*g.group_of(d, q)];
        REQUIRE(std::pair{an.z1, an.z2} == *a.easy_pair(group.big()));
      }
      if (an.pair_source == PairSource::easy_pair) {
        REQUIRE(containing_dilation(c.square, pl.sites.x(an.z1)) < g.K());
        REQUIRE(containing_dilation(c.square, pl.sites.x(an.z2)) < g.K());
      }
      if (an.zbar_source != ZbarSource::group_small) {
        REQUIRE(containing_dilation(c.square, pl.sites.x(an.zbar)) < 7);
      }
      const auto sites = anchor_sites(a, q);
      REQUIRE(std::is_sorted(sites.begin(), sites.end()));
      REQUIRE(sites.size() >= 2);
    }
    if (!d.relevant().empty()) {
      CHECK(a.zbar_dilation(d, pl.sites) > 0.0);
      CHECK(a.pair_dilation(d, pl.sites) >= 1.0);
    }
  }
}

TEST_CASE("containing dilation") {
  const DyadicSquare q = DyadicSquare::at(4, 0, 0);  // [0, 1/16]^2, centre (1/32, 1/32)
  CHECK(containing_dilation(q, Rational(1, 32)) == 1);
  CHECK(containing_dilation(q, Rational(1, 8)) == 3);
  CHECK(containing_dilation(q, Rational(-1, 32)) == 2);
}

}
