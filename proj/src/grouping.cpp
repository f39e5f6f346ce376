#include "sobext/grouping.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sobext {

namespace {

void require_K(int K) {
  if (K < kMinEasyDilation) {
    throw ValidationError("easy dilation K = " + std::to_string(K) + " is below " +
                          std::to_string(kMinEasyDilation));
  }
}

int kind_rank(SquareKind kind) {
  switch (kind) {
    case SquareKind::contact_above: return 0;
    case SquareKind::contact_below: return 1;
    case SquareKind::contactless_above: return 2;
    case SquareKind::contactless_below: return 3;
  }
  return 4;
}

std::string describe(const DyadicSquare& q) {
  std::ostringstream os;
  os << "(k=" << q.level << ", i=" << q.i << ", j=" << q.j << ")";
  return os.str();
}

std::string describe(const DyadicInterval& s) {
  std::ostringstream os;
  os << "(k=" << s.level << ", i=" << s.index << ")";
  return os.str();
}

}  // namespace

bool classify_easy(const DyadicInterval& shadow, const SiteSet& sites, int K) {
  require_K(K);
  auto ext = sites.extremes_in(dilate_exact(shadow, K), true);
  if (!ext) return false;
  return sites.x(ext->second) - sites.x(ext->first) >= shadow.length() / K;
}

std::optional<SiteIndex> assign_group(const DyadicInterval& shadow, const SiteSet& sites) {
  auto candidate = sites.last_at_most(dilate_exact(shadow, 9).lo, true);
  if (!candidate) return std::nullopt;
  const double inf41 = dilate_exact(shadow, 41).lo;
  const bool below = *candidate == kAuxSite ? -1.0 <= inf41 : sites.compare(*candidate, inf41) <= 0;
  if (below) return candidate;
  return std::nullopt;
}

GroupTable GroupTable::build(const CzDecomposition& d, const SiteSet& sites, int K) {
  require_K(K);
  GroupTable g;
  g.K_ = K;
  const auto shadows = d.shadows();
  g.easy_.reserve(shadows.size());
  g.owner_.reserve(shadows.size());
  std::map<SiteIndex, std::vector<ShadowId>> members;
  for (std::size_t s = 0; s < shadows.size(); ++s) {
    g.easy_.push_back(classify_easy(shadows[s], sites, K));
    g.owner_.push_back(assign_group(shadows[s], sites));
    if (g.owner_.back()) members[*g.owner_.back()].push_back(static_cast<ShadowId>(s));
  }

  g.shadow_group_.assign(shadows.size(), std::nullopt);
  for (auto& [owner, list] : members) {
    Group group;
    group.owner = owner;
    group.shadows = list;
    for (ShadowId s : list) {
      g.shadow_group_[static_cast<std::size_t>(s)] = g.groups_.size();
      auto over = d.squares_over(s);
      group.squares.insert(group.squares.end(), over.begin(), over.end());
    }
    std::sort(group.squares.begin(), group.squares.end());

    // I_0: a shortest shadow of the group, leftmost among ties.
    ShadowId first = *std::min_element(list.begin(), list.end(), [&](ShadowId a, ShadowId b) {
      const auto& ia = shadows[static_cast<std::size_t>(a)];
      const auto& ib = shadows[static_cast<std::size_t>(b)];
      return std::tie(ib.level, ia.index) < std::tie(ia.level, ib.index);
    });
    group.tower_shadows.push_back(first);
    for (;;) {
      const DyadicInterval& top = shadows[static_cast<std::size_t>(group.tower_shadows.back())];
      if (top.level == 0) break;
      auto up = d.find_shadow(parent(top));
      if (!up || g.owner_[static_cast<std::size_t>(*up)] != owner) break;
      group.tower_shadows.push_back(*up);
    }
    for (ShadowId s : group.tower_shadows) {
      auto over = d.squares_over(s);
      group.tower.push_back(*std::min_element(over.begin(), over.end(), [&](SquareId a, SquareId b) {
        return kind_rank(d.square(a).kind) < kind_rank(d.square(b).kind);
      }));
    }
    for (SquareId anchor : group.tower) {
      const DyadicSquare& qa = d.square(anchor).square;
      OpenBox wide = dilate(qa, Rational(100));
      std::vector<SquareId> gang;
      for (SquareId q : group.squares) {
        const DyadicSquare& qq = d.square(q).square;
        if (qq.level == qa.level && intersects(dilate(qq, Rational(100)), wide)) gang.push_back(q);
      }
      group.gangs.push_back(std::move(gang));
    }
    g.groups_.push_back(std::move(group));
  }
  return g;
}

std::optional<std::size_t> GroupTable::group_of(const CzDecomposition& d, SquareId q) const {
  return shadow_group_.at(static_cast<std::size_t>(d.square(q).shadow));
}

double GroupTable::tower_nesting_constant(const CzDecomposition& d) const {
  Rational worst = 0;
  for (const Group& group : groups_) {
    for (std::size_t a = 0; a < group.tower.size(); ++a) {
      ClosedBox inner = closed_box(d.square(group.tower[a]).square);
      for (std::size_t b = a + 1; b < group.tower.size(); ++b) {
        const DyadicSquare& outer = d.square(group.tower[b]).square;
        Rational cx = outer.x_interval().center();
        Rational cy = outer.y_interval().center();
        Rational reach = std::max({abs(inner.x_lo - cx), abs(inner.x_hi - cx), abs(inner.y_lo - cy),
                                   abs(inner.y_hi - cy)});
        worst = std::max(worst, Rational(2 * reach / outer.side()));
      }
    }
  }
  return to_double(worst);
}

std::size_t GroupTable::max_gang_size() const {
  std::size_t m = 0;
  for (const Group& group : groups_) {
    for (const auto& gang : group.gangs) m = std::max(m, gang.size());
  }
  return m;
}

std::vector<std::string> audit_decomposition(const CzDecomposition& d, const SiteSet& sites) {
  std::vector<std::string> bad;
  Rational area = 0;
  for (const CzSquare& cz : d.squares()) {
    const DyadicSquare& q = cz.square;
    area += q.area();
    for (DyadicSquare up = q; !up.root;) {
      up = parent(up);
      if (!up.root && d.find(up)) bad.push_back("tiling: " + describe(q) + " nested in another CZ square");
    }
    if (sites_in_triple(q, sites) > 1) bad.push_back("stopping rule: #(E n 3Q) > 1 at " + describe(q));
    DyadicSquare up = parent(q);
    const std::size_t parent_count = up.root ? sites.size() : sites_in_triple(up, sites);
    if (parent_count < 2) bad.push_back("maximality: parent of " + describe(q) + " has #(E n 3Q+) < 2");
    if (q.j < -2 || q.j > 1) bad.push_back("contact form: " + describe(q) + " is not one of the four forms");
    if (!is_contact(cz.kind) && sites_in_triple(q, sites) != 0) {
      bad.push_back("contactless square " + describe(q) + " has a site in 3Q");
    }
    if (cz.relevant && q.level < 8) bad.push_back("relevant square " + describe(q) + " has side > 2^-8");

    // Every level-(k+1) cell ringing Q must lie inside a CZ square of level k-1..k+1.
    const int ring_level = q.level + 1;
    if (ring_level <= kMaxLevel) {
      const std::int64_t limit = std::int64_t{1} << ring_level;
      for (std::int64_t a = 2 * q.i - 1; a <= 2 * q.i + 2; ++a) {
        for (std::int64_t b = 2 * q.j - 1; b <= 2 * q.j + 2; ++b) {
          const bool interior = a >= 2 * q.i && a <= 2 * q.i + 1 && b >= 2 * q.j && b <= 2 * q.j + 1;
          if (interior || a < -limit || a >= limit || b < -limit || b >= limit) continue;
          DyadicSquare cell{false, ring_level, a, b};
          bool covered = false;
          for (DyadicSquare up2 = cell; !up2.root && up2.level >= q.level - 1; up2 = parent(up2)) {
            if (d.find(up2)) {
              covered = true;
              break;
            }
          }
          if (!covered) bad.push_back("good geometry: a square touching " + describe(q) + " has side outside [δ/2, 2δ]");
        }
      }
    }
  }
  if (area != 4) bad.push_back("tiling: total area " + to_string(area) + " != 4");

  for (std::size_t s = 0; s < d.shadows().size(); ++s) {
    const DyadicInterval& shadow = d.shadows()[s];
    if (shadow.level >= 2 && !d.find_shadow(parent(shadow))) {
      bad.push_back("parent shadow: parent of " + describe(shadow) + " is not a shadow");
    }
    SiteIndex xh = d.xhat(static_cast<ShadowId>(s));
    if (!dilate(shadow, Rational(7)).contains(sites.x(xh))) {
      bad.push_back("x-hat of " + describe(shadow) + " is outside 7I");
    }
  }
  return bad;
}

std::vector<std::string> audit_groups(const CzDecomposition& d, const GroupTable& g, const SiteSet& sites) {
  std::vector<std::string> bad;
  const auto shadows = d.shadows();
  for (std::size_t s = 0; s < shadows.size(); ++s) {
    bool relevant = false;
    for (SquareId q : d.squares_over(static_cast<ShadowId>(s))) relevant = relevant || d.square(q).relevant;
    if (relevant && !g.shadow_easy(static_cast<ShadowId>(s)) && !g.shadow_owner(static_cast<ShadowId>(s))) {
      bad.push_back("relevant-hard: hard relevant shadow " + describe(shadows[s]) + " has no group");
    }
  }

  for (const Group& group : g.groups()) {
    const std::string who = "group of x* = " + to_string(sites.x(group.owner));
    for (std::size_t a = 0; a < group.shadows.size(); ++a) {
      OpenInterval wa = dilate(shadows[static_cast<std::size_t>(group.shadows[a])], Rational(9));
      for (std::size_t b = a + 1; b < group.shadows.size(); ++b) {
        if (!intersects(wa, dilate(shadows[static_cast<std::size_t>(group.shadows[b])], Rational(9)))) {
          bad.push_back("group overlap: 9J and 9J' disjoint in " + who);
        }
      }
    }
    const DyadicInterval& i0 = shadows[static_cast<std::size_t>(group.tower_shadows.front())];
    const DyadicInterval& il = shadows[static_cast<std::size_t>(group.tower_shadows.back())];
    const Rational& xs = sites.x(group.owner);
    Rational dist = xs < i0.left() ? Rational(i0.left() - xs) : (xs > i0.right() ? Rational(xs - i0.right()) : Rational(0));
    if (42 * il.length() < dist) bad.push_back("tower reach: |I_L| < dist(x*, I_0)/42 in " + who);
    for (std::size_t l = 0; l < group.tower.size(); ++l) {
      if (d.square(group.tower[l]).square.level != d.square(group.tower.front()).square.level - static_cast<int>(l)) {
        bad.push_back("tower doubling: tower sides do not double in " + who);
      }
    }
    if (!g.square_easy(d, group.big())) bad.push_back("easy top: Q_L is hard in " + who);
    for (SquareId q : group.squares) {
      if (g.square_easy(d, q)) continue;
      const DyadicSquare& qq = d.square(q).square;
      if (!(d.square(q).square.x_interval().length() < il.length())) {
        bad.push_back("hard shadow not shorter than I_L in " + who);
      }
      bool covered = false;
      for (int l = 0; l < group.L() && !covered; ++l) {
        const DyadicSquare& ql = d.square(group.tower[static_cast<std::size_t>(l)]).square;
        covered = ql.level == qq.level && intersects(dilate(qq, Rational(100)), dilate(ql, Rational(100)));
      }
      if (!covered) bad.push_back("gang cover: hard square " + describe(qq) + " is in no gang of " + who);
    }
  }

  for (std::size_t q = 0; q < d.size(); ++q) {
    auto gq = g.group_of(d, static_cast<SquareId>(q));
    if (!gq) continue;
    for (SquareId r : d.neighbors(static_cast<SquareId>(q))) {
      auto gr = g.group_of(d, r);
      if (gr && *gr != *gq) {
        bad.push_back("group separation: touching squares " + describe(d.square(static_cast<SquareId>(q)).square) + " and " +
                      describe(d.square(r).square) + " lie in different groups");
      }
    }
  }
  return bad;
}

}  // namespace sobext
