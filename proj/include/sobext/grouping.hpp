#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobext/czdecomp.hpp"

namespace sobext {

/// The dilation K in the easy test diam(E+ n KI) >= |I| / K.
inline constexpr int kEasyDilation = 128;
/// Smallest K for which the group lemmas hold with c = 1/43.
inline constexpr int kMinEasyDilation = 106;

/// Two sites of E+ inside the open interval KI at distance >= |I| / K.
bool classify_easy(const DyadicInterval& shadow, const SiteSet& sites, int K = kEasyDilation);

/// The x* in E+ with x* <= inf 41I and E+ n (x*, inf 9I] empty, if any.
std::optional<SiteIndex> assign_group(const DyadicInterval& shadow, const SiteSet& sites);

/// One group Gp(x*) with its tower I_0 c ... c I_L and gangs.
struct Group {
  SiteIndex owner = kAuxSite;
  std::vector<ShadowId> shadows;
  std::vector<SquareId> squares;
  std::vector<ShadowId> tower_shadows;
  std::vector<SquareId> tower;
  /// gangs[l] = Gang(l, z*) for l = 0..L.
  std::vector<std::vector<SquareId>> gangs;

  int L() const { return static_cast<int>(tower.size()) - 1; }
  SquareId small() const { return tower.front(); }
  SquareId big() const { return tower.back(); }
};

class GroupTable {
 public:
  static GroupTable build(const CzDecomposition& d, const SiteSet& sites, int K = kEasyDilation);

  int K() const { return K_; }
  bool shadow_easy(ShadowId s) const { return easy_.at(static_cast<std::size_t>(s)); }
  bool square_easy(const CzDecomposition& d, SquareId q) const { return shadow_easy(d.square(q).shadow); }
  std::optional<SiteIndex> shadow_owner(ShadowId s) const { return owner_.at(static_cast<std::size_t>(s)); }
  /// Index into groups() of the group holding the square, if any.
  std::optional<std::size_t> group_of(const CzDecomposition& d, SquareId q) const;
  std::span<const Group> groups() const { return groups_; }

  /// Smallest C with Q_l c CQ_l' for all l < l' (the tower nesting constant).
  double tower_nesting_constant(const CzDecomposition& d) const;
  std::size_t max_gang_size() const;

 private:
  int K_ = kEasyDilation;
  std::vector<bool> easy_;
  std::vector<std::optional<SiteIndex>> owner_;
  std::vector<std::optional<std::size_t>> shadow_group_;
  std::vector<Group> groups_;
};

/// Structural checks of the decomposition; one message per violation.
std::vector<std::string> audit_decomposition(const CzDecomposition& d, const SiteSet& sites);
/// Group lemma checks; one message per violation.
std::vector<std::string> audit_groups(const CzDecomposition& d, const GroupTable& g, const SiteSet& sites);

}  // namespace sobext
