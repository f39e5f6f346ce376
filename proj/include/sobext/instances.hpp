#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sobext/rational.hpp"

namespace sobext {

enum class Family { uniform, cluster, near_pair, lattice };

const char* to_string(Family family);
/// Accepts "uniform", "cluster", "near-pair", "lattice".
Family parse_family(const std::string& name);

struct Instance {
  Family family = Family::uniform;
  std::uint64_t seed = 0;
  std::vector<Rational> sites;  // user coordinates, generator order
  std::vector<double> values;
};

/// Random sites of the given family with values uniform in [-1, 1].
///  uniform:   n distinct multiples of 2^-32 in [0, 1).
///  cluster:   a few centers with sites at geometric distances 2^-e from them.
///  near-pair: uniform background plus one pair 2^-33 apart.
///  lattice:   n of the points k 2^-11 / 10, |k| <= 10, always with k = +-10
///             (already normalized; 2 <= n <= 21).
Instance generate(Family family, std::size_t n, std::uint64_t seed);

/// Values a x + b at the sites. Throws InvariantError unless every value is
/// exactly a double, so the data are exactly affine.
std::vector<double> affine_values(const std::vector<Rational>& sites, const Rational& a, const Rational& b);

}  // namespace sobext
