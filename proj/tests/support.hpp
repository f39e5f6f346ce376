#pragma once

#include <random>
#include <vector>

#include "sobext/instances.hpp"
#include "sobext/pipeline.hpp"

namespace sobext::test {

inline Pipeline build(const Instance& inst) { return Pipeline::build(inst.sites); }

/// A few instances of every family, small enough for brute-force oracles.
inline std::vector<Instance> small_battery(std::size_t max_n = 40) {
  std::vector<Instance> out;
  std::uint64_t seed = 11;
  for (Family fam : {Family::uniform, Family::cluster, Family::near_pair, Family::lattice}) {
    for (std::size_t n : {2, 3, 5, 9, 17}) {
      if (n > max_n) continue;
      out.push_back(generate(fam, n, seed++));
    }
  }
  for (Family fam : {Family::uniform, Family::cluster, Family::near_pair}) out.push_back(generate(fam, max_n, seed++));
  return out;
}

inline ExactDataVector random_exact(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  ExactDataVector f;
  for (std::size_t k = 0; k < n; ++k) f.values.emplace_back(num(rng), den(rng));
  for (auto& v : f.values) v.canonicalize();
  return f;
}

inline DataVector random_data(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DataVector f;
  for (std::size_t k = 0; k < n; ++k) f.values.push_back(u(rng));
  return f;
}

}  // namespace sobext::test
