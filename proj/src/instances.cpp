#include "sobext/instances.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace sobext {

const char* to_string(Family family) {
  switch (family) {
    case Family::uniform: return "uniform";
    case Family::cluster: return "cluster";
    case Family::near_pair: return "near-pair";
    case Family::lattice: return "lattice";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::uniform;
  if (name == "cluster") return Family::cluster;
  if (name == "near-pair") return Family::near_pair;
  if (name == "lattice") return Family::lattice;
  throw ValidationError("unknown instance family '" + name + "'");
}

namespace {

// Uniform integer in [0, bound) without relying on distribution internals.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

double unit_value(std::mt19937_64& rng) {
  // Multiples of 2^-52 in [-1, 1].
  return static_cast<double>(static_cast<std::int64_t>(below(rng, (std::uint64_t{1} << 53) + 1)) -
                             (std::int64_t{1} << 52)) *
         0x1p-52;
}

std::vector<Rational> uniform_sites(std::mt19937_64& rng, std::size_t n, std::set<std::uint64_t>& used) {
  std::vector<Rational> out;
  while (out.size() < n) {
    std::uint64_t k = below(rng, std::uint64_t{1} << 32);
    if (!used.insert(k << 8).second) continue;
    out.push_back(Rational(static_cast<long>(k)) * pow2(-32));
  }
  return out;
}

}  // namespace

Instance generate(Family family, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("an instance needs at least two sites");
  std::mt19937_64 rng(seed);
  Instance inst;
  inst.family = family;
  inst.seed = seed;
  std::set<std::uint64_t> used;  // sites as multiples of 2^-40
  switch (family) {
    case Family::uniform:
      inst.sites = uniform_sites(rng, n, used);
      break;
    case Family::cluster: {
      // Units of 2^-30: centers in [2^28, 3 2^28), offsets near 2^(28-e).
      const std::size_t centers = 1 + below(rng, std::min<std::uint64_t>(4, n));
      std::vector<std::uint64_t> c;
      for (std::size_t k = 0; k < centers; ++k) c.push_back((std::uint64_t{1} << 28) + below(rng, std::uint64_t{1} << 29));
      while (inst.sites.size() < n) {
        const std::uint64_t base = c[below(rng, c.size())];
        const int e = 2 + static_cast<int>(below(rng, 26));
        const std::uint64_t scale = std::uint64_t{1} << (28 - e);
        const std::uint64_t offset = scale + below(rng, scale / 2 + 1);
        const std::uint64_t k = below(rng, 2) ? base + offset : base - offset;
        if (!used.insert(k << 10).second) continue;
        inst.sites.push_back(Rational(static_cast<long>(k)) * pow2(-30));
      }
      break;
    }
    case Family::near_pair: {
      inst.sites = uniform_sites(rng, n - 1, used);
      // Partner 2^-33 to the right of a random site: closer than any other gap.
      const Rational& anchor = inst.sites[below(rng, inst.sites.size())];
      Rational partner = anchor + pow2(-33);
      inst.sites.push_back(partner);
      break;
    }
    case Family::lattice: {
      if (n > 21) throw ValidationError("the lattice family has at most 21 sites");
      std::vector<int> ks;
      for (int k = -9; k <= 9; ++k) ks.push_back(k);
      std::shuffle(ks.begin(), ks.end(), rng);
      ks.resize(n - 2);
      ks.push_back(-10);
      ks.push_back(10);
      std::sort(ks.begin(), ks.end());
      for (int k : ks) {
        Rational x(k, 10240);
        x.canonicalize();
        inst.sites.push_back(x);
      }
      break;
    }
  }
  for (std::size_t k = 0; k < n; ++k) inst.values.push_back(unit_value(rng));
  return inst;
}

std::vector<double> affine_values(const std::vector<Rational>& sites, const Rational& a, const Rational& b) {
  std::vector<double> out;
  for (const Rational& x : sites) {
    Rational v = a * x + b;
    const double d = to_double(v);
    if (from_double(d) != v) throw InvariantError("affine value " + to_string(v) + " is not a double");
    out.push_back(d);
  }
  return out;
}

}  // namespace sobext
