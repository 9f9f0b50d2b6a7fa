#include "lamptree/random.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lamptree {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t mixed_master = splitmix64(s);
  std::uint64_t t = mixed_master ^ (index * 0xD1B54A32D192ED03ULL);
  splitmix64(t);
  return splitmix64(t);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below needs n > 0");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % n;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("alias weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("alias weights sum to zero");

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;
  threshold_.assign(n, 1ULL << 32);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), 0u);

  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    std::size_t s = small.back();
    small.pop_back();
    std::size_t l = large.back();
    threshold_[s] = static_cast<std::uint64_t>(std::llround(scaled[s] * 4294967296.0));
    alias_[s] = static_cast<std::uint32_t>(l);
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
}

std::size_t AliasTable::sample(Rng& rng) const {
  std::uint64_t u = rng();
  std::size_t column = static_cast<std::size_t>(((u >> 32) * alias_.size()) >> 32);
  std::uint64_t coin = u & 0xFFFFFFFFULL;
  return coin < threshold_[column] ? column : alias_[column];
}

}  // namespace lamptree
