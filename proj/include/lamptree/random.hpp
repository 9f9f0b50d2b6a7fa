#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lamptree {

/// Per-stream engine. mt19937_64 output is fixed by the standard, so
/// streams are reproducible across platforms; we never use std::*_distribution.
using Rng = std::mt19937_64;

/// One SplitMix64 output step (advances `state`).
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the independent stream number `index` under `master`. Depends only
/// on (master, index), never on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Uniform integer in [0, n) by rejection on one or more 64-bit draws.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// Walker/Vose alias table: O(1) sampling from a finite distribution.
class AliasTable {
 public:
  AliasTable() = default;
  /// Weights need not be normalised; all must be >= 0 with positive sum.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return alias_.size(); }
  std::size_t sample(Rng& rng) const;

 private:
  // Acceptance thresholds on a 32-bit scale.
  std::vector<std::uint64_t> threshold_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace lamptree
