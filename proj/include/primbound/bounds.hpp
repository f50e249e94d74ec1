#pragma once

// Bound formulas for the growth constants
//   alpha = lim f(n)^{1/n}, f(n) = # n-element primitive subsets of [2n]
//   beta  = lim g(n)^{1/n}, g(n) = # primitive subsets of [n]
// built from lattice-decomposition products of antichain counts.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primbound/antichain.hpp"
#include "primbound/lattice.hpp"
#include "primbound/numeric.hpp"

namespace primbound {

enum class Target { Alpha, Beta };
enum class Flavor { BasicLower, BasicUpper, CrudeUpper, ImprovedLower, ImprovedUpper };
enum class Direction { Lower, Upper };

std::string_view to_string(Target t);
std::string_view to_string(Flavor f);
std::string_view to_string(Direction d);
std::optional<Target> parse_target(std::string_view text);
std::optional<Flavor> parse_flavor(std::string_view text);

struct BoundConfig {
  Target target = Target::Alpha;
  Flavor flavor = Flavor::BasicLower;
  std::size_t l = 2;              // basic flavors
  std::uint64_t K = 1;            // basic flavors
  std::vector<std::uint64_t> Ks;  // improved flavors: K_1, ..., K_S
  std::optional<std::uint64_t> K0;  // beta improved lower, defaults to K_1
  bool include_step0 = true;        // beta improved lower
  bool indicator_weights = false;   // improved lower: drop partially covered t-intervals

  std::size_t S() const { return Ks.size(); }
  bool improved() const { return flavor == Flavor::ImprovedLower || flavor == Flavor::ImprovedUpper; }
  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

struct StepContribution {
  std::string label;
  Real log_contribution;
};

struct TableUse {
  std::size_t l = 0;
  CountKind kind = CountKind::MaxAll;
  std::uint64_t K = 0;
  bool operator==(const TableUse&) const = default;
};

struct BoundReport {
  BoundConfig config;
  std::string bound;  // 12 significant digits of exp(log_bound)
  Real log_bound;
  Direction direction = Direction::Lower;
  std::vector<StepContribution> steps;
  std::vector<TableUse> tables;
  Real log_error_estimate;
  bool general_weights = false;  // non-monotone K vector forced the nested-sum weights
};

/// First index of the alpha chain-forming step. i = 1 covers odd t in (n, 2n],
/// whose chains are single elements and contribute the factor 1/2.
inline constexpr std::uint64_t kAlphaChainStart = 1;

/// Count tables keyed by number of primes l.
using LevelTables = std::map<std::size_t, CountTable>;

/// 2 for alpha (elements of [2n]), 1 for beta (elements of [n]).
Rational leading_constant(Target target);

BoundReport basic_lower(Target target, const PrimeBasis& basis, std::uint64_t K,
                        const CountTable& table);
BoundReport basic_upper(Target target, const PrimeBasis& basis, std::uint64_t K,
                        const CountTable& table);
BoundReport crude_upper_alpha(const PrimeBasis& basis, std::uint64_t K, const CountTable& table);

/// eta_{l,K} (truncated = false) or eta'_{l,K} (truncated = true).
Rational eta(Target target, const PrimeBasis& basis, std::uint64_t K, bool truncated);
/// The i-independent part of eta: c, or c - c/q when truncated.
Rational eta_leading(Target target, const PrimeBasis& basis, bool truncated);
/// Tail majorant sum_{i>K} c/(i(i+1)) (1 + log2 i)^l: exact partial sum up to
/// `terms` indices past K plus an integral bound on the remainder.
Real eta_tail_majorant(Target target, std::size_t l, std::uint64_t K, std::uint64_t terms = 100000);

struct EpsilonSchedule {
  std::uint64_t l = 1;
  std::optional<std::uint64_t> K;  // empty when it overflows 64 bits
  double log10_K = 0;
  bool overflow() const { return !K.has_value(); }
};

EpsilonSchedule epsilon_schedule(double eps);

/// w(l, i) with nested sums over alpha_{l+1..S}, valid for any K vector.
/// `primes` must hold at least S primes; Ks = (K_1, ..., K_S).
Rational weight(Target target, std::span<const std::uint64_t> primes,
                std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i);
/// Single-sum form of w(l, i), valid when Ks is non-increasing.
Rational weight_simplified(Target target, std::span<const std::uint64_t> primes,
                           std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i);
/// Exact density of the t in (N/(i+1), N/i] whose level-l lattice is left over,
/// N = 2n (alpha) or n (beta). Agrees with weight() except on the few i where
/// some K_v + 1 falls strictly inside (i P, (i+1) P); there it also counts the
/// covered fraction of the interval.
Rational bucket_weight(Target target, std::span<const std::uint64_t> primes,
                       std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i);
/// Sorted indices in [1, upto] at which w(l, i) * i(i+1) may change value.
std::vector<std::uint64_t> weight_breakpoints(std::span<const std::uint64_t> primes,
                                              std::span<const std::uint64_t> Ks, std::size_t l,
                                              std::uint64_t upto);
bool non_increasing(std::span<const std::uint64_t> Ks);

BoundReport improved_lower(Target target, std::span<const std::uint64_t> Ks,
                           const LevelTables& tables, std::optional<std::uint64_t> K0 = {},
                           bool include_step0 = true, bool indicator_weights = false);
BoundReport improved_upper(Target target, std::span<const std::uint64_t> Ks,
                           const LevelTables& tables);

/// Tables (l, kind, coverage) a configuration reads.
std::vector<TableUse> required_tables(const BoundConfig& config);

}  // namespace primbound
