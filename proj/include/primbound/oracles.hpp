#pragma once

// Exact reference counts for small n: f(n), g(n), f_q(n), pairwise-coprime
// subsets, and pi(n).

#include <chrono>
#include <functional>
#include <cstdint>
#include <span>
#include <string_view>

#include "primbound/lattice.hpp"
#include "primbound/numeric.hpp"

namespace primbound {

enum class OracleMethod { ChainBacktracking, NaiveSubsets, MaskDP };

std::string_view to_string(OracleMethod m);

struct OracleResult {
  std::uint64_t n = 0;
  BigInt value;
  OracleMethod method = OracleMethod::ChainBacktracking;
  std::chrono::nanoseconds elapsed{0};
};

inline constexpr std::uint64_t kFChainCeiling = 24;
inline constexpr std::uint64_t kFNaiveCeiling = 10;
inline constexpr std::uint64_t kGChainCeiling = 40;
inline constexpr std::uint64_t kGNaiveCeiling = 20;
inline constexpr std::uint64_t kFqChainCeiling = 20;
inline constexpr std::uint64_t kFqNaiveCeiling = 10;
inline constexpr std::uint64_t kCoprimeMaskCeiling = 36;
inline constexpr std::uint64_t kCoprimeNaiveCeiling = 20;

/// True iff no element divides a different element.
bool primitive_check(std::span<const std::uint64_t> values);

/// n-element primitive subsets of [2n].
OracleResult f_exact(std::uint64_t n, OracleMethod method = OracleMethod::ChainBacktracking);
/// Primitive subsets of [n], the empty set included.
OracleResult g_exact(std::uint64_t n, OracleMethod method = OracleMethod::ChainBacktracking);
/// n-element primitive subsets of [2n] whose elements m all satisfy m*q > 2n.
OracleResult fq_exact(std::uint64_t n, const PrimeBasis& basis,
                      OracleMethod method = OracleMethod::ChainBacktracking);
/// Subsets of [n] with pairwise coprime elements, the empty set included.
OracleResult coprime_count_exact(std::uint64_t n, OracleMethod method = OracleMethod::MaskDP);

std::uint64_t prime_count(std::uint64_t n);

/// Log-form reference values log(2^{pi(n)} e^{c sqrt n}) for c = 1/2, 2, 1.
struct CoprimeBounds {
  std::uint64_t n = 0;
  std::uint64_t pi = 0;
  Real log_lower;  // c = 1/2
  Real log_upper;  // c = 2
  Real log_mid;    // c = 1
};

CoprimeBounds coprime_bound_eval(std::uint64_t n);

/// log(count / 2^{pi(n)}) / sqrt(n).
Real coprime_residual(std::uint64_t n, const BigInt& count);

/// Visits every n-element primitive subset of [2n] found by chain backtracking.
/// Used to check witnesses; keep n small.
void for_each_max_primitive(std::uint64_t n,
                            const std::function<void(std::span<const std::uint64_t>)>& visit);

}  // namespace primbound
