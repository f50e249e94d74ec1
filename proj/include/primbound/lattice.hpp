#pragma once

// Smooth-number divisibility lattices M_l(x), their chain decomposition by
// odd part, and the breakpoint partition of [1, K] on which every count
// family is constant.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "primbound/numeric.hpp"

namespace primbound {

/// The first `l` primes together with the next prime `q`.
struct PrimeBasis {
  std::vector<std::uint64_t> primes;
  std::uint64_t q = 2;

  std::size_t size() const { return primes.size(); }
  bool operator==(const PrimeBasis&) const = default;
};

PrimeBasis first_primes(std::size_t l);

/// One chain C(u) restricted to the lattice: u, 2u, 4u, ... in ascending order.
struct Chain {
  std::uint64_t odd_part = 1;
  std::vector<std::uint64_t> members;
};

/// The poset M_l(x) under divisibility.
struct SmoothLattice {
  PrimeBasis basis;
  std::uint64_t limit = 1;
  std::vector<std::uint64_t> elements;               // ascending
  std::vector<std::vector<std::uint8_t>> exponents;  // aligned with elements
  std::vector<Chain> chains;                         // ascending by odd part

  std::size_t size() const { return elements.size(); }
  /// Position of `value` in `elements`, or `size()` when absent.
  std::size_t index_of(std::uint64_t value) const;
};

SmoothLattice generate_lattice(const PrimeBasis& basis, std::uint64_t x);

/// |M_l(x)|, with |M_l(0)| = 0.
std::uint64_t smooth_count(const PrimeBasis& basis, std::uint64_t x);

/// All l-smooth numbers <= x, ascending. Empty for x = 0.
std::vector<std::uint64_t> smooth_numbers(const PrimeBasis& basis, std::uint64_t x);

std::size_t max_antichain_size(const SmoothLattice& lat);

struct Segment {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  bool operator==(const Segment&) const = default;
};

struct BreakpointPartition {
  PrimeBasis basis;
  std::uint64_t K = 1;
  std::vector<Segment> segments;
};

/// Minimal partition of [1, K] on which both M_l(i) and {m : m*q > i} are constant.
BreakpointPartition breakpoints(const PrimeBasis& basis, std::uint64_t K);

/// sum_{i=a}^{b} 1/(i(i+1)) = 1/a - 1/(b+1).
Rational telescoped_weight_sum(std::uint64_t a, std::uint64_t b);

/// prod_{j<=count} (1 - 1/p_j) over the first `count` primes of `primes`.
Rational coprime_density(const std::vector<std::uint64_t>& primes, std::size_t count);

}  // namespace primbound
