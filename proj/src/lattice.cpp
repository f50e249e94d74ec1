#include "primbound/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace primbound {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

void enumerate(const std::vector<std::uint64_t>& primes, std::size_t j, std::uint64_t value,
               std::uint64_t x, std::vector<std::uint8_t>& exps,
               std::vector<std::pair<std::uint64_t, std::vector<std::uint8_t>>>& out) {
  if (j == primes.size()) {
    out.emplace_back(value, exps);
    return;
  }
  const std::uint64_t p = primes[j];
  std::uint64_t v = value;
  for (std::uint8_t a = 0;; ++a) {
    exps[j] = a;
    enumerate(primes, j + 1, v, x, exps, out);
    if (v > x / p) break;
    v *= p;
  }
  exps[j] = 0;
}

void enumerate_values(const std::vector<std::uint64_t>& primes, std::size_t j, std::uint64_t value,
                      std::uint64_t x, std::vector<std::uint64_t>& out) {
  if (j == primes.size()) {
    out.push_back(value);
    return;
  }
  const std::uint64_t p = primes[j];
  for (std::uint64_t v = value;; v *= p) {
    enumerate_values(primes, j + 1, v, x, out);
    if (v > x / p) break;
  }
}

}  // namespace

PrimeBasis first_primes(std::size_t l) {
  PrimeBasis basis;
  std::uint64_t p = 2;
  for (std::size_t k = 0; k < l; ++k) {
    basis.primes.push_back(p);
    p = next_prime(p);
  }
  basis.q = p;
  return basis;
}

std::size_t SmoothLattice::index_of(std::uint64_t value) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), value);
  if (it == elements.end() || *it != value) return elements.size();
  return static_cast<std::size_t>(it - elements.begin());
}

SmoothLattice generate_lattice(const PrimeBasis& basis, std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("generate_lattice: limit must be positive");
  SmoothLattice lat;
  lat.basis = basis;
  lat.limit = x;

  std::vector<std::pair<std::uint64_t, std::vector<std::uint8_t>>> found;
  std::vector<std::uint8_t> exps(basis.size(), 0);
  enumerate(basis.primes, 0, 1, x, exps, found);
  std::sort(found.begin(), found.end());
  lat.elements.reserve(found.size());
  lat.exponents.reserve(found.size());
  for (auto& [value, e] : found) {
    lat.elements.push_back(value);
    lat.exponents.push_back(std::move(e));
  }

  // Odd parts come out ascending because elements are sorted.
  const bool has_two = !basis.primes.empty();
  for (std::size_t k = 0; k < lat.elements.size(); ++k) {
    const std::uint64_t u = lat.elements[k];
    if (has_two && lat.exponents[k][0] != 0) continue;
    Chain chain;
    chain.odd_part = u;
    chain.members.push_back(u);
    if (has_two)
      for (std::uint64_t v = u; v <= x / 2;) chain.members.push_back(v *= 2);
    lat.chains.push_back(std::move(chain));
  }
  return lat;
}

std::vector<std::uint64_t> smooth_numbers(const PrimeBasis& basis, std::uint64_t x) {
  std::vector<std::uint64_t> out;
  if (x == 0) return out;
  enumerate_values(basis.primes, 0, 1, x, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t smooth_count(const PrimeBasis& basis, std::uint64_t x) {
  if (x == 0) return 0;
  std::vector<std::uint64_t> out;
  enumerate_values(basis.primes, 0, 1, x, out);
  return out.size();
}

std::size_t max_antichain_size(const SmoothLattice& lat) { return lat.chains.size(); }

BreakpointPartition breakpoints(const PrimeBasis& basis, std::uint64_t K) {
  if (K == 0) throw std::invalid_argument("breakpoints: K must be positive");
  std::vector<std::uint64_t> starts = smooth_numbers(basis, K);
  for (std::uint64_t m : smooth_numbers(basis, K / basis.q)) starts.push_back(m * basis.q);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  BreakpointPartition part;
  part.basis = basis;
  part.K = K;
  part.segments.reserve(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::uint64_t hi = k + 1 < starts.size() ? starts[k + 1] - 1 : K;
    part.segments.push_back({starts[k], hi});
  }
  return part;
}

Rational telescoped_weight_sum(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || a > b) throw std::invalid_argument("telescoped_weight_sum: need 1 <= a <= b");
  return Rational(1, BigInt(a)) - Rational(1, BigInt(b) + 1);
}

Rational coprime_density(const std::vector<std::uint64_t>& primes, std::size_t count) {
  Rational d = 1;
  for (std::size_t j = 0; j < count && j < primes.size(); ++j)
    d *= Rational(BigInt(primes[j] - 1), BigInt(primes[j]));
  return d;
}

}  // namespace primbound
