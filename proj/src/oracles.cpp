#include "primbound/oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "primbound/errors.hpp"

namespace primbound {

namespace {

using Clock = std::chrono::steady_clock;

void check_ceiling(std::string_view what, std::uint64_t n, std::uint64_t ceiling) {
  if (n > ceiling)
    throw ResourceLimitError(std::string(what) + ": n = " + std::to_string(n) +
                             " exceeds the method ceiling " + std::to_string(ceiling));
}

OracleResult finish(std::uint64_t n, BigInt value, OracleMethod method, Clock::time_point start) {
  return {n, std::move(value), method,
          std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)};
}

// Chains C(u) = {u, 2u, 4u, ...} within [1, top], largest odd u first.
std::vector<std::vector<std::uint64_t>> chains_upto(std::uint64_t top) {
  std::vector<std::vector<std::uint64_t>> out;
  std::uint64_t u = top % 2 == 1 ? top : top - 1;
  for (; u >= 1; u -= 2) {
    std::vector<std::uint64_t> c;
    for (std::uint64_t x = u; x <= top; x *= 2) c.push_back(x);
    out.push_back(std::move(c));
    if (u == 1) break;
  }
  return out;
}

// With chains visited by decreasing odd part, a new element can only divide
// earlier picks, never the other way round.
bool divides_any(std::uint64_t e, const std::vector<std::uint64_t>& chosen) {
  return std::any_of(chosen.begin(), chosen.end(), [e](std::uint64_t c) { return c % e == 0; });
}

struct OnePerChain {
  explicit OnePerChain(std::vector<std::vector<std::uint64_t>> c) : chains(std::move(c)) {}
  std::vector<std::vector<std::uint64_t>> chains;
  std::uint64_t floor_exclusive = 0;  // only elements > floor_exclusive are allowed
  bool optional = false;              // chains may contribute nothing (g)
  const std::function<void(std::span<const std::uint64_t>)>* visit = nullptr;
  std::vector<std::uint64_t> chosen;
  BigInt count = 0;

  void run(std::size_t k) {
    if (k == chains.size()) {
      ++count;
      if (visit) (*visit)(chosen);
      return;
    }
    if (optional) run(k + 1);
    for (std::uint64_t e : chains[k]) {
      if (e <= floor_exclusive || divides_any(e, chosen)) continue;
      chosen.push_back(e);
      run(k + 1);
      chosen.pop_back();
    }
  }
};

// Bitmask over [1, m]: bit (y - 1) of mask[x - 1] set when x and y conflict.
template <class Conflict>
std::vector<std::uint64_t> conflict_masks(std::uint64_t m, Conflict conflict) {
  std::vector<std::uint64_t> mask(m, 0);
  for (std::uint64_t x = 1; x <= m; ++x)
    for (std::uint64_t y = 1; y <= m; ++y)
      if (x != y && conflict(x, y)) mask[x - 1] |= std::uint64_t{1} << (y - 1);
  return mask;
}

bool independent(std::uint64_t subset, const std::vector<std::uint64_t>& mask) {
  for (std::uint64_t rest = subset; rest; rest &= rest - 1)
    if (subset & mask[std::countr_zero(rest)]) return false;
  return true;
}

bool divisible_pair(std::uint64_t x, std::uint64_t y) { return y % x == 0 || x % y == 0; }

// Size-n subsets of [2n] (optionally restricted by allowed) that are primitive.
BigInt naive_max_primitive(std::uint64_t n, std::uint64_t allowed) {
  const std::uint64_t m = 2 * n;
  const auto mask = conflict_masks(m, divisible_pair);
  BigInt count = 0;
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  for (std::uint64_t s = 0; s <= full; ++s) {
    if (static_cast<std::uint64_t>(std::popcount(s)) == n && (s & ~allowed) == 0 &&
        independent(s, mask))
      ++count;
    if (s == full) break;
  }
  return count;
}

std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t k = p * p; k <= n; k += p) composite[k] = true;
  }
  return out;
}

}  // namespace

std::string_view to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::ChainBacktracking: return "chain-backtracking";
    case OracleMethod::NaiveSubsets: return "naive-subsets";
    case OracleMethod::MaskDP: return "mask-dp";
  }
  return "?";
}

bool primitive_check(std::span<const std::uint64_t> values) {
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = 0; b < values.size(); ++b)
      if (a != b && values[a] != 0 && values[b] % values[a] == 0) return false;
  return true;
}

OracleResult f_exact(std::uint64_t n, OracleMethod method) {
  const auto start = Clock::now();
  if (n == 0) throw std::invalid_argument("f: n must be positive");
  switch (method) {
    case OracleMethod::ChainBacktracking: {
      check_ceiling("f (chain backtracking)", n, kFChainCeiling);
      OnePerChain search(chains_upto(2 * n));
      search.run(0);
      return finish(n, search.count, method, start);
    }
    case OracleMethod::NaiveSubsets:
      check_ceiling("f (naive)", n, kFNaiveCeiling);
      return finish(n, naive_max_primitive(n, ~std::uint64_t{0}), method, start);
    default: throw std::invalid_argument("f: unsupported method " + std::string(to_string(method)));
  }
}

OracleResult g_exact(std::uint64_t n, OracleMethod method) {
  const auto start = Clock::now();
  if (n == 0) throw std::invalid_argument("g: n must be positive");
  switch (method) {
    case OracleMethod::ChainBacktracking: {
      check_ceiling("g (chain backtracking)", n, kGChainCeiling);
      OnePerChain search(chains_upto(n));
      search.optional = true;
      search.run(0);
      return finish(n, search.count, method, start);
    }
    case OracleMethod::NaiveSubsets: {
      check_ceiling("g (naive)", n, kGNaiveCeiling);
      const auto mask = conflict_masks(n, divisible_pair);
      BigInt count = 0;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
        if (independent(s, mask)) ++count;
      return finish(n, count, method, start);
    }
    default: throw std::invalid_argument("g: unsupported method " + std::string(to_string(method)));
  }
}

OracleResult fq_exact(std::uint64_t n, const PrimeBasis& basis, OracleMethod method) {
  const auto start = Clock::now();
  if (n == 0) throw std::invalid_argument("f_q: n must be positive");
  const std::uint64_t q = basis.q;
  // m*q > 2n  <=>  m > floor(2n / q)
  const std::uint64_t cut = 2 * n / q;
  switch (method) {
    case OracleMethod::ChainBacktracking: {
      check_ceiling("f_q (chain backtracking)", n, kFqChainCeiling);
      OnePerChain search(chains_upto(2 * n));
      search.floor_exclusive = cut;
      search.run(0);
      return finish(n, search.count, method, start);
    }
    case OracleMethod::NaiveSubsets: {
      check_ceiling("f_q (naive)", n, kFqNaiveCeiling);
      std::uint64_t allowed = 0;
      for (std::uint64_t m = cut + 1; m <= 2 * n; ++m) allowed |= std::uint64_t{1} << (m - 1);
      return finish(n, naive_max_primitive(n, allowed), method, start);
    }
    default:
      throw std::invalid_argument("f_q: unsupported method " + std::string(to_string(method)));
  }
}

OracleResult coprime_count_exact(std::uint64_t n, OracleMethod method) {
  const auto start = Clock::now();
  switch (method) {
    case OracleMethod::MaskDP: {
      check_ceiling("coprime (mask DP)", n, kCoprimeMaskCeiling);
      const auto primes = primes_upto(n);
      // Element 1 is coprime to everything and doubles every count.
      std::unordered_map<std::uint64_t, BigInt> ways{{0, 1}};
      for (std::uint64_t x = 2; x <= n; ++x) {
        std::uint64_t used = 0;
        for (std::size_t k = 0; k < primes.size(); ++k)
          if (x % primes[k] == 0) used |= std::uint64_t{1} << k;
        std::vector<std::pair<std::uint64_t, BigInt>> added;
        for (const auto& [mask, count] : ways)
          if ((mask & used) == 0) added.emplace_back(mask | used, count);
        for (auto& [mask, count] : added) ways[mask] += count;
      }
      BigInt total = 0;
      for (const auto& [mask, count] : ways) total += count;
      if (n >= 1) total *= 2;
      return finish(n, total, method, start);
    }
    case OracleMethod::NaiveSubsets: {
      check_ceiling("coprime (naive)", n, kCoprimeNaiveCeiling);
      const auto mask =
          conflict_masks(n, [](std::uint64_t x, std::uint64_t y) { return std::gcd(x, y) != 1; });
      BigInt count = 0;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
        if (independent(s, mask)) ++count;
      return finish(n, count, method, start);
    }
    default:
      throw std::invalid_argument("coprime: unsupported method " + std::string(to_string(method)));
  }
}

std::uint64_t prime_count(std::uint64_t n) { return n < 2 ? 0 : primes_upto(n).size(); }

CoprimeBounds coprime_bound_eval(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("coprime bounds need n >= 2");
  CoprimeBounds b;
  b.n = n;
  b.pi = prime_count(n);
  const Real base = Real(b.pi) * ln2();
  const Real root = sqrt(Real(n));
  b.log_lower = base + root / 2;
  b.log_upper = base + 2 * root;
  b.log_mid = base + root;
  return b;
}

Real coprime_residual(std::uint64_t n, const BigInt& count) {
  if (n == 0) throw std::invalid_argument("coprime residual needs n >= 1");
  return (log_of(count) - Real(prime_count(n)) * ln2()) / sqrt(Real(n));
}

void for_each_max_primitive(std::uint64_t n,
                            const std::function<void(std::span<const std::uint64_t>)>& visit) {
  check_ceiling("f witnesses", n, kFChainCeiling);
  OnePerChain search(chains_upto(2 * n));
  search.visit = &visit;
  search.run(0);
}

}  // namespace primbound
