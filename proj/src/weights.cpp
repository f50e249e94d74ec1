#include <algorithm>
#include <stdexcept>

#include "primbound/bounds.hpp"

namespace primbound {

namespace {

Rational prime_ratio(std::uint64_t p) { return Rational(BigInt(p), BigInt(p - 1)); }

Rational inverse_power(std::uint64_t p, unsigned e) {
  BigInt d = 1;
  for (unsigned k = 0; k < e; ++k) d *= p;
  return Rational(BigInt(1), d);
}

void check_weight_args(std::span<const std::uint64_t> primes, std::span<const std::uint64_t> Ks,
                       std::size_t l, std::uint64_t i) {
  if (Ks.empty()) throw std::invalid_argument("weight: empty K vector");
  if (primes.size() < Ks.size()) throw std::invalid_argument("weight: need S primes");
  if (l > Ks.size()) throw std::invalid_argument("weight: level above S");
  if (i == 0) throw std::invalid_argument("weight: index must be positive");
}

// Sum over alpha_v, ..., alpha_S (1-based v) of prod_w I(x * ... > K_w) / p_w^{alpha_w}.
// Once the running product exceeds every remaining K, all indicators hold and
// the rest is a geometric series.
Rational nested_sum(std::span<const std::uint64_t> primes, std::span<const std::uint64_t> Ks,
                    std::size_t v, std::uint64_t x) {
  const std::size_t S = Ks.size();
  if (v > S) return 1;
  const std::uint64_t p = primes[v - 1];
  const std::uint64_t kv = Ks[v - 1];
  const std::uint64_t kmax = *std::max_element(Ks.begin() + (v - 1), Ks.end());

  Rational saturated = 1;  // value of the deeper sums once every indicator holds
  for (std::size_t w = v + 1; w <= S; ++w) saturated *= prime_ratio(primes[w - 1]);

  Rational sum = 0;
  std::uint64_t y = x;
  for (unsigned alpha = 0;; ++alpha) {
    if (y > kmax) {
      sum += inverse_power(p, alpha) * prime_ratio(p) * saturated;
      break;
    }
    if (y > kv) sum += inverse_power(p, alpha) * nested_sum(primes, Ks, v + 1, y);
    y *= p;
  }
  return sum;
}

// Same recursion as nested_sum, but each term carries the surviving part of the
// interval (1/(i+1), 1/i]: cap = min over visited v of P_v / (K_v + 1).
Rational covered_sum(std::span<const std::uint64_t> primes, std::span<const std::uint64_t> Ks,
                     std::size_t v, const BigInt& P, const Rational& cap, std::uint64_t i) {
  const Rational floor_end(BigInt(1), BigInt(i) + 1);
  const std::size_t S = Ks.size();
  if (v > S) return cap > floor_end ? Rational(cap - floor_end) : Rational(0);
  const std::uint64_t p = primes[v - 1];
  const std::uint64_t kv = Ks[v - 1];
  const std::uint64_t kmax = *std::max_element(Ks.begin() + (v - 1), Ks.end());

  Rational saturated = 1;
  for (std::size_t w = v + 1; w <= S; ++w) saturated *= prime_ratio(primes[w - 1]);

  Rational sum = 0;
  BigInt y = P;
  for (unsigned alpha = 0;; ++alpha) {
    if (y * i > kmax) {
      // Every later cap is at least 1/i, so nothing below shrinks the interval.
      if (cap > floor_end) sum += inverse_power(p, alpha) * prime_ratio(p) * saturated * (cap - floor_end);
      break;
    }
    Rational next(y, BigInt(kv) + 1);
    if (cap < next) next = cap;
    if (next > floor_end) sum += inverse_power(p, alpha) * covered_sum(primes, Ks, v + 1, y, next, i);
    y *= p;
  }
  return sum;
}

}  // namespace

bool non_increasing(std::span<const std::uint64_t> Ks) {
  return std::adjacent_find(Ks.begin(), Ks.end(), std::less<>{}) == Ks.end();
}

Rational weight(Target target, std::span<const std::uint64_t> primes,
                std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i) {
  check_weight_args(primes, Ks, l, i);
  const std::size_t S = Ks.size();
  Rational lead = leading_constant(target);
  for (std::size_t j = 0; j < S; ++j) lead *= Rational(BigInt(primes[j] - 1), BigInt(primes[j]));
  lead /= Rational(BigInt(i) * (BigInt(i) + 1));
  return lead * nested_sum(primes, Ks, l + 1, i);
}

Rational bucket_weight(Target target, std::span<const std::uint64_t> primes,
                       std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i) {
  check_weight_args(primes, Ks, l, i);
  Rational lead = leading_constant(target);
  for (std::size_t j = 0; j < Ks.size(); ++j)
    lead *= Rational(BigInt(primes[j] - 1), BigInt(primes[j]));
  return lead * covered_sum(primes, Ks, l + 1, BigInt(1), Rational(BigInt(1), BigInt(i)), i);
}

Rational weight_simplified(Target target, std::span<const std::uint64_t> primes,
                           std::span<const std::uint64_t> Ks, std::size_t l, std::uint64_t i) {
  check_weight_args(primes, Ks, l, i);
  const std::size_t S = Ks.size();
  const std::size_t upto = std::min(l + 1, S);
  Rational w = leading_constant(target);
  for (std::size_t j = 0; j < upto; ++j) w *= Rational(BigInt(primes[j] - 1), BigInt(primes[j]));
  w /= Rational(BigInt(i) * (BigInt(i) + 1));
  if (l == S) return w;

  const std::uint64_t p = primes[l];
  const std::uint64_t k_next = Ks[l];
  unsigned alpha0 = 0;
  for (std::uint64_t y = i; y <= k_next; y *= p) ++alpha0;
  return w * inverse_power(p, alpha0) * prime_ratio(p);
}

std::vector<std::uint64_t> weight_breakpoints(std::span<const std::uint64_t> primes,
                                              std::span<const std::uint64_t> Ks, std::size_t l,
                                              std::uint64_t upto) {
  std::vector<std::uint64_t> cuts{1};
  for (std::size_t v = l + 1; v <= Ks.size(); ++v) {
    PrimeBasis sub;
    sub.primes.assign(primes.begin() + l, primes.begin() + v);
    const std::uint64_t kv = Ks[v - 1];
    // I(i * P > K_v) flips at i = floor(K_v / P) + 1.
    for (std::uint64_t P : smooth_numbers(sub, kv)) {
      const std::uint64_t c = kv / P + 1;
      if (c <= upto) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace primbound
