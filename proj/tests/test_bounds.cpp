#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primbound/bounds.hpp"
#include "primbound/errors.hpp"
#include "primbound/log_accumulator.hpp"

using namespace primbound;

namespace {

Real L(double x) { return log(Real(x)); }

bool close(const Real& a, const Real& b, double tol) { return abs(a - b) <= Real(tol); }

LevelTables tables_for(const BoundConfig& c) {
  LevelTables t;
  for (const TableUse& u : required_tables(c)) t[u.l] = build_table(first_primes(u.l), u.kind, u.K);
  return t;
}

BoundReport lower(Target tg, std::vector<std::uint64_t> Ks) {
  BoundConfig c{tg, Flavor::ImprovedLower, 0, 1, Ks};
  return improved_lower(tg, Ks, tables_for(c));
}

BoundReport upper(Target tg, std::vector<std::uint64_t> Ks) {
  BoundConfig c{tg, Flavor::ImprovedUpper, 0, 1, Ks};
  return improved_upper(tg, Ks, tables_for(c));
}

Real basic(Target tg, Flavor f, std::size_t l, std::uint64_t K) {
  const auto b = first_primes(l);
  const bool trunc = f != Flavor::BasicUpper;
  const CountKind kind = tg == Target::Alpha ? (trunc ? CountKind::MaxTruncated : CountKind::MaxAll)
                                             : (trunc ? CountKind::AllTruncated : CountKind::AllAll);
  const auto t = build_table(b, kind, K);
  if (f == Flavor::BasicLower) return basic_lower(tg, b, K, t).log_bound;
  if (f == Flavor::BasicUpper) return basic_upper(tg, b, K, t).log_bound;
  return crude_upper_alpha(b, K, t).log_bound;
}

}  // namespace

TEST_CASE("names round trip") {
  for (Target t : {Target::Alpha, Target::Beta}) CHECK(parse_target(to_string(t)) == t);
  for (Flavor f : {Flavor::BasicLower, Flavor::BasicUpper, Flavor::CrudeUpper, Flavor::ImprovedLower,
                   Flavor::ImprovedUpper})
    CHECK(parse_flavor(to_string(f)) == f);
}

TEST_CASE("log accumulator") {
  LogAccumulator a;
  a.add(Real(1));
  for (int k = 0; k < 1000; ++k) a.add(Real("1e-40"));
  a.add(Real(-1));
  CHECK(close(a.value(), Real("1e-37"), 1e-45));
  CHECK(a.term_count() == 1002);
  CHECK(a.error_estimate() > 0);
}

TEST_CASE("basic lower, alpha, l = 1, K = 2") {
  const auto b = first_primes(1);
  const auto r = basic_lower(Target::Alpha, b, 2, build_table(b, CountKind::MaxTruncated, 2));
  CHECK(close(r.log_bound, L(2) / 6, 1e-40));
  CHECK(r.bound.substr(0, 8) == "1.122462");
  CHECK(r.direction == Direction::Lower);
}

TEST_CASE("basic bounds, l = 2, K = 10^6") {
  CHECK(exp(basic(Target::Alpha, Flavor::BasicLower, 2, 1000000)) >= Real("1.31464"));
  CHECK(exp(basic(Target::Alpha, Flavor::BasicUpper, 2, 1000000)) <= Real("1.32157"));
  CHECK(exp(basic(Target::Beta, Flavor::BasicLower, 2, 1000000)) >= Real("1.55966"));
  CHECK(exp(basic(Target::Beta, Flavor::BasicUpper, 2, 1000000)) <= Real("1.58852"));
}

TEST_CASE("table checks") {
  const auto b = first_primes(2);
  const auto t = build_table(b, CountKind::MaxAll, 100);
  CHECK_THROWS_AS(basic_lower(Target::Alpha, b, 100, t), std::invalid_argument);
  CHECK_THROWS_AS(basic_upper(Target::Alpha, b, 101, t), std::invalid_argument);
  CHECK_THROWS_AS(basic_upper(Target::Alpha, first_primes(1), 100, t), std::invalid_argument);
}

TEST_CASE("eta") {
  CHECK(eta_leading(Target::Alpha, first_primes(0), true) == 1);
  CHECK(eta_leading(Target::Alpha, first_primes(2), true) == Rational(8, 5));
  CHECK(eta_leading(Target::Beta, first_primes(2), false) == 1);

  const auto b = first_primes(2);
  Rational direct = 2;
  for (std::uint64_t i = 1; i <= 10; ++i)
    direct -= Rational(2, 3) * Rational(BigInt(smooth_count(b, i)), BigInt(i) * (i + 1));
  CHECK(close(to_real(eta(Target::Alpha, b, 10, false)), to_real(direct), 1e-12));

  for (std::size_t l = 1; l <= 3; ++l) {
    Rational prev = eta(Target::Alpha, first_primes(l), 1, false);
    for (std::uint64_t K = 2; K <= 300; ++K) {
      const Rational e = eta(Target::Alpha, first_primes(l), K, false);
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("eta' is below the tail majorant") {
  for (std::size_t l = 1; l <= 4; ++l)
    for (std::uint64_t K : {10ull, 1000ull, 100000ull})
      CHECK(to_real(eta(Target::Alpha, first_primes(l), K, true)) <=
            eta_tail_majorant(Target::Alpha, l, K, 20000));
}

TEST_CASE("crude upper chain factor") {
  for (std::size_t l : {2, 5}) {
    const auto b = first_primes(l);
    const auto r = crude_upper_alpha(b, 50, build_table(b, CountKind::MaxTruncated, 50));
    REQUIRE(r.steps.size() == 3);
    const Real want = l == 2 ? L(2) : Real(5) / 8 * L(2);
    CHECK(close(r.steps[2].log_contribution, want, 1e-40));
    CHECK(r.log_bound >= basic(Target::Alpha, Flavor::BasicLower, l, 50));
  }
  CHECK(exp(basic(Target::Alpha, Flavor::CrudeUpper, 2, 1000000)) > Real("1.32157"));
}

TEST_CASE("sandwich, basic flavors") {
  for (Target tg : {Target::Alpha, Target::Beta})
    for (std::size_t l = 1; l <= 3; ++l)
      for (std::uint64_t K : {1ull, 5ull, 100ull, 5000ull})
        CHECK(basic(tg, Flavor::BasicLower, l, K) <= basic(tg, Flavor::BasicUpper, l, K));
}

TEST_CASE("epsilon schedule") {
  CHECK(epsilon_schedule(0.5).l == 14);
  CHECK(epsilon_schedule(0.5).overflow());
  CHECK(epsilon_schedule(0.9).K.has_value());
  CHECK(epsilon_schedule(0.999).l <= 1);
  CHECK(epsilon_schedule(0.999).K == 1u);
  CHECK(epsilon_schedule(1e-3).overflow());
  CHECK_THROWS_AS(epsilon_schedule(0.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_schedule(1.0), std::invalid_argument);
}

TEST_CASE("weights") {
  const auto primes = first_primes(5).primes;
  const std::vector<std::uint64_t> Ks2{10, 3};
  CHECK(weight(Target::Alpha, primes, Ks2, 1, 2) == Rational(1, 18));
  CHECK(weight_simplified(Target::Alpha, primes, Ks2, 1, 2) == Rational(1, 18));
  CHECK(weight(Target::Beta, primes, Ks2, 1, 2) == Rational(1, 36));

  // i above every later K: w = c prod_{j<=l} (1 - 1/p_j) / (i(i+1))
  const std::vector<std::uint64_t> Ks4{400, 300, 200, 100};
  for (std::size_t l = 1; l < 4; ++l) {
    const std::uint64_t i = 350;
    const Rational want = 2 * coprime_density(primes, l) / Rational(BigInt(i) * (i + 1));
    CHECK(weight(Target::Alpha, primes, Ks4, l, i) == want);
    CHECK(bucket_weight(Target::Alpha, primes, Ks4, l, i) == want);
  }
  CHECK_THROWS_AS(weight(Target::Alpha, primes, Ks4, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(weight(Target::Alpha, primes, Ks4, 1, 0), std::invalid_argument);
}

TEST_CASE("weight identity for non-increasing K") {
  std::mt19937_64 rng(99);
  const auto primes = first_primes(4).primes;
  for (int t = 0; t < 400; ++t) {
    const std::size_t S = 1 + rng() % 4;
    std::vector<std::uint64_t> Ks(S);
    for (auto& k : Ks) k = 1 + rng() % 500;
    std::sort(Ks.rbegin(), Ks.rend());
    const std::size_t l = rng() % S;
    const std::uint64_t Kl = l == 0 ? Ks[0] : Ks[l - 1];
    for (std::uint64_t i = 1; i <= std::min<std::uint64_t>(Kl, 200); i += 1 + rng() % 9)
      REQUIRE(weight(Target::Alpha, primes, Ks, l, i) == weight_simplified(Target::Alpha, primes, Ks, l, i));
  }
}

TEST_CASE("exact interval weights dominate indicator weights") {
  std::mt19937_64 rng(5);
  const auto primes = first_primes(4).primes;
  int partial = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t S = 2 + rng() % 3;
    std::vector<std::uint64_t> Ks(S);
    for (auto& k : Ks) k = 1 + rng() % 300;
    if (t % 2 == 0) std::sort(Ks.rbegin(), Ks.rend());
    const std::size_t l = rng() % S;
    for (std::uint64_t i = 1; i <= 300; ++i) {
      const Rational w = weight(Target::Beta, primes, Ks, l, i);
      const Rational b = bucket_weight(Target::Beta, primes, Ks, l, i);
      REQUIRE(b >= w);
      REQUIRE(b <= coprime_density(primes, l) / Rational(BigInt(i) * (i + 1)));
      if (b != w) ++partial;
    }
  }
  CHECK(partial > 0);

  // S = 2, l = 1, K_2 = 10, i = 3: t/3 <= N/11 covers t <= 3N/11 of (N/4, N/3]
  const std::vector<std::uint64_t> Ks{20, 10};
  const Rational covered = Rational(3, 11) - Rational(1, 4);
  const Rational want = Rational(1, 2) * Rational(2, 3) *
                        (covered / 3 + Rational(1, 9) * Rational(3, 2) * Rational(1, 12));
  CHECK(bucket_weight(Target::Beta, primes, Ks, 1, 3) == want);
}

TEST_CASE("improved lower with S = 1 equals basic lower") {
  for (std::uint64_t K : {1ull, 7ull, 1000ull, 100000ull}) {
    const Real a = lower(Target::Alpha, {K}).log_bound;
    CHECK(close(a, basic(Target::Alpha, Flavor::BasicLower, 1, K), 1e-12));
  }
}

TEST_CASE("improved upper beta S = 1, K_1 = 4") {
  const Real want = L(2) + log(Real(3) / 4) / 6 + log(Real(3) / 4) / 12 + log(Real(4) / 6) / 20;
  CHECK(close(upper(Target::Beta, {4}).log_bound, want, 1e-40));
}

TEST_CASE("improved upper alpha S = 1 is the chain product") {
  Real want = 2 * L(2);
  const auto b = first_primes(1);
  for (std::uint64_t i = 1; i <= 6; ++i) {
    const std::uint64_t m = smooth_count(b, i);
    want += (log(Real(m)) - Real(m) * L(2)) / Real(i * (i + 1));
  }
  CHECK(close(upper(Target::Alpha, {6}).log_bound, want, 1e-40));
}

TEST_CASE("improved bounds are sandwiched") {
  for (Target tg : {Target::Alpha, Target::Beta})
    for (const auto& Ks : std::vector<std::vector<std::uint64_t>>{
             {100}, {1000, 300}, {4096, 4096, 200}, {20000, 5000, 300, 60}})
      CHECK(lower(tg, Ks).log_bound <= upper(tg, Ks).log_bound);
}

TEST_CASE("improved beta flagship") {
  const std::vector<std::uint64_t> Ks{1048576, 1048576, 960, 196, 98};
  const Real lo = exp(lower(Target::Beta, Ks).log_bound);
  const Real hi = exp(upper(Target::Beta, Ks).log_bound);
  CHECK(lo >= Real("1.571068"));
  CHECK(hi <= Real("1.574445"));
  CHECK(lo <= hi);
}

TEST_CASE("general weights are flagged for increasing K") {
  const auto r = lower(Target::Beta, {100, 200});
  CHECK(r.general_weights);
  CHECK_FALSE(lower(Target::Beta, {200, 100}).general_weights);
}

TEST_CASE("missing tables and bad configs") {
  LevelTables none;
  const std::vector<std::uint64_t> Ks{10, 5};
  CHECK_THROWS_AS(improved_lower(Target::Alpha, Ks, none), std::invalid_argument);
  CHECK_THROWS_AS(improved_upper(Target::Alpha, Ks, none), std::invalid_argument);
  CHECK_THROWS_AS(improved_upper(Target::Alpha, std::vector<std::uint64_t>{}, none), std::invalid_argument);
  BoundConfig c{Target::Alpha, Flavor::BasicLower, 0, 10};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  BoundConfig d{Target::Beta, Flavor::CrudeUpper, 2, 10};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("a merge ratio above one is an invariant violation") {
  const std::vector<std::uint64_t> Ks{50, 20};
  BoundConfig c{Target::Beta, Flavor::ImprovedUpper, 0, 1, Ks};
  LevelTables t = tables_for(c);
  for (auto& row : t[2].rows)
    if (row.lo >= 10) row.count *= 1000;
  CHECK_THROWS_AS(improved_upper(Target::Beta, Ks, t), InvariantViolation);
}

TEST_CASE("monotone refinement on small configs") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 12; ++t) {
    const Target tg = t % 2 ? Target::Beta : Target::Alpha;
    const std::size_t S = 1 + rng() % 3;
    std::vector<std::uint64_t> Ks(S);
    for (auto& k : Ks) k = 1 + rng() % 400;
    std::sort(Ks.rbegin(), Ks.rend());
    const std::size_t v = rng() % S;
    auto raised = Ks;
    raised[v] += 1 + rng() % 200;
    if (v > 0) raised[v] = std::min(raised[v], raised[v - 1]);
    CHECK(lower(tg, raised).log_bound >= lower(tg, Ks).log_bound);
    CHECK(upper(tg, raised).log_bound <= upper(tg, Ks).log_bound);
  }
}
