#include "primbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "primbound/errors.hpp"
#include "primbound/log_accumulator.hpp"

namespace primbound {

std::string_view to_string(Target t) { return t == Target::Alpha ? "alpha" : "beta"; }

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::BasicLower: return "basic-lower";
    case Flavor::BasicUpper: return "basic-upper";
    case Flavor::CrudeUpper: return "crude-upper";
    case Flavor::ImprovedLower: return "improved-lower";
    case Flavor::ImprovedUpper: return "improved-upper";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Lower ? "lower" : "upper"; }

std::optional<Target> parse_target(std::string_view text) {
  if (text == "alpha") return Target::Alpha;
  if (text == "beta") return Target::Beta;
  return std::nullopt;
}

std::optional<Flavor> parse_flavor(std::string_view text) {
  for (Flavor f : {Flavor::BasicLower, Flavor::BasicUpper, Flavor::CrudeUpper,
                   Flavor::ImprovedLower, Flavor::ImprovedUpper})
    if (text == to_string(f)) return f;
  return std::nullopt;
}

void BoundConfig::validate() const {
  if (improved()) {
    if (Ks.empty()) throw std::invalid_argument("improved bounds need a non-empty K vector");
    for (std::uint64_t k : Ks)
      if (k == 0) throw std::invalid_argument("every K_l must be positive");
    if (K0 && *K0 == 0) throw std::invalid_argument("K_0 must be positive");
    if (K0 && target != Target::Beta)
      throw std::invalid_argument("K_0 applies only to beta improved lower bounds");
    return;
  }
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (flavor == Flavor::CrudeUpper && target != Target::Alpha)
    throw std::invalid_argument("crude-upper is defined for alpha only");
  if (target == Target::Alpha && l == 0)
    throw std::invalid_argument("alpha bounds need at least one prime (l >= 1)");
}

Rational leading_constant(Target target) { return target == Target::Alpha ? 2 : 1; }

namespace {

// The largest step of the 12-digit render is still far below the 50-digit working precision.
BoundReport finish(BoundReport report, const LogAccumulator& acc) {
  report.log_bound = acc.value();
  report.log_error_estimate = acc.error_estimate();
  report.bound = to_significant(exp(report.log_bound), 12);
  return report;
}

void check_table(const CountTable& table, const PrimeBasis& basis, CountKind kind,
                 std::uint64_t K) {
  if (table.kind != kind)
    throw std::invalid_argument("expected a " + std::string(to_string(kind)) + " table, got " +
                                std::string(to_string(table.kind)));
  if (!(table.basis == basis))
    throw std::invalid_argument("count table built for a different prime basis");
  if (table.K < K)
    throw std::invalid_argument("count table covers [1, " + std::to_string(table.K) +
                                "], need [1, " + std::to_string(K) + "]");
}

Real log_count(const BigInt& count, const std::string& where) {
  if (count <= 0) throw InvariantViolation("non-positive count in " + where);
  if (count == 1) return Real(0);
  return log_of(count);
}

// sum_{i<=K} log(count_i) * density / (i(i+1)), grouped by table rows.
Real density_product(const CountTable& table, std::uint64_t K, const Rational& density,
                     LogAccumulator& acc) {
  Real step = 0;
  for (const CountRow& row : table.rows) {
    if (row.lo > K) break;
    const std::uint64_t hi = std::min(row.hi, K);
    if (row.count == 1) continue;
    const Real term = log_count(row.count, "count table") *
                      to_real(density * telescoped_weight_sum(row.lo, hi));
    acc.add(term);
    step += term;
  }
  return step;
}

Rational level_density(Target target, const PrimeBasis& basis) {
  return leading_constant(target) * coprime_density(basis.primes, basis.size());
}

CountKind truncated_kind(Target t) {
  return t == Target::Alpha ? CountKind::MaxTruncated : CountKind::AllTruncated;
}
CountKind full_kind(Target t) { return t == Target::Alpha ? CountKind::MaxAll : CountKind::AllAll; }

std::string level_name(const char* symbol, std::size_t l) {
  return std::string(symbol) + "_" + std::to_string(l);
}

}  // namespace

BoundReport basic_lower(Target target, const PrimeBasis& basis, std::uint64_t K,
                        const CountTable& table) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (target == Target::Alpha && basis.size() == 0)
    throw std::invalid_argument("alpha bounds need at least one prime");
  check_table(table, basis, truncated_kind(target), K);

  BoundReport report;
  report.config = {target, Flavor::BasicLower, basis.size(), K, {}, {}, true};
  report.direction = Direction::Lower;
  report.tables.push_back({basis.size(), table.kind, K});
  LogAccumulator acc;
  const Real step = density_product(table, K, level_density(target, basis), acc);
  report.steps.push_back({"c'_{l,K}", step});
  return finish(std::move(report), acc);
}

Rational eta_leading(Target target, const PrimeBasis& basis, bool truncated) {
  const Rational c = leading_constant(target);
  return truncated ? c - c / Rational(BigInt(basis.q)) : c;
}

Rational eta(Target target, const PrimeBasis& basis, std::uint64_t K, bool truncated) {
  const Rational density = level_density(target, basis);
  Rational covered = 0;
  for (const Segment& seg : breakpoints(basis, K).segments) {
    std::uint64_t size = smooth_count(basis, seg.lo);
    if (truncated) size -= smooth_count(basis, seg.lo / basis.q);
    if (size == 0) continue;
    covered += Rational(BigInt(size)) * telescoped_weight_sum(seg.lo, seg.hi);
  }
  return eta_leading(target, basis, truncated) - density * covered;
}

Real eta_tail_majorant(Target target, std::size_t l, std::uint64_t K, std::uint64_t terms) {
  const Real c = to_real(leading_constant(target));
  const Real inv_ln2 = 1 / ln2();
  std::uint64_t N = K + terms;
  // (1 + log2 x)^l / x^2 decreases once 1 + log2 x > l / (2 ln 2).
  while (1 + std::log2(static_cast<double>(N)) <= 0.75 * static_cast<double>(l) + 1) N *= 2;

  Real sum = 0;
  for (std::uint64_t i = K + 1; i <= N; ++i) {
    const Real x = i;
    sum += c * pow(1 + log(x) * inv_ln2, static_cast<int>(l)) / (x * (x + 1));
  }
  // int_{ln N}^inf (1 + t/ln2)^l e^{-t} dt = e^{-T} sum_k l!/(l-k)! (1/ln2)^k (1 + T/ln2)^{l-k}
  const Real T = log(Real(N));
  Real tail = 0;
  Real falling = 1;
  for (std::size_t k = 0; k <= l; ++k) {
    tail += falling * pow(inv_ln2, static_cast<int>(k)) *
            pow(1 + T * inv_ln2, static_cast<int>(l - k));
    falling *= static_cast<int>(l - k);
  }
  return sum + c * exp(-T) * tail;
}

BoundReport basic_upper(Target target, const PrimeBasis& basis, std::uint64_t K,
                        const CountTable& table) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (target == Target::Alpha && basis.size() == 0)
    throw std::invalid_argument("alpha bounds need at least one prime");
  check_table(table, basis, full_kind(target), K);

  BoundReport report;
  report.config = {target, Flavor::BasicUpper, basis.size(), K, {}, {}, true};
  report.direction = Direction::Upper;
  report.tables.push_back({basis.size(), table.kind, K});
  LogAccumulator acc;
  const Real step = density_product(table, K, level_density(target, basis), acc);
  report.steps.push_back({"c_{l,K}", step});
  const Real eta_term = to_real(eta(target, basis, K, false)) * ln2();
  acc.add(eta_term);
  report.steps.push_back({"eta_{l,K} log 2", eta_term});
  return finish(std::move(report), acc);
}

BoundReport crude_upper_alpha(const PrimeBasis& basis, std::uint64_t K, const CountTable& table) {
  if (K == 0) throw std::invalid_argument("K must be positive");
  if (basis.size() == 0) throw std::invalid_argument("alpha bounds need at least one prime");
  check_table(table, basis, CountKind::MaxTruncated, K);

  BoundReport report;
  report.config = {Target::Alpha, Flavor::CrudeUpper, basis.size(), K, {}, {}, true};
  report.direction = Direction::Upper;
  report.tables.push_back({basis.size(), table.kind, K});
  LogAccumulator acc;
  const Real step = density_product(table, K, level_density(Target::Alpha, basis), acc);
  report.steps.push_back({"c'_{l,K}", step});
  const Real eta_term = to_real(eta(Target::Alpha, basis, K, true)) * ln2();
  acc.add(eta_term);
  report.steps.push_back({"eta'_{l,K} log 2", eta_term});

  unsigned s = 0;  // floor(log2 q)
  while ((std::uint64_t{2} << s) <= basis.q) ++s;
  const Real chain_term =
      to_real(Rational(BigInt(s + 2), BigInt(1) << s)) * ln2();
  acc.add(chain_term);
  report.steps.push_back({"(s+2)/2^s log 2", chain_term});
  return finish(std::move(report), acc);
}

EpsilonSchedule epsilon_schedule(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  EpsilonSchedule out;
  const double l_real = 10.0 * std::log(1.0 / eps) / eps;
  out.l = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(l_real)));
  const double l = static_cast<double>(out.l);
  // l <= 2 gives log log l <= 0, so K(l) <= 1.
  if (out.l <= 2) {
    out.K = 1;
    out.log10_K = 0;
    return out;
  }
  const double exponent = 10.0 * l * std::log(std::log(l));
  out.log10_K = exponent * std::log10(l);
  if (out.log10_K >= std::log10(static_cast<double>(std::numeric_limits<std::uint64_t>::max()))) {
    out.K.reset();
  } else {
    out.K = static_cast<std::uint64_t>(std::ceil(std::pow(l, exponent)));
  }
  return out;
}

BoundReport improved_lower(Target target, std::span<const std::uint64_t> Ks,
                           const LevelTables& tables, std::optional<std::uint64_t> K0,
                           bool include_step0, bool indicator_weights) {
  BoundConfig config{target, Flavor::ImprovedLower, 0, 1, {Ks.begin(), Ks.end()},
                     K0, include_step0, indicator_weights};
  config.validate();
  const std::size_t S = Ks.size();
  const PrimeBasis top = first_primes(S);
  const CountKind kind = truncated_kind(target);
  const bool general = !non_increasing(Ks);

  BoundReport report;
  report.config = config;
  report.direction = Direction::Lower;
  report.general_weights = general;

  const std::size_t lowest = (target == Target::Beta && include_step0) ? 0 : 1;
  LogAccumulator acc;
  for (std::size_t l = S + 1; l-- > lowest;) {
    const std::uint64_t Kl = l >= 1 ? Ks[l - 1] : K0.value_or(Ks[0]);
    auto it = tables.find(l);
    if (it == tables.end())
      throw std::invalid_argument("missing " + std::string(to_string(kind)) + " table for l = " +
                                  std::to_string(l));
    const CountTable& table = it->second;
    check_table(table, first_primes(l), kind, Kl);
    report.tables.push_back({l, kind, Kl});

    std::vector<std::uint64_t> cuts = weight_breakpoints(top.primes, Ks, l, Kl);
    if (!indicator_weights) {
      // A partially covered interval sits just below an indicator flip; isolate it.
      const std::size_t flips = cuts.size();
      for (std::size_t c = 0; c < flips; ++c)
        if (cuts[c] > 1) cuts.push_back(cuts[c] - 1);
    }
    for (const CountRow& row : table.rows)
      if (row.lo <= Kl) cuts.push_back(row.lo);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Real step = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const std::uint64_t a = cuts[c];
      const std::uint64_t b = c + 1 < cuts.size() ? cuts[c + 1] - 1 : Kl;
      const BigInt& count = table.at(a);
      if (count == 1) continue;
      const Rational w = !indicator_weights ? bucket_weight(target, top.primes, Ks, l, a)
                         : general          ? weight(target, top.primes, Ks, l, a)
                                            : weight_simplified(target, top.primes, Ks, l, a);
      if (w == 0) continue;
      // w(l, i) * i(i+1) is constant on [a, b].
      const Rational numerator = w * Rational(BigInt(a) * (BigInt(a) + 1));
      const Real term = log_count(count, level_name("lambda", l)) *
                        to_real(numerator * telescoped_weight_sum(a, b));
      acc.add(term);
      step += term;
    }
    report.steps.push_back({level_name("lambda", l), step});
  }
  return finish(std::move(report), acc);
}

BoundReport improved_upper(Target target, std::span<const std::uint64_t> Ks,
                           const LevelTables& tables) {
  BoundConfig config{target, Flavor::ImprovedUpper, 0, 1, {Ks.begin(), Ks.end()}, {}, true};
  config.validate();
  const std::size_t S = Ks.size();
  const PrimeBasis top = first_primes(S);
  const CountKind kind = full_kind(target);

  BoundReport report;
  report.config = config;
  report.direction = Direction::Upper;

  auto table_for = [&](std::size_t l, std::uint64_t K) -> const CountTable& {
    auto it = tables.find(l);
    if (it == tables.end())
      throw std::invalid_argument("missing " + std::string(to_string(kind)) + " table for l = " +
                                  std::to_string(l));
    check_table(it->second, first_primes(l), kind, K);
    return it->second;
  };

  LogAccumulator acc;
  const Real start = target == Target::Alpha ? 2 * ln2() : ln2();
  acc.add(start);
  report.steps.push_back({target == Target::Alpha ? "log 4" : "log 2", start});

  std::size_t first_merge = 1;
  if (target == Target::Alpha) {
    // Chains C(t) for odd t: singletons become chains of |M_1(i)| elements.
    const std::uint64_t K1 = Ks[0];
    const CountTable& t1 = table_for(1, K1);
    const PrimeBasis b1 = first_primes(1);
    Real step = 0;
    for (const CountRow& row : t1.rows) {
      if (row.lo > K1) break;
      const std::uint64_t a = std::max<std::uint64_t>(row.lo, kAlphaChainStart);
      const std::uint64_t b = std::min(row.hi, K1);
      if (a > b) continue;
      const std::uint64_t size = smooth_count(b1, a);
      const Real term = (log_count(row.count, "r_1") - Real(size) * ln2()) *
                        to_real(telescoped_weight_sum(a, b));
      acc.add(term);
      step += term;
    }
    report.steps.push_back({"chains (l = 1)", step});
    first_merge = 2;
  }

  for (std::size_t l = first_merge; l <= S; ++l) {
    const std::uint64_t Kl = Ks[l - 1];
    const std::uint64_t p = top.primes[l - 1];
    const CountTable& here = table_for(l, Kl);
    const CountTable& below = table_for(l - 1, Kl);

    Real step = 0;
    if (p <= Kl) {
      std::vector<std::uint64_t> cuts{p};
      for (const CountRow& row : here.rows) {
        if (row.lo > p && row.lo <= Kl) cuts.push_back(row.lo);
        if (row.lo > 1 && row.lo <= Kl / p) cuts.push_back(row.lo * p);
      }
      for (const CountRow& row : below.rows)
        if (row.lo > p && row.lo <= Kl) cuts.push_back(row.lo);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      const Rational coef = leading_constant(target) * coprime_density(top.primes, l - 1);
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        const std::uint64_t a = cuts[c];
        const std::uint64_t b = c + 1 < cuts.size() ? cuts[c + 1] - 1 : Kl;
        const BigInt& merged = here.at(a);
        const BigInt parts = below.at(a) * here.at(a / p);
        if (merged > parts)
          throw InvariantViolation("merge ratio above one at l = " + std::to_string(l) +
                                   ", i = " + std::to_string(a));
        if (merged == parts) continue;
        const std::string where = level_name("merge", l);
        const Real term = (log_count(merged, where) - log_count(parts, where)) *
                          to_real(coef * telescoped_weight_sum(a, b));
        acc.add(term);
        step += term;
      }
    }
    report.steps.push_back({level_name("merge", l), step});
  }
  report.tables = required_tables(config);
  return finish(std::move(report), acc);
}

std::vector<TableUse> required_tables(const BoundConfig& config) {
  config.validate();
  const CountKind trunc = truncated_kind(config.target);
  const CountKind full = full_kind(config.target);
  std::vector<TableUse> out;
  switch (config.flavor) {
    case Flavor::BasicLower:
    case Flavor::CrudeUpper:
      out.push_back({config.l, trunc, config.K});
      break;
    case Flavor::BasicUpper:
      out.push_back({config.l, full, config.K});
      break;
    case Flavor::ImprovedLower:
      if (config.target == Target::Beta && config.include_step0)
        out.push_back({0, trunc, config.K0.value_or(config.Ks[0])});
      for (std::size_t l = 1; l <= config.S(); ++l) out.push_back({l, trunc, config.Ks[l - 1]});
      break;
    case Flavor::ImprovedUpper:
      if (config.target == Target::Beta) out.push_back({0, full, config.Ks[0]});
      for (std::size_t l = 1; l <= config.S(); ++l) {
        std::uint64_t need = config.Ks[l - 1];
        if (l < config.S()) need = std::max(need, config.Ks[l]);
        out.push_back({l, full, need});
      }
      break;
  }
  return out;
}

}  // namespace primbound
