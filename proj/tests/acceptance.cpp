// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "primbound/antichain.hpp"
#include "primbound/bounds.hpp"
#include "primbound/cache.hpp"
#include "primbound/cli.hpp"
#include "primbound/oracles.hpp"
#include "primbound/report.hpp"

using namespace primbound;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const Real& x, int digits = 12) { return to_significant(x, digits); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

BoundConfig basic_cfg(Target t, Flavor f, std::size_t l, std::uint64_t K) {
  BoundConfig c;
  c.target = t;
  c.flavor = f;
  c.l = l;
  c.K = K;
  return c;
}

BoundConfig improved_cfg(Target t, Flavor f, std::vector<std::uint64_t> Ks) {
  BoundConfig c;
  c.target = t;
  c.flavor = f;
  c.Ks = std::move(Ks);
  return c;
}

BoundReport eval(const BoundConfig& c, unsigned threads) {
  TableStore store({}, TableOptions{threads, kDefaultElementCeiling});
  return evaluate_bound(c, store);
}

Real value(const BoundReport& r) { return exp(r.log_bound); }

const std::vector<std::uint64_t> kAlphaFlagship{1006632960, 1006632960, 50000, 2695, 1000};
const std::vector<std::uint64_t> kBetaFlagship{1048576, 1048576, 960, 196, 98};

// Configs covered by the determinism check, criteria 3 to 6.
std::vector<BoundConfig> determinism_configs() {
  return {basic_cfg(Target::Alpha, Flavor::BasicLower, 2, 1000000),
          basic_cfg(Target::Alpha, Flavor::BasicUpper, 2, 1000000),
          basic_cfg(Target::Beta, Flavor::BasicLower, 2, 1000000),
          basic_cfg(Target::Beta, Flavor::BasicUpper, 2, 1000000),
          improved_cfg(Target::Alpha, Flavor::ImprovedLower, kAlphaFlagship),
          improved_cfg(Target::Alpha, Flavor::ImprovedUpper, kAlphaFlagship),
          improved_cfg(Target::Alpha, Flavor::ImprovedLower, {1u << 20, 1u << 20, 500}),
          improved_cfg(Target::Alpha, Flavor::ImprovedUpper, {1u << 20, 1u << 20, 500}),
          improved_cfg(Target::Beta, Flavor::ImprovedLower, kBetaFlagship),
          improved_cfg(Target::Beta, Flavor::ImprovedUpper, kBetaFlagship)};
}

}  // namespace

int main(int argc, char** argv) {
  unsigned threads_a = 1, threads_b = 8;
  std::vector<int> known;
  CLI::App app{"acceptance criteria"};
  app.add_option("--threads-a", threads_a)->check(CLI::Range(1u, 1024u));
  app.add_option("--threads-b", threads_b)->check(CLI::Range(1u, 1024u));
  app.add_option("--known-failures", known,
                 "criteria whose FAIL is documented and should not set the exit status")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> known_set(known.begin(), known.end());

  // results of criteria 3-6 from the first run, keyed by position in determinism_configs()
  std::vector<nlohmann::ordered_json> first_run;
  auto run = [&](const BoundConfig& c) {
    const auto r = eval(c, threads_a);
    first_run.push_back(without_timing(bound_json(r, 0)));
    return r;
  };

  bool all_ok = true;
  auto criterion = [&](int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = since(t0);
    const bool counted = o.pass || !known_set.count(id);
    if (!o.pass && counted) all_ok = false;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " ("
              << std::fixed << std::setprecision(2) << secs << " s)" << o.detail.str()
              << (!o.pass && !counted ? " [known failure, documented in README]" : "") << std::endl;
  };

  const auto configs = determinism_configs();

  criterion(1, "f(7) = 12, f(8) = 10, chain backtracking = naive for n <= 10, < 10 s", [](Outcome& o) {
    const auto t0 = Clock::now();
    o.require(f_exact(7).value == 12, "f(7) = 12");
    o.require(f_exact(8).value == 10, "f(8) = 10");
    for (std::uint64_t n = 1; n <= 10; ++n)
      o.require(f_exact(n).value == f_exact(n, OracleMethod::NaiveSubsets).value,
                "methods agree at n = " + std::to_string(n));
    const double s = since(t0);
    o.require(s < 10, "runtime");
    o.detail << " f(1..10) =";
    for (std::uint64_t n = 1; n <= 10; ++n) o.detail << ' ' << f_exact(n).value.str();
  });

  criterion(2, "antichain DP = brute force, l <= 3, i <= 60, all kinds, < 2 min", [](Outcome& o) {
    const auto t0 = Clock::now();
    std::size_t cases = 0;
    for (std::size_t l = 0; l <= 3; ++l) {
      const auto basis = first_primes(l);
      for (std::uint64_t i = 1; i <= 60; ++i) {
        const auto lat = generate_lattice(basis, i);
        for (CountKind k : kAllCountKinds) {
          ++cases;
          if (count_antichains(lat, k) != brute_force_count(lat, k, i, 26))
            o.require(false, "l = " + std::to_string(l) + ", i = " + std::to_string(i) + ", " +
                                 std::string(to_string(k)));
        }
      }
    }
    o.require(since(t0) < 120, "runtime");
    o.detail << ' ' << cases << " cases";
  });

  criterion(3, "alpha basic bounds, l = 2, K = 10^6, < 60 s", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const Real lo = value(run(configs[0]));
    const Real hi = value(run(configs[1]));
    o.require(since(t0) < 60, "runtime");
    o.require(lo >= Real("1.31464") && lo < Real("1.31465"), "lower in [1.31464, 1.31465)");
    o.require(hi > Real("1.32156") && hi <= Real("1.32158"), "upper in (1.32156, 1.32158]");
    o.detail << " lower " << fmt(lo) << " upper " << fmt(hi);
  });

  criterion(4, "beta basic bounds, l = 2, K = 10^6", [&](Outcome& o) {
    const Real lo = value(run(configs[2]));
    const Real hi = value(run(configs[3]));
    o.require(lo >= Real("1.55966") && abs(lo - Real("1.55966")) <= Real("1e-5"),
              "lower >= 1.55966 within 1e-5");
    o.require(hi <= Real("1.58852") && abs(hi - Real("1.58852")) <= Real("1e-5"),
              "upper <= 1.58852 within 1e-5");
    o.detail << " lower " << fmt(lo) << " upper " << fmt(hi);
  });

  criterion(5, "alpha improved bounds, S = 5 flagship and S = 3 surrogate", [&](Outcome& o) {
    const Real lo = value(run(configs[4]));
    const Real hi = value(run(configs[5]));
    o.require(lo >= Real("1.3183") && abs(lo - Real("1.3183")) <= Real("5e-5"), "lower >= 1.3183 within 5e-5");
    o.require(hi <= Real("1.31843") && abs(hi - Real("1.31843")) <= Real("5e-5"),
              "upper <= 1.31843 within 5e-5");
    o.detail << " flagship lower " << fmt(lo) << " upper " << fmt(hi);

    const auto t0 = Clock::now();
    const Real slo = value(run(configs[6]));
    const Real shi = value(run(configs[7]));
    const Real basic = value(eval(basic_cfg(Target::Alpha, Flavor::BasicLower, 2, 1u << 20), threads_a));
    o.require(since(t0) < 300, "surrogate runtime");
    o.require(slo >= basic, "surrogate lower >= basic lower (l = 2, K = 2^20)");
    o.require(slo <= shi, "surrogate lower <= upper");
    o.detail << "; surrogate lower " << fmt(slo) << " upper " << fmt(shi) << " basic lower " << fmt(basic);
  });

  criterion(6, "beta improved bounds, S = 5", [&](Outcome& o) {
    const Real lo = value(run(configs[8]));
    const Real hi = value(run(configs[9]));
    o.require(lo >= Real("1.571068") && abs(lo - Real("1.571068")) <= Real("5e-5"),
              "lower >= 1.571068 within 5e-5");
    o.require(hi <= Real("1.574445") && abs(hi - Real("1.574445")) <= Real("5e-5"),
              "upper <= 1.574445 within 5e-5");
    o.detail << " lower " << fmt(lo) << " upper " << fmt(hi);
  });

  criterion(7, "weight identity on 1000 random tuples", [](Outcome& o) {
    std::mt19937_64 rng(20261018);
    const auto primes = first_primes(4).primes;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t S = 1 + rng() % 4;
      std::vector<std::uint64_t> Ks(S);
      for (auto& k : Ks) k = 1 + rng() % 500;
      std::sort(Ks.rbegin(), Ks.rend());
      const std::size_t l = rng() % S;
      const std::uint64_t Kl = l == 0 ? Ks[0] : Ks[l - 1];
      const std::uint64_t i = 1 + rng() % Kl;
      const Target tg = rng() % 2 ? Target::Alpha : Target::Beta;
      if (weight(tg, primes, Ks, l, i) != weight_simplified(tg, primes, Ks, l, i))
        o.require(false, "tuple " + std::to_string(t));
    }
  });

  criterion(8, "monotone refinement on 50 random configs", [&](Outcome& o) {
    // all-antichain tables at l = 4 get expensive past a few hundred, hence the per-level caps
    const std::uint64_t cap[] = {2000, 1200, 500, 150};
    const auto dir = std::filesystem::temp_directory_path() / ("primbound-acceptance-" + std::to_string(::getpid()));
    TableStore store(dir, TableOptions{threads_a, kDefaultElementCeiling});
    auto log_bound = [&](Target tg, Flavor f, const std::vector<std::uint64_t>& Ks) {
      return evaluate_bound(improved_cfg(tg, f, Ks), store).log_bound;
    };
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
      const Target tg = t % 2 ? Target::Beta : Target::Alpha;
      const std::size_t S = 1 + rng() % 4;
      std::vector<std::uint64_t> Ks(S);
      for (std::size_t v = 0; v < S; ++v) Ks[v] = 1 + rng() % cap[v];
      std::sort(Ks.rbegin(), Ks.rend());
      const std::size_t v = rng() % S;
      auto raised = Ks;
      raised[v] += 1 + rng() % (cap[v] / 2);
      if (log_bound(tg, Flavor::ImprovedLower, raised) < log_bound(tg, Flavor::ImprovedLower, Ks))
        o.require(false, "lower decreased, config " + std::to_string(t));
      if (log_bound(tg, Flavor::ImprovedUpper, raised) > log_bound(tg, Flavor::ImprovedUpper, Ks))
        o.require(false, "upper increased, config " + std::to_string(t));
    }
    std::filesystem::remove_all(dir);
  });

  criterion(9, "pairwise coprime counts", [](Outcome& o) {
    for (std::uint64_t n = 1; n <= 20; ++n)
      o.require(coprime_count_exact(n).value == coprime_count_exact(n, OracleMethod::NaiveSubsets).value,
                "mask DP = naive at n = " + std::to_string(n));
    o.require(coprime_count_exact(4).value == 12, "count(4) = 12");
    Real lo_res = 2, hi_res = 0;
    for (std::uint64_t n = 2; n <= 36; ++n) {
      const BigInt c = coprime_count_exact(n).value;
      o.require(c >= BigInt(1) << (prime_count(n) + 1), "count >= 2^(pi+1) at n = " + std::to_string(n));
      if (n >= 9) {
        const Real r = coprime_residual(n, c);
        o.require(r > 0 && r < 2, "residual in (0, 2) at n = " + std::to_string(n));
        lo_res = std::min(lo_res, r);
        hi_res = std::max(hi_res, r);
      }
    }
    o.detail << " residual range [" << fmt(lo_res, 6) << ", " << fmt(hi_res, 6) << "] for 9 <= n <= 36";
  });

  criterion(10, "criteria 3-6 reports identical across runs and thread counts", [&](Outcome& o) {
    if (first_run.size() != configs.size()) {
      o.require(false, "earlier criteria did not produce every report");
      return;
    }
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const auto again = without_timing(bound_json(eval(configs[k], threads_a), 0)).dump();
      const auto other = without_timing(bound_json(eval(configs[k], threads_b), 0)).dump();
      const auto ref = first_run[k].dump();
      if (again != ref) o.require(false, "rerun differs, config " + std::to_string(k));
      if (other != ref) o.require(false, "threads " + std::to_string(threads_b) + " differ, config " + std::to_string(k));
    }
    o.detail << ' ' << configs.size() << " reports, threads " << threads_a << " vs " << threads_b;
  });

  return all_ok ? 0 : 1;
}
