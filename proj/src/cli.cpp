#include "primbound/cli.hpp"

#include <chrono>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primbound/errors.hpp"
#include "primbound/oracles.hpp"
#include "primbound/report.hpp"

namespace primbound {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CountKind truncated_for(Target t) {
  return t == Target::Alpha ? CountKind::MaxTruncated : CountKind::AllTruncated;
}
CountKind full_for(Target t) { return t == Target::Alpha ? CountKind::MaxAll : CountKind::AllAll; }

struct BoundArgs {
  std::string target, flavor, format = "json";
  std::size_t l = 2;
  std::optional<std::uint64_t> K, K0;
  std::optional<std::size_t> S;
  std::vector<std::uint64_t> Ks;
  bool no_step0 = false, indicator = false;
  unsigned threads = 1;
  std::size_t max_elements = kDefaultElementCeiling;
  std::optional<std::string> cache_dir;
};

struct OracleArgs {
  std::string quantity, method, format = "json";
  std::uint64_t n = 0;
  std::size_t l = 2;
};

struct TableArgs {
  std::size_t l = 0;
  std::string kind, out;
  std::uint64_t K = 0;
  unsigned threads = 1;
  std::size_t max_elements = kDefaultElementCeiling;
};

BoundConfig make_config(const BoundArgs& a) {
  BoundConfig c;
  const auto target = parse_target(a.target);
  if (!target) throw std::invalid_argument("unknown target '" + a.target + "'");
  const auto flavor = parse_flavor(a.flavor);
  if (!flavor) throw std::invalid_argument("unknown flavor '" + a.flavor + "'");
  c.target = *target;
  c.flavor = *flavor;
  if (c.improved()) {
    if (a.Ks.empty()) throw std::invalid_argument("improved flavors need --Ks");
    if (a.S && *a.S != a.Ks.size())
      throw std::invalid_argument("--S " + std::to_string(*a.S) + " but --Ks has " +
                                  std::to_string(a.Ks.size()) + " entries");
    c.Ks = a.Ks;
    c.K0 = a.K0;
    c.include_step0 = !a.no_step0;
    c.indicator_weights = a.indicator;
  } else {
    if (!a.K) throw std::invalid_argument("basic flavors need --K");
    if (!a.Ks.empty()) throw std::invalid_argument("--Ks applies to improved flavors only");
    c.l = a.l;
    c.K = *a.K;
  }
  c.validate();
  return c;
}

OracleMethod parse_method(const std::string& text, std::string_view quantity) {
  if (text.empty()) return quantity == "coprime" ? OracleMethod::MaskDP : OracleMethod::ChainBacktracking;
  if (text == "chain") return OracleMethod::ChainBacktracking;
  if (text == "naive") return OracleMethod::NaiveSubsets;
  if (text == "mask") return OracleMethod::MaskDP;
  throw std::invalid_argument("unknown method '" + text + "'");
}

int do_bound(const BoundArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const BoundConfig config = make_config(a);
  std::optional<std::filesystem::path> dir;
  if (a.cache_dir) dir = std::filesystem::path(*a.cache_dir);
  else dir = TableStore::default_directory();
  TableStore store(dir, TableOptions{a.threads, a.max_elements});
  const BoundReport report = evaluate_bound(config, store);
  const double wall = seconds_since(start);
  if (a.format == "text") out << bound_text(report, wall);
  else out << bound_json(report, wall).dump(2) << '\n';
  return kExitOk;
}

int do_oracle(const OracleArgs& a, std::ostream& out) {
  const OracleMethod method = parse_method(a.method, a.quantity);
  OracleResult result;
  std::optional<std::size_t> l;
  if (a.quantity == "f") result = f_exact(a.n, method);
  else if (a.quantity == "g") result = g_exact(a.n, method);
  else if (a.quantity == "fq") {
    l = a.l;
    result = fq_exact(a.n, first_primes(a.l), method);
  } else if (a.quantity == "coprime") result = coprime_count_exact(a.n, method);
  else throw std::invalid_argument("unknown oracle '" + a.quantity + "'");
  if (a.format == "text") out << oracle_text(a.quantity, result);
  else out << oracle_json(a.quantity, result, l).dump(2) << '\n';
  return kExitOk;
}

int do_table(const TableArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const auto kind = parse_count_kind(a.kind);
  if (!kind) throw std::invalid_argument("unknown count kind '" + a.kind + "'");
  if (a.K == 0) throw std::invalid_argument("--K must be positive");
  const CountTable table =
      build_table(first_primes(a.l), *kind, a.K, TableOptions{a.threads, a.max_elements});
  cache_store(a.out, table);
  out << table_json(table, seconds_since(start)).dump(2) << '\n';
  return kExitOk;
}

// verify suites

struct Suite {
  explicit Suite(std::string n) : name(std::move(n)) {}
  std::string name;
  bool ok = true;
  std::string detail;
};

void report_suite(std::ostream& out, const Suite& s) {
  out << (s.ok ? "PASS " : "FAIL ") << s.name;
  if (!s.detail.empty()) out << "  (" << s.detail << ')';
  out << '\n';
}

Suite suite_antichains() {
  Suite s("antichain DP = brute force, l <= 3, i <= 40, all kinds");
  std::size_t checked = 0;
  for (std::size_t l = 0; l <= 3; ++l)
    for (std::uint64_t i = 1; i <= 40; ++i) {
      const SmoothLattice lat = generate_lattice(first_primes(l), i);
      for (CountKind kind : kAllCountKinds) {
        ++checked;
        if (count_antichains(lat, kind) != brute_force_count(lat, kind, i)) {
          s.ok = false;
          s.detail = "mismatch at l=" + std::to_string(l) + " i=" + std::to_string(i) + " " +
                     std::string(to_string(kind));
          return s;
        }
      }
    }
  s.detail = std::to_string(checked) + " cases";
  return s;
}

template <class F>
Suite suite_dual(std::string name, std::uint64_t upto, F compare) {
  Suite s(std::move(name));
  for (std::uint64_t n = 1; n <= upto; ++n)
    if (!compare(n)) {
      s.ok = false;
      s.detail = "mismatch at n=" + std::to_string(n);
      return s;
    }
  return s;
}

Suite suite_weights() {
  Suite s("general weight = simplified weight, 200 random tuples");
  std::mt19937_64 rng(20240607);
  for (int t = 0; t < 200; ++t) {
    const std::size_t S = 1 + rng() % 4;
    std::vector<std::uint64_t> Ks(S);
    for (auto& k : Ks) k = 1 + rng() % 500;
    std::sort(Ks.rbegin(), Ks.rend());
    const std::size_t l = rng() % S;
    const std::uint64_t Kl = l == 0 ? Ks[0] : Ks[l - 1];
    const std::uint64_t i = 1 + rng() % Kl;
    const auto primes = first_primes(S).primes;
    for (Target tg : {Target::Alpha, Target::Beta})
      if (weight(tg, primes, Ks, l, i) != weight_simplified(tg, primes, Ks, l, i)) {
        s.ok = false;
        s.detail = "S=" + std::to_string(S) + " l=" + std::to_string(l) + " i=" + std::to_string(i);
        return s;
      }
  }
  return s;
}

Suite suite_cache(unsigned threads) {
  Suite s("cache round trip, l <= 3, all kinds, K = 300");
  const auto dir = std::filesystem::temp_directory_path() /
                   ("primbound-verify-" + std::to_string(Clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(dir);
  for (std::size_t l = 0; l <= 3 && s.ok; ++l)
    for (CountKind kind : kAllCountKinds) {
      const CountTable t = build_table(first_primes(l), kind, 300, TableOptions{threads});
      const auto path = dir / "t.tbl";
      cache_store(path, t);
      if (!(cache_load(path, t.basis, kind) == t)) {
        s.ok = false;
        s.detail = "l=" + std::to_string(l) + " " + std::string(to_string(kind));
        break;
      }
    }
  std::filesystem::remove_all(dir);
  return s;
}

}  // namespace

BoundReport evaluate_bound(const BoundConfig& config, TableStore& store) {
  config.validate();
  if (!config.improved()) {
    const PrimeBasis basis = first_primes(config.l);
    switch (config.flavor) {
      case Flavor::BasicLower:
        return basic_lower(config.target, basis, config.K,
                           store.get(basis, truncated_for(config.target), config.K));
      case Flavor::BasicUpper:
        return basic_upper(config.target, basis, config.K,
                           store.get(basis, full_for(config.target), config.K));
      case Flavor::CrudeUpper:
        return crude_upper_alpha(basis, config.K, store.get(basis, CountKind::MaxTruncated, config.K));
      default: break;
    }
  }
  LevelTables tables;
  for (const TableUse& use : required_tables(config))
    tables[use.l] = store.get(first_primes(use.l), use.kind, use.K);
  if (config.flavor == Flavor::ImprovedLower)
    return improved_lower(config.target, config.Ks, tables, config.K0, config.include_step0,
                          config.indicator_weights);
  return improved_upper(config.target, config.Ks, tables);
}

bool run_verify(std::ostream& out, unsigned threads) {
  std::vector<Suite> suites;
  suites.push_back(suite_antichains());
  suites.push_back(suite_dual("f: chain backtracking = naive, n <= 10", kFNaiveCeiling,
                              [](std::uint64_t n) {
                                return f_exact(n).value ==
                                       f_exact(n, OracleMethod::NaiveSubsets).value;
                              }));
  {
    Suite s("f(7) = 12, f(8) = 10");
    s.ok = f_exact(7).value == 12 && f_exact(8).value == 10;
    suites.push_back(s);
  }
  suites.push_back(suite_dual("g: chain backtracking = naive, n <= 16", 16, [](std::uint64_t n) {
    return g_exact(n).value == g_exact(n, OracleMethod::NaiveSubsets).value;
  }));
  suites.push_back(suite_dual("f_q: chain backtracking = naive, l = 1, 2, n <= 10",
                              kFqNaiveCeiling, [](std::uint64_t n) {
                                for (std::size_t l : {1, 2}) {
                                  const auto b = first_primes(l);
                                  if (fq_exact(n, b).value !=
                                      fq_exact(n, b, OracleMethod::NaiveSubsets).value)
                                    return false;
                                }
                                return true;
                              }));
  suites.push_back(suite_dual("coprime: mask DP = naive, n <= 16", 16, [](std::uint64_t n) {
    return coprime_count_exact(n).value ==
           coprime_count_exact(n, OracleMethod::NaiveSubsets).value;
  }));
  suites.push_back(suite_weights());
  {
    Suite s("telescoped sums, 1 <= a <= b <= 60");
    for (std::uint64_t a = 1; a <= 60 && s.ok; ++a) {
      Rational direct = 0;
      for (std::uint64_t b = a; b <= 60; ++b) {
        direct += Rational(BigInt(1), BigInt(b) * (b + 1));
        if (telescoped_weight_sum(a, b) != direct) {
          s.ok = false;
          s.detail = "a=" + std::to_string(a) + " b=" + std::to_string(b);
          break;
        }
      }
    }
    suites.push_back(s);
  }
  suites.push_back(suite_cache(threads));

  bool all = true;
  for (const Suite& s : suites) {
    report_suite(out, s);
    all = all && s.ok;
  }
  return all;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds on the growth constants of primitive sets"};
  app.name("primbound");
  app.require_subcommand(1);

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "Evaluate a lower or upper bound");
  bound->add_option("--target", ba.target, "alpha or beta")->required()
      ->check(CLI::IsMember({"alpha", "beta"}));
  bound->add_option("--flavor", ba.flavor,
                    "basic-lower, basic-upper, crude-upper, improved-lower, improved-upper")
      ->required();
  bound->add_option("--l", ba.l, "number of primes (basic flavors)");
  bound->add_option("--K", ba.K, "table length (basic flavors)");
  bound->add_option("--S", ba.S, "number of stages (improved flavors)");
  bound->add_option("--Ks", ba.Ks, "K_1,...,K_S (improved flavors)")->delimiter(',');
  bound->add_option("--K0", ba.K0, "K_0 for the beta improved lower bound");
  bound->add_flag("--no-step0", ba.no_step0, "skip the beta l = 0 step");
  bound->add_flag("--indicator-weights", ba.indicator,
                  "improved lower: drop partly covered intervals");
  bound->add_option("--threads", ba.threads, "worker threads for table builds")
      ->check(CLI::Range(1u, 1024u));
  bound->add_option("--format", ba.format)->check(CLI::IsMember({"json", "text"}));
  bound->add_option("--cache-dir", ba.cache_dir, "count table cache (default $PRIMBOUND_CACHE_DIR)");
  bound->add_option("--max-elements", ba.max_elements, "refuse lattices larger than this");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Exact small-n counts");
  oracle->add_option("quantity", oa.quantity, "f, g, fq or coprime")->required()
      ->check(CLI::IsMember({"f", "g", "fq", "coprime"}));
  oracle->add_option("--n", oa.n)->required();
  oracle->add_option("--l", oa.l, "primes defining q for fq");
  oracle->add_option("--method", oa.method, "chain, naive or mask")
      ->check(CLI::IsMember({"chain", "naive", "mask"}));
  oracle->add_option("--format", oa.format)->check(CLI::IsMember({"json", "text"}));

  TableArgs ta;
  auto* table = app.add_subcommand("table", "Build a count table and write it in cache format");
  table->add_option("--l", ta.l)->required();
  table->add_option("--kind", ta.kind, "MaxAll, MaxTruncated, AllAll, AllTruncated")->required();
  table->add_option("--K", ta.K)->required();
  table->add_option("--out", ta.out)->required();
  table->add_option("--threads", ta.threads)->check(CLI::Range(1u, 1024u));
  table->add_option("--max-elements", ta.max_elements);

  unsigned verify_threads = 1;
  auto* verify = app.add_subcommand("verify", "Run the oracle and identity self-checks");
  verify->add_option("--threads", verify_threads)->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bound) return do_bound(ba, out);
    if (*oracle) return do_oracle(oa, out);
    if (*table) return do_table(ta, out);
    if (*verify) return run_verify(out, verify_threads) ? kExitOk : kExitInvariant;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const FingerprintError& e) {
    err << "cache fingerprint mismatch: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CacheFormatError& e) {
    err << "malformed cache file: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace primbound
