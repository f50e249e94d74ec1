#include "primbound/antichain.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "primbound/errors.hpp"

namespace primbound {

std::string_view to_string(CountKind kind) {
  switch (kind) {
    case CountKind::MaxAll: return "MaxAll";
    case CountKind::MaxTruncated: return "MaxTruncated";
    case CountKind::AllAll: return "AllAll";
    case CountKind::AllTruncated: return "AllTruncated";
  }
  return "?";
}

std::optional<CountKind> parse_count_kind(std::string_view text) {
  for (CountKind k : kAllCountKinds)
    if (text == to_string(k)) return k;
  if (text == "r") return CountKind::MaxAll;
  if (text == "r'" || text == "rprime") return CountKind::MaxTruncated;
  if (text == "R") return CountKind::AllAll;
  if (text == "R'" || text == "Rprime") return CountKind::AllTruncated;
  return std::nullopt;
}

bool is_truncated(CountKind kind) {
  return kind == CountKind::MaxTruncated || kind == CountKind::AllTruncated;
}

bool is_max_size(CountKind kind) {
  return kind == CountKind::MaxAll || kind == CountKind::MaxTruncated;
}

namespace {

// Counting problem on the poset of odd parts O: integer labels h_u in
// [lo_u, hi_u] with h_v <= h_u whenever u divides v.
//
// Every count family maps onto it. An up-set of M_l(i) is fixed by the
// first exponent of 2 it keeps on each chain; those exponents are weakly
// decreasing along O, and up-sets biject with antichains (their minimal
// elements). A max-size antichain picks one element 2^{a_u} u per chain with
// a strictly decreasing along O; shifting by the number of odd prime factors
// turns strict into weak.
struct LabelProblem {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<std::vector<std::size_t>> lower_covers;
  std::vector<std::size_t> last_use;
};

// Peak number of live labels when O is processed in `order`.
std::size_t frontier_width(const std::vector<std::size_t>& order,
                           const std::vector<std::vector<std::size_t>>& upper_covers) {
  const std::size_t n = order.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<long> delta(n + 1, 0);
  for (std::size_t e = 0; e < n; ++e) {
    std::size_t last = pos[e];
    for (std::size_t c : upper_covers[e]) last = std::max(last, pos[c]);
    if (last > pos[e]) {
      ++delta[pos[e]];
      --delta[last];
    }
  }
  long live = 0, peak = 0;
  for (std::size_t k = 0; k < n; ++k) peak = std::max(peak, live += delta[k]);
  return static_cast<std::size_t>(peak);
}

LabelProblem make_problem(const SmoothLattice& lat, CountKind kind, std::uint64_t i) {
  const auto& primes = lat.basis.primes;
  const std::uint64_t cut = i / lat.basis.q;  // m*q > i  <=>  m > cut
  const std::size_t n = lat.chains.size();

  std::vector<std::uint64_t> odd(n);
  for (std::size_t k = 0; k < n; ++k) odd[k] = lat.chains[k].odd_part;
  auto odd_index = [&](std::uint64_t v) -> std::size_t {
    auto it = std::lower_bound(odd.begin(), odd.end(), v);
    return (it != odd.end() && *it == v) ? static_cast<std::size_t>(it - odd.begin()) : n;
  };

  std::vector<int> lo(n), hi(n);
  std::vector<std::vector<std::uint8_t>> exps(n);
  std::vector<std::vector<std::size_t>> lower(n), upper(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& members = lat.chains[k].members;
    const int top = static_cast<int>(members.size()) - 1;
    int first_above = 0;
    if (is_truncated(kind)) {
      first_above = top + 1;
      for (int a = 0; a <= top; ++a)
        if (members[a] > cut) {
          first_above = a;
          break;
        }
    }
    exps[k] = lat.exponents[lat.index_of(odd[k])];
    int omega = 0;
    for (std::size_t j = 1; j < primes.size(); ++j) omega += exps[k][j];

    if (is_max_size(kind)) {
      lo[k] = first_above + omega;
      hi[k] = top + omega;
    } else {
      lo[k] = first_above;
      hi[k] = top + 1;
    }
    for (std::size_t j = 1; j < primes.size(); ++j) {
      const std::uint64_t p = primes[j];
      if (exps[k][j] > 0) lower[k].push_back(odd_index(odd[k] / p));
      if (odd[k] <= lat.limit / p) upper[k].push_back(odd_index(odd[k] * p));
    }
  }

  // Tighten the boxes: h_v <= h_u for u | v forces hi_v <= hi_u and lo_u >= lo_v.
  // Ascending numeric order is a linear extension, so one pass each way suffices.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c : lower[k]) hi[k] = std::min(hi[k], hi[c]);
  for (std::size_t k = n; k-- > 0;)
    for (std::size_t c : upper[k]) lo[k] = std::max(lo[k], lo[c]);

  // Any lexicographic order on exponent vectors is a linear extension; pick
  // the significance permutation with the narrowest frontier.
  std::vector<std::size_t> perm;
  for (std::size_t j = 1; j < primes.size(); ++j) perm.push_back(j);
  std::vector<std::size_t> best(n);
  for (std::size_t k = 0; k < n; ++k) best[k] = k;
  std::size_t best_width = frontier_width(best, upper);
  do {
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      for (std::size_t j : perm)
        if (exps[a][j] != exps[b][j]) return exps[a][j] < exps[b][j];
      return false;
    });
    const std::size_t w = frontier_width(order, upper);
    if (w < best_width) {
      best_width = w;
      best = std::move(order);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[best[k]] = k;
  LabelProblem pb;
  pb.lo.resize(n);
  pb.hi.resize(n);
  pb.lower_covers.resize(n);
  pb.last_use.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t e = best[k];
    pb.lo[k] = lo[e];
    pb.hi[k] = hi[e];
    for (std::size_t c : lower[e]) pb.lower_covers[k].push_back(pos[c]);
    pb.last_use[k] = k;
    for (std::size_t c : upper[e]) pb.last_use[k] = std::max(pb.last_use[k], pos[c]);
  }
  return pb;
}

// Frontier DP over O in a linear extension. The state holds labels of
// processed elements that still have an unprocessed upper cover.
BigInt count_labelings(const LabelProblem& pb) {
  const std::size_t n = pb.lo.size();
  for (std::size_t k = 0; k < n; ++k)
    if (pb.lo[k] > pb.hi[k]) return 0;

  std::vector<std::size_t> active;
  std::unordered_map<std::string, BigInt> states{{std::string(), BigInt(1)}};

  for (std::size_t k = 0; k < n; ++k) {
    auto pos_in = [&](std::size_t elem) {
      return static_cast<std::size_t>(std::find(active.begin(), active.end(), elem) -
                                      active.begin());
    };
    std::vector<std::size_t> cover_pos;
    for (std::size_t c : pb.lower_covers[k]) cover_pos.push_back(pos_in(c));

    std::vector<std::size_t> next_active;
    std::vector<long> source;  // -1: the new element
    for (std::size_t a = 0; a < active.size(); ++a)
      if (pb.last_use[active[a]] > k) {
        next_active.push_back(active[a]);
        source.push_back(static_cast<long>(a));
      }
    if (pb.last_use[k] > k) {
      next_active.push_back(k);
      source.push_back(-1);
    }

    std::unordered_map<std::string, BigInt> next;
    next.reserve(states.size() * 2);
    std::string key(next_active.size(), '\0');
    for (const auto& [state, count] : states) {
      int cap = pb.hi[k];
      for (std::size_t p : cover_pos) cap = std::min(cap, static_cast<int>(state[p]));
      for (int v = pb.lo[k]; v <= cap; ++v) {
        for (std::size_t s = 0; s < source.size(); ++s)
          key[s] = source[s] < 0 ? static_cast<char>(v) : state[source[s]];
        next[key] += count;
      }
    }
    states = std::move(next);
    active = std::move(next_active);
    if (states.empty()) return 0;
  }

  BigInt total = 0;
  for (const auto& [state, count] : states) total += count;
  return total;
}

void check_ceiling(const SmoothLattice& lat, std::size_t max_elements) {
  if (lat.size() > max_elements)
    throw ResourceLimitError("lattice M_" + std::to_string(lat.basis.size()) + "(" +
                             std::to_string(lat.limit) + ") has " + std::to_string(lat.size()) +
                             " elements, above the ceiling of " + std::to_string(max_elements));
}

void check_index(const SmoothLattice& lat, std::uint64_t i) {
  if (i != lat.limit)
    throw std::invalid_argument("truncation index " + std::to_string(i) +
                                " differs from lattice limit " + std::to_string(lat.limit));
}

}  // namespace

BigInt count_antichains(const SmoothLattice& lat, CountKind kind, const CountOptions& opts) {
  check_ceiling(lat, opts.max_elements);
  return count_labelings(make_problem(lat, kind, lat.limit));
}

BigInt count_all_antichains(const SmoothLattice& lat, const CountOptions& opts) {
  return count_antichains(lat, CountKind::AllAll, opts);
}

BigInt count_truncated_antichains(const SmoothLattice& lat, std::uint64_t i,
                                  const CountOptions& opts) {
  check_index(lat, i);
  return count_antichains(lat, CountKind::AllTruncated, opts);
}

BigInt count_max_antichains(const SmoothLattice& lat, const CountOptions& opts) {
  return count_antichains(lat, CountKind::MaxAll, opts);
}

BigInt count_truncated_max_antichains(const SmoothLattice& lat, std::uint64_t i,
                                      const CountOptions& opts) {
  check_index(lat, i);
  return count_antichains(lat, CountKind::MaxTruncated, opts);
}

// Walks every subset of the ground set; a branch is abandoned only once the
// chosen elements already contain a comparable pair, since no superset of
// such a set is an antichain.
BigInt brute_force_count(const SmoothLattice& lat, CountKind kind, std::uint64_t i,
                         std::size_t max_elements) {
  const std::size_t n = lat.size();
  if (n > max_elements || n > 63)
    throw ResourceLimitError("brute_force_count: " + std::to_string(n) +
                             " elements exceed the ceiling of " + std::to_string(max_elements));

  std::vector<std::uint64_t> comparable(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && (lat.elements[b] % lat.elements[a] == 0 || lat.elements[a] % lat.elements[b] == 0))
        comparable[a] |= std::uint64_t{1} << b;

  std::uint64_t above = 0;  // elements m with m*q > i
  for (std::size_t a = 0; a < n; ++a)
    if (lat.elements[a] > i / lat.basis.q) above |= std::uint64_t{1} << a;

  // Maximum antichain size by exhaustive search, independent of chain structure.
  std::size_t width = 0;
  std::uint64_t matches = 0;
  const bool want_max = is_max_size(kind);
  const bool want_trunc = is_truncated(kind);

  std::vector<std::pair<std::uint64_t, std::size_t>> leaves;
  auto walk = [&](auto&& self, std::size_t pos, std::uint64_t chosen, std::size_t size) -> void {
    if (pos == n) {
      width = std::max(width, size);
      if (want_trunc && (chosen & ~above) != 0) return;
      if (want_max)
        leaves.emplace_back(chosen, size);
      else
        ++matches;
      return;
    }
    self(self, pos + 1, chosen, size);
    if ((comparable[pos] & chosen) == 0)
      self(self, pos + 1, chosen | (std::uint64_t{1} << pos), size + 1);
  };
  walk(walk, 0, 0, 0);

  if (want_max)
    for (const auto& [set, size] : leaves)
      if (size == width) ++matches;
  return BigInt(matches);
}

const CountRow& CountTable::row_at(std::uint64_t i) const {
  if (i == 0 || i > K)
    throw std::out_of_range("count table index " + std::to_string(i) + " outside [1, " +
                            std::to_string(K) + "]");
  auto it = std::upper_bound(rows.begin(), rows.end(), i,
                             [](std::uint64_t v, const CountRow& r) { return v < r.lo; });
  return *(it - 1);
}

const BigInt& CountTable::at(std::uint64_t i) const { return row_at(i).count; }

namespace {

std::vector<BigInt> evaluate_segments(const PrimeBasis& basis, CountKind kind,
                                      const std::vector<Segment>& segments,
                                      const TableOptions& opts) {
  std::vector<BigInt> counts(segments.size());
  const CountOptions copts{opts.max_elements};
  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(segments.size())));
  if (workers <= 1) {
    for (std::size_t s = 0; s < segments.size(); ++s)
      counts[s] = count_antichains(generate_lattice(basis, segments[s].lo), kind, copts);
    return counts;
  }

  // Largest lattices last in the list; hand them out first.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t taken = next.fetch_add(1);
        if (taken >= segments.size() || failed.load()) return;
        const std::size_t s = segments.size() - 1 - taken;
        try {
          counts[s] = count_antichains(generate_lattice(basis, segments[s].lo), kind, copts);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return counts;
}

}  // namespace

CountTable build_table(const PrimeBasis& basis, CountKind kind, std::uint64_t K,
                       const TableOptions& opts) {
  const BreakpointPartition part = breakpoints(basis, K);
  std::vector<BigInt> counts = evaluate_segments(basis, kind, part.segments, opts);
  CountTable table;
  table.basis = basis;
  table.kind = kind;
  table.K = K;
  table.rows.reserve(part.segments.size());
  for (std::size_t s = 0; s < part.segments.size(); ++s)
    table.rows.push_back({part.segments[s].lo, part.segments[s].hi, std::move(counts[s])});
  return table;
}

CountTable extend_table(const CountTable& table, std::uint64_t K, const TableOptions& opts) {
  if (K <= table.K) return table;
  const BreakpointPartition part = breakpoints(table.basis, K);
  CountTable out;
  out.basis = table.basis;
  out.kind = table.kind;
  out.K = K;

  std::vector<Segment> fresh;
  for (const Segment& seg : part.segments) {
    if (seg.lo <= table.K) {
      // Same left endpoint as an existing row; the count does not depend on hi.
      const CountRow& row = table.row_at(seg.lo);
      if (row.lo != seg.lo) throw InvariantViolation("extend_table: misaligned rows");
      out.rows.push_back({seg.lo, seg.hi, row.count});
    } else {
      fresh.push_back(seg);
    }
  }
  std::vector<BigInt> counts = evaluate_segments(table.basis, table.kind, fresh, opts);
  for (std::size_t s = 0; s < fresh.size(); ++s)
    out.rows.push_back({fresh[s].lo, fresh[s].hi, std::move(counts[s])});
  return out;
}

}  // namespace primbound
