#pragma once

// Antichain count families over smooth lattices:
//   r_l(i)  = MaxAll        max-size antichains of M_l(i)
//   r'_l(i) = MaxTruncated  max-size antichains of M_l(i) inside (i/q, i]
//   R_l(i)  = AllAll        all antichains of M_l(i), empty one included
//   R'_l(i) = AllTruncated  all antichains inside (i/q, i]

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "primbound/lattice.hpp"
#include "primbound/numeric.hpp"

namespace primbound {

enum class CountKind { MaxAll, MaxTruncated, AllAll, AllTruncated };

inline constexpr CountKind kAllCountKinds[] = {CountKind::MaxAll, CountKind::MaxTruncated,
                                               CountKind::AllAll, CountKind::AllTruncated};

std::string_view to_string(CountKind kind);
std::optional<CountKind> parse_count_kind(std::string_view text);
bool is_truncated(CountKind kind);
bool is_max_size(CountKind kind);

inline constexpr std::size_t kDefaultElementCeiling = 400;
inline constexpr std::size_t kBruteForceCeiling = 25;

struct CountOptions {
  std::size_t max_elements = kDefaultElementCeiling;
};

BigInt count_all_antichains(const SmoothLattice& lat, const CountOptions& opts = {});
BigInt count_truncated_antichains(const SmoothLattice& lat, std::uint64_t i,
                                  const CountOptions& opts = {});
BigInt count_max_antichains(const SmoothLattice& lat, const CountOptions& opts = {});
BigInt count_truncated_max_antichains(const SmoothLattice& lat, std::uint64_t i,
                                      const CountOptions& opts = {});

/// Dispatches to the DP counter for `kind`; truncation uses lat.limit.
BigInt count_antichains(const SmoothLattice& lat, CountKind kind, const CountOptions& opts = {});

/// Exhaustive reference count. Refuses lattices above `max_elements`.
BigInt brute_force_count(const SmoothLattice& lat, CountKind kind, std::uint64_t i,
                         std::size_t max_elements = kBruteForceCeiling);

struct CountRow {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  BigInt count;
  bool operator==(const CountRow&) const = default;
};

/// Piecewise-constant table of one count family over [1, K].
struct CountTable {
  PrimeBasis basis;
  CountKind kind = CountKind::MaxAll;
  std::uint64_t K = 0;
  std::vector<CountRow> rows;

  /// Count at index i, 1 <= i <= K.
  const BigInt& at(std::uint64_t i) const;
  /// Row containing index i.
  const CountRow& row_at(std::uint64_t i) const;
  bool operator==(const CountTable&) const = default;
};

struct TableOptions {
  unsigned threads = 1;
  std::size_t max_elements = kDefaultElementCeiling;
};

CountTable build_table(const PrimeBasis& basis, CountKind kind, std::uint64_t K,
                       const TableOptions& opts = {});

/// Grows `table` to cover [1, K]; rows already present are kept verbatim.
CountTable extend_table(const CountTable& table, std::uint64_t K, const TableOptions& opts = {});

}  // namespace primbound
