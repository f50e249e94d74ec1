#pragma once

// Text cache for count tables.
//
//   l;primes;kind;K          e.g. 2;2,3;MaxTruncated;1000000
//   i_lo,i_hi,count          one row per constant segment, count in decimal

#include <filesystem>
#include <optional>
#include <string>

#include "primbound/antichain.hpp"

namespace primbound {

std::string cache_header(const CountTable& table);

/// Writes `table` to `path` through a temporary file and an atomic rename.
void cache_store(const std::filesystem::path& path, const CountTable& table);

/// Reads a table without checking what it is for. Throws CacheFormatError.
CountTable cache_read(const std::filesystem::path& path);

/// Reads a table and checks it was built for `basis` and `kind`.
/// Throws FingerprintError on mismatch, CacheFormatError on malformed input.
CountTable cache_load(const std::filesystem::path& path, const PrimeBasis& basis, CountKind kind);

/// Serves tables from an optional cache directory, building or extending as needed.
class TableStore {
 public:
  explicit TableStore(std::optional<std::filesystem::path> dir = {}, TableOptions opts = {});

  /// Table for (basis, kind) covering at least [1, K].
  CountTable get(const PrimeBasis& basis, CountKind kind, std::uint64_t K);

  const std::optional<std::filesystem::path>& directory() const { return dir_; }
  std::filesystem::path file_for(const PrimeBasis& basis, CountKind kind) const;

  /// PRIMBOUND_CACHE_DIR if set and non-empty.
  static std::optional<std::filesystem::path> default_directory();

 private:
  std::optional<std::filesystem::path> dir_;
  TableOptions opts_;
};

}  // namespace primbound
