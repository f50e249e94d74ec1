#include "primbound/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "primbound/errors.hpp"

namespace primbound {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    out.emplace_back(text.substr(start, at == std::string_view::npos ? text.npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw CacheFormatError(where + ": expected an unsigned integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw CacheFormatError(where + ": integer out of range: " + s);
  }
}

std::string primes_field(const PrimeBasis& basis) {
  std::string out;
  for (std::size_t k = 0; k < basis.primes.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(basis.primes[k]);
  }
  return out;
}

}  // namespace

std::string cache_header(const CountTable& table) {
  return std::to_string(table.basis.size()) + ";" + primes_field(table.basis) + ";" +
         std::string(to_string(table.kind)) + ";" + std::to_string(table.K);
}

void cache_store(const std::filesystem::path& path, const CountTable& table) {
  static std::atomic<unsigned> serial{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(serial++);
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << cache_header(table) << '\n';
    for (const CountRow& row : table.rows)
      out << row.lo << ',' << row.hi << ',' << row.count.str() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CountTable cache_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CacheFormatError("cannot open " + path.string());
  const std::string name = path.string();

  std::string line;
  if (!std::getline(in, line)) throw CacheFormatError(name + ": empty file");
  const auto head = split(line, ';');
  if (head.size() != 4) throw CacheFormatError(name + ": header must be l;primes;kind;K");

  CountTable table;
  const std::uint64_t l = parse_u64(head[0], name + " header l");
  if (l > 0) {
    for (const std::string& p : split(head[1], ','))
      table.basis.primes.push_back(parse_u64(p, name + " header primes"));
  } else if (!head[1].empty()) {
    throw CacheFormatError(name + ": l = 0 with a non-empty prime list");
  }
  if (table.basis.primes.size() != l)
    throw CacheFormatError(name + ": prime list length differs from l");
  const auto kind = parse_count_kind(head[2]);
  if (!kind) throw CacheFormatError(name + ": unknown count kind '" + head[2] + "'");
  table.kind = *kind;
  table.K = parse_u64(head[3], name + " header K");
  table.basis.q = first_primes(l + 1).primes.back();

  std::uint64_t next = 1;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    const auto f = split(line, ',');
    if (f.size() != 3) throw CacheFormatError(where + ": expected i_lo,i_hi,count");
    CountRow row;
    row.lo = parse_u64(f[0], where);
    row.hi = parse_u64(f[1], where);
    if (f[2].empty() || f[2].find_first_not_of("0123456789") != std::string::npos)
      throw CacheFormatError(where + ": count must be a decimal integer");
    row.count = BigInt(f[2]);
    if (row.lo != next || row.hi < row.lo)
      throw CacheFormatError(where + ": rows must tile [1, K] in order");
    next = row.hi + 1;
    table.rows.push_back(std::move(row));
  }
  if (table.K == 0 || next != table.K + 1)
    throw CacheFormatError(name + ": rows do not cover [1, K]");
  return table;
}

CountTable cache_load(const std::filesystem::path& path, const PrimeBasis& basis, CountKind kind) {
  CountTable table = cache_read(path);
  if (table.basis.primes != basis.primes || table.kind != kind)
    throw FingerprintError(path.string() + ": cached table is " + cache_header(table) +
                           ", wanted l=" + std::to_string(basis.size()) + " primes " +
                           primes_field(basis) + " kind " + std::string(to_string(kind)));
  return table;
}

TableStore::TableStore(std::optional<std::filesystem::path> dir, TableOptions opts)
    : dir_(std::move(dir)), opts_(opts) {}

std::optional<std::filesystem::path> TableStore::default_directory() {
  const char* env = std::getenv("PRIMBOUND_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

std::filesystem::path TableStore::file_for(const PrimeBasis& basis, CountKind kind) const {
  return *dir_ / ("l" + std::to_string(basis.size()) + "_" + std::string(to_string(kind)) + ".tbl");
}

CountTable TableStore::get(const PrimeBasis& basis, CountKind kind, std::uint64_t K) {
  if (!dir_) return build_table(basis, kind, K, opts_);
  const auto path = file_for(basis, kind);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    CountTable cached = cache_load(path, basis, kind);
    if (cached.K >= K) return cached;
    CountTable grown = extend_table(cached, K, opts_);
    cache_store(path, grown);
    return grown;
  }
  CountTable fresh = build_table(basis, kind, K, opts_);
  cache_store(path, fresh);
  return fresh;
}

}  // namespace primbound
