#include "primbound/report.hpp"

#include <sstream>

namespace primbound {

using nlohmann::ordered_json;

ordered_json config_json(const BoundConfig& c) {
  ordered_json j;
  j["target"] = std::string(to_string(c.target));
  j["flavor"] = std::string(to_string(c.flavor));
  if (c.improved()) {
    j["S"] = c.S();
    j["Ks"] = c.Ks;
    if (c.flavor == Flavor::ImprovedLower) {
      if (c.target == Target::Beta) {
        j["K0"] = c.K0.value_or(c.Ks[0]);
        j["step0"] = c.include_step0;
      }
      j["weights"] = c.indicator_weights ? "indicator" : "exact-interval";
    }
  } else {
    j["l"] = c.l;
    j["K"] = c.K;
  }
  return j;
}

ordered_json bound_json(const BoundReport& r, double wall_seconds) {
  ordered_json j;
  j["report"] = "bound";
  j["config"] = config_json(r.config);
  j["direction"] = std::string(to_string(r.direction));
  j["bound"] = r.bound;
  j["log_bound"] = to_significant(r.log_bound, kLogDigits);
  j["log_error_estimate"] = to_significant(r.log_error_estimate, 3);
  j["precision"] = kPrecisionNote;
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"label", s.label}, {"log_contribution", to_significant(s.log_contribution, kLogDigits)}});
  j["steps"] = std::move(steps);
  ordered_json tables = ordered_json::array();
  for (const auto& t : r.tables)
    tables.push_back({{"l", t.l}, {"kind", std::string(to_string(t.kind))}, {"K", t.K}});
  j["tables"] = std::move(tables);
  if (r.config.flavor == Flavor::ImprovedLower) j["general_weights"] = r.general_weights;
  j["wall_time_seconds"] = wall_seconds;
  return j;
}

ordered_json oracle_json(std::string_view quantity, const OracleResult& result,
                         std::optional<std::size_t> l) {
  ordered_json j;
  j["report"] = "oracle";
  j["quantity"] = std::string(quantity);
  j["n"] = result.n;
  if (l) j["l"] = *l;
  j["method"] = std::string(to_string(result.method));
  j["value"] = result.value.str();
  if (quantity == "coprime" && result.n >= 2) {
    const CoprimeBounds b = coprime_bound_eval(result.n);
    j["pi"] = b.pi;
    j["log_value"] = to_significant(log_of(result.value), kLogDigits);
    j["log_reference"] = {{"c=1/2", to_significant(b.log_lower, 12)},
                          {"c=1", to_significant(b.log_mid, 12)},
                          {"c=2", to_significant(b.log_upper, 12)}};
    j["residual"] = to_significant(coprime_residual(result.n, result.value), 12);
  }
  j["wall_time_seconds"] = std::chrono::duration<double>(result.elapsed).count();
  return j;
}

ordered_json table_json(const CountTable& table, double wall_seconds) {
  ordered_json j;
  j["report"] = "table";
  j["l"] = table.basis.size();
  j["primes"] = table.basis.primes;
  j["kind"] = std::string(to_string(table.kind));
  j["K"] = table.K;
  j["rows"] = table.rows.size();
  j["wall_time_seconds"] = wall_seconds;
  return j;
}

std::string bound_text(const BoundReport& r, double wall_seconds) {
  std::ostringstream out;
  const auto& c = r.config;
  out << to_string(c.target) << ' ' << to_string(c.flavor);
  if (c.improved()) {
    out << " S=" << c.S() << " Ks=";
    for (std::size_t k = 0; k < c.Ks.size(); ++k) out << (k ? "," : "") << c.Ks[k];
  } else {
    out << " l=" << c.l << " K=" << c.K;
  }
  out << '\n';
  out << "  " << (r.direction == Direction::Lower ? ">= " : "<= ") << r.bound << "  (log "
      << to_significant(r.log_bound, 15) << ", " << kPrecisionNote << ")\n";
  for (const auto& s : r.steps)
    out << "  " << s.label << ": " << to_significant(s.log_contribution, 12) << '\n';
  out << "  time " << wall_seconds << " s\n";
  return out.str();
}

std::string oracle_text(std::string_view quantity, const OracleResult& result) {
  std::ostringstream out;
  out << quantity << '(' << result.n << ") = " << result.value.str() << "  ["
      << to_string(result.method) << ", " << std::chrono::duration<double>(result.elapsed).count()
      << " s]\n";
  return out.str();
}

ordered_json without_timing(ordered_json report) {
  report.erase("wall_time_seconds");
  return report;
}

}  // namespace primbound
