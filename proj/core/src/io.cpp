#include "slabtest/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "slabtest/error.hpp"

#ifndef SLABTEST_VERSION_STRING
#define SLABTEST_VERSION_STRING "0.0.0"
#endif

namespace slabtest {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

void write_comment(std::ostream& out) { out << "# slabtest " << version() << '\n'; }

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> optional_from(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

std::string_view version() { return SLABTEST_VERSION_STRING; }

std::string format_real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_observations(std::istream& in, const std::string& source) {
  std::vector<double> xs;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (field == "x" || field == "\"x\"") continue;
    }
    const auto v = parse_real(field);
    if (!v || !std::isfinite(*v)) {
      throw IoError(source + ":" + std::to_string(line_no) + ": expected a finite real, got '" +
                        std::string(field) + "'",
                    source);
    }
    xs.push_back(*v);
  }
  if (in.bad()) throw IoError(source + ": read error", source);
  if (xs.empty()) throw IoError(source + ": no observations", source);
  return xs;
}

std::vector<double> read_observations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file " + path.string(), path.string());
  return parse_observations(in, path.string());
}

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> columns{
      "procedure", "prior", "n",   "s",      "mu",     "scenario",       "t",
      "reps",      "fdr",   "fdr_se", "fnr", "fnr_se", "mean_rejections"};
  return columns;
}

void write_metrics_csv(std::ostream& out, const std::vector<CellResult>& results) {
  write_comment(out);
  const auto& columns = metrics_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  const auto se = [](const std::optional<double>& v) {
    return v ? format_real17(*v) : std::string();
  };
  for (const auto& r : results) {
    for (std::size_t k = 0; k < r.metrics.size(); ++k) {
      const auto& spec = r.cell.procedures[k];
      const auto& m = r.metrics[k];
      out << to_string(spec.id) << ',' << r.cell.prior << ',' << r.cell.n << ','
          << r.cell.s << ',' << format_real17(r.cell.mu) << ','
          << to_string(r.cell.scenario) << ',' << format_real17(spec.t) << ','
          << m.reps << ',' << format_real17(m.fdr) << ',' << se(m.fdr_se) << ','
          << format_real17(m.fnr) << ',' << se(m.fnr_se) << ','
          << format_real17(m.mean_rejections) << '\n';
    }
  }
}

void write_numeric_csv(std::ostream& out, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  write_comment(out);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_real17(row[i]);
    }
    out << '\n';
  }
}

std::string outcome_to_json(const TestOutcome& outcome, const std::string& prior_id,
                            const WeightEstimate& weight) {
  ordered_json j;
  j["version"] = std::string(version());
  j["prior"] = prior_id;
  j["procedure"] = std::string(to_string(outcome.procedure));
  j["t"] = outcome.t;
  j["n"] = outcome.reject.size();
  j["w_hat"] = weight.w_hat;
  j["w_lower"] = weight.lower;
  j["at_lower_boundary"] = weight.at_lower_boundary;
  j["at_upper_boundary"] = weight.at_upper_boundary;
  j["w_used"] = optional_json(outcome.w_used);
  j["omega_n"] = optional_json(outcome.omega_n);
  j["used_bonferroni"] = outcome.used_bonferroni;
  j["degenerate_weight"] = outcome.degenerate_weight;
  j["effective_abs_threshold"] = optional_json(outcome.effective_abs_threshold);
  j["rejections"] = outcome.rejections();
  j["values"] = outcome.values;
  j["reject"] = outcome.reject;
  return j.dump(2) + "\n";
}

TestOutcome outcome_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
    TestOutcome out;
    out.procedure = parse_procedure_id(j.at("procedure").get<std::string>());
    out.t = j.at("t").get<double>();
    out.w_used = optional_from<double>(j, "w_used");
    out.omega_n = optional_from<double>(j, "omega_n");
    out.used_bonferroni = j.at("used_bonferroni").get<bool>();
    out.degenerate_weight = j.at("degenerate_weight").get<bool>();
    out.effective_abs_threshold = optional_from<double>(j, "effective_abs_threshold");
    out.values = j.at("values").get<std::vector<double>>();
    out.reject = j.at("reject").get<std::vector<std::uint8_t>>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("invalid outcome JSON: ") + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file " + path.string(), path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("cannot write output file " + path.string(), path.string());
}

std::vector<double> parse_grid(std::string_view spec) {
  const auto bad = [&](const std::string& why) -> DomainError {
    return DomainError("invalid grid '" + std::string(spec) + "': " + why);
  };
  const bool lin = spec.starts_with("lin:");
  const bool log = spec.starts_with("log:");
  if (lin || log) {
    std::vector<std::string_view> parts;
    std::string_view rest = spec.substr(4);
    for (;;) {
      const auto pos = rest.find(':');
      parts.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (parts.size() != 3) throw bad("expected <kind>:<from>:<to>:<count>");
    const auto a = parse_real(parts[0]);
    const auto b = parse_real(parts[1]);
    std::size_t k = 0;
    const auto [ptr, ec] =
        std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), k);
    if (!a || !b || !std::isfinite(*a) || !std::isfinite(*b)) throw bad("bad endpoint");
    if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || k == 0) {
      throw bad("count must be a positive integer");
    }
    if (log && !(*a > 0.0 && *b > 0.0)) throw bad("log grid needs positive endpoints");
    std::vector<double> grid(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double f = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
      grid[i] = lin ? *a + f * (*b - *a)
                    : std::exp(std::log(*a) + f * (std::log(*b) - std::log(*a)));
    }
    grid.front() = *a;
    if (k > 1) grid.back() = *b;
    return grid;
  }
  std::vector<double> grid;
  std::string_view rest = spec;
  for (;;) {
    const auto pos = rest.find(',');
    const auto v = parse_real(trim(rest.substr(0, pos)));
    if (!v || !std::isfinite(*v)) throw bad("expected a comma separated list of reals");
    grid.push_back(*v);
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return grid;
}

}  // namespace slabtest
