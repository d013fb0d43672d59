#include "qarx/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace qarx {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOrdersHeader = "trial,seed,n,p_hat,q_hat";
constexpr const char* kCriteriaHeader = "trial,n,axis,order,sigma,criterion";
constexpr const char* kSummaryHeader = "n,trials,p_mode,p_mode_fraction,q_mode,q_mode_fraction";

void append_table(std::ostringstream& out, std::size_t trial, const CriterionTable& table) {
  for (const auto& cell : table.cells) {
    out << trial << ',' << table.n << ',' << axis_name(table.axis) << ',' << cell.order << ','
        << format_real(cell.sigma) << ',' << format_real(cell.criterion) << '\n';
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::uint64_t parse_unsigned(const std::string& text, const fs::path& path, std::size_t line) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw IoError(path.string() + ":" + std::to_string(line) + ": malformed integer '" + text +
                  "'");
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string orders_csv(std::span<const TrialResult> results) {
  std::ostringstream out;
  out << kOrdersHeader << '\n';
  for (const auto& trial : results) {
    for (const auto& rec : trial.records) {
      out << trial.trial << ',' << trial.seed << ',' << rec.n << ',' << rec.p_hat << ','
          << rec.q_hat << '\n';
    }
  }
  return out.str();
}

std::string criteria_csv(std::span<const TrialResult> results) {
  std::ostringstream out;
  out << kCriteriaHeader << '\n';
  for (const auto& trial : results) {
    for (const auto& rec : trial.records) {
      if (rec.p_table) append_table(out, trial.trial, *rec.p_table);
      if (rec.q_table) append_table(out, trial.trial, *rec.q_table);
    }
  }
  return out.str();
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.trials << ',' << r.p_mode << ',' << format_real(r.p_mode_fraction)
        << ',' << r.q_mode << ',' << format_real(r.q_mode_fraction) << '\n';
  }
  return out.str();
}

std::string summary_text(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%8s %7s %7s %8s %7s %8s\n", "n", "trials", "p_mode", "p_frac",
                "q_mode", "q_frac");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%8zu %7zu %7zu %8.3f %7zu %8.3f\n", r.n, r.trials, r.p_mode,
                  r.p_mode_fraction, r.q_mode, r.q_mode_fraction);
    out << line;
  }
  return out.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

void write_results(std::span<const TrialResult> results, const ExperimentConfig& config) {
  if (results.empty()) throw IoError("no trial results to write");
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  write_file_atomic(dir / "orders.csv", orders_csv(results));
  if (config.write_criteria) write_file_atomic(dir / "criteria.csv", criteria_csv(results));
  write_file_atomic(dir / "config.json", config_to_json(config));
  write_summary(dir, summarize(results));
}

void write_summary(const fs::path& dir, std::span<const SummaryRow> rows) {
  write_file_atomic(dir / "summary.csv", summary_csv(rows));
}

std::vector<TrialResult> read_orders(const fs::path& dir) {
  const fs::path path = dir / "orders.csv";
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kOrdersHeader) {
    throw IoError(path.string() + ": missing header '" + kOrdersHeader + "'");
  }
  std::vector<TrialResult> results;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
    }
    const auto trial = static_cast<std::size_t>(parse_unsigned(f[0], path, line_no));
    const auto seed = parse_unsigned(f[1], path, line_no);
    CheckpointRecord rec;
    rec.n = parse_unsigned(f[2], path, line_no);
    rec.p_hat = parse_unsigned(f[3], path, line_no);
    rec.q_hat = parse_unsigned(f[4], path, line_no);

    if (results.empty() || results.back().trial != trial) {
      results.push_back({trial, seed, {}});
    }
    results.back().records.push_back(rec);
  }
  return results;
}

}  // namespace qarx
