#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qarx/experiment.hpp"

namespace qarx {

/// Parses a JSON config document. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved config as pretty-printed JSON, every field present.
std::string config_to_json(const ExperimentConfig& config);

/// %.17g: round-trips through strtod.
std::string format_real(double value);

std::string orders_csv(std::span<const TrialResult> results);
std::string criteria_csv(std::span<const TrialResult> results);
std::string summary_csv(std::span<const SummaryRow> rows);
std::string summary_text(std::span<const SummaryRow> rows);

/// Writes orders.csv, criteria.csv (when config.write_criteria), config.json and
/// summary.csv under config.output_dir. Each file is written to a temporary
/// sibling and renamed into place. Throws IoError with the offending path.
void write_results(std::span<const TrialResult> results, const ExperimentConfig& config);

void write_summary(const std::filesystem::path& dir, std::span<const SummaryRow> rows);

/// Reads orders.csv back into trial results (no criterion tables).
std::vector<TrialResult> read_orders(const std::filesystem::path& dir);

/// Replaces `path` with `contents` via write-then-rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace qarx
