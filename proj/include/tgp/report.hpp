#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tgp/studies.hpp"

namespace tgp {

/// Resolves an output path: relative paths are placed under $TGP_OUTPUT_DIR
/// when that variable is set. Parent directories are created.
std::filesystem::path output_path(const std::string& requested);

/// `path` with its extension replaced (".jsonl", ".gp", ...).
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& extension);

/// JSON lines, one record per line, in record order.
void write_records(const std::filesystem::path& path, const std::vector<OutputRecord>& records,
                   bool with_timestamp = true);

/// Columns t, energy, dissipation_mid. Row k > 0 carries the dissipation at
/// the midpoint of the step ending at t_k; row 0 has none (nan).
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryReport& report);

/// Columns re, im, followed by a `# abscissa,<value>` line.
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumReport& spectrum);

/// Columns lambda, norm.
void write_scan_csv(const std::filesystem::path& path, const ResolventScan& scan);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);

/// One row per (boundary set, theta law, xi law).
void write_combo_csv(const std::filesystem::path& path, const ComboResult& combo);
/// The 4 x 4 abscissa table per boundary set, theta laws as rows.
void write_combo_table(const std::filesystem::path& path, const ComboResult& combo);

void write_cattaneo_csv(const std::filesystem::path& path, const CattaneoComparison& cmp);
void write_limit_csv(const std::filesystem::path& path, const LimitReport& limit);

/// gnuplot script plotting `csv` (written next to it with extension .gp).
/// `kind` is a study tag.
void write_gnuplot(const std::filesystem::path& csv, const std::string& kind);

}  // namespace tgp
