#pragma once

#include <map>
#include <string>
#include <vector>

#include "stokesdd/harness.hpp"

namespace stokesdd {

inline constexpr const char* kCodeVersion = "0.1.0";

/// A header-plus-rows result file with its metadata sidecar contents.
/// Cells are stored already formatted so that write/read is lossless.
struct ResultTable {
    std::string kind;  // ser | rate | gap | table1
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> metadata;

    /// Throws std::invalid_argument if a row's width differs from the header.
    void check() const;

    friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Ten significant digits.
std::string format_number(double v);

ResultTable ser_table(const std::vector<SerCurve>& curves, const ExperimentConfig& cfg);
ResultTable rate_table(const std::vector<RateCurve>& curves, const ExperimentConfig& cfg);
ResultTable gap_table(const std::vector<GapReport>& reports, const ExperimentConfig& cfg);
/// The six constellations of the reference table with their balanced delta^2.
ResultTable table1_table();

/// Writes `<path>` as CSV and, when metadata is present, `<stem>.meta` as
/// JSON next to it. Throws std::runtime_error on I/O failure.
void write_results(const ResultTable& table, const std::string& path);

/// Parses a CSV written by write_results (and its sidecar, if present).
ResultTable read_results(const std::string& path);

/// `<dir>/<kind>_<confighash>.csv`.
std::string result_path(const std::string& dir, const std::string& kind, const ExperimentConfig& cfg);

}  // namespace stokesdd
