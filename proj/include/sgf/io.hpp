#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgf/fitting.hpp"
#include "sgf/model.hpp"
#include "sgf/ssa.hpp"
#include "sgf/steady_state.hpp"

namespace sgf {

struct ParamsDocument {
    Rates rates;
    Contribution contribution;
    std::string label;
    std::string provenance;

    friend bool operator==(const ParamsDocument&, const ParamsDocument&) = default;
};

struct CurveRow {
    double n = 0.0;
    double s = 0.0;
    double g = 0.0;
    double f = 0.0;
    double throughput = 0.0;
    std::optional<double> speedup;
};

enum class AxisNormalization { None, FirstToOne, Range1To100 };

AxisNormalization parse_normalization(std::string_view name);

// Shortest text that round-trips, at most 17 significant digits, '.' decimal
// point regardless of locale.
std::string format_double(double v);

// Strict full-token parse; std::nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

// CSV with header "n,x"; '#' comment lines and blank lines are skipped. Rows
// are sorted by n. Throws ParseError with 1-based line numbers.
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset(std::string_view text);
std::string serialize_dataset(const Dataset& data);

Dataset normalize_axis(const Dataset& data, AxisNormalization mode);

std::string params_to_json(const ParamsDocument& doc, int indent = 2);
ParamsDocument params_from_json(std::string_view text);

std::vector<CurveRow> curve_rows(const SweepResult& sweep);
std::string curve_csv(const std::vector<CurveRow>& rows);
std::string ssa_stats_csv(const EnsembleStats& stats);
std::string fixed_point_json(const FixedPoint& fp, const Contribution& c);
std::string fit_result_json(const FitResult& fit, const std::string& label);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Relative output paths are resolved against $SGF_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

}  // namespace sgf
