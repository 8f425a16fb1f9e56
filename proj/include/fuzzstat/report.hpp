#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzstat/analyzer.hpp"

namespace fuzzstat {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// One aggregate mode report with a fixed key order, so identical runs
/// serialize byte for byte:
///   {"mode","theta","epsilon","index_mode","scheme","weights",
///    "entries":[{"n","T","count","density"}],"verdict":{...}}
/// The verdict always carries decision/tail_value/tolerance/n_max and
/// heuristic=true; extras (worst x, flagged points) are appended after.
nlohmann::ordered_json mode_report(const std::string& scheme, const std::string& weights,
                                   const DensityProfile& profile, const ModeVerdict& verdict,
                                   const nlohmann::ordered_json& verdict_extras);

/// CSV mirror of the profile tables. Header mode,epsilon,x,n,T,count,density;
/// x is empty on grid-aggregate rows (uniform, equi); LF line endings with a
/// trailing newline.
struct CsvRow {
    std::string mode;
    double epsilon = 0.0;
    std::optional<double> x;
    std::uint64_t n = 0;
    double total = 0.0;
    std::uint64_t count = 0;
    double density = 0.0;
};

void append_profile_rows(std::vector<CsvRow>& rows, const std::string& mode,
                         std::optional<double> x, const DensityProfile& profile);

std::string render_csv(const std::vector<CsvRow>& rows);

} // namespace fuzzstat
