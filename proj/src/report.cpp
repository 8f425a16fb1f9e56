#include "fuzzstat/report.hpp"

#include <charconv>
#include <system_error>

namespace fuzzstat {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json mode_report(const std::string& scheme, const std::string& weights,
                                   const DensityProfile& profile, const ModeVerdict& verdict,
                                   const nlohmann::ordered_json& verdict_extras) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(verdict.mode);
    j["theta"] = profile.theta;
    j["epsilon"] = profile.epsilon;
    j["index_mode"] = to_string(profile.index_mode);
    j["scheme"] = scheme;
    j["weights"] = weights;
    auto entries = nlohmann::ordered_json::array();
    for (const ProfileEntry& e : profile.entries)
        entries.push_back({{"n", e.n}, {"T", e.total}, {"count", e.count}, {"density", e.density}});
    j["entries"] = std::move(entries);
    nlohmann::ordered_json v;
    v["decision"] = to_string(verdict.decision);
    v["tail_value"] = verdict.tail_value;
    v["tolerance"] = verdict.tolerance;
    v["n_max"] = verdict.n_max;
    v["heuristic"] = true;
    for (const auto& [key, val] : verdict_extras.items()) v[key] = val;
    j["verdict"] = std::move(v);
    return j;
}

void append_profile_rows(std::vector<CsvRow>& rows, const std::string& mode,
                         std::optional<double> x, const DensityProfile& profile) {
    rows.reserve(rows.size() + profile.entries.size());
    for (const ProfileEntry& e : profile.entries) {
        CsvRow r;
        r.mode = mode;
        r.epsilon = profile.epsilon;
        r.x = x;
        r.n = e.n;
        r.total = e.total;
        r.count = e.count;
        r.density = e.density;
        rows.push_back(std::move(r));
    }
}

std::string render_csv(const std::vector<CsvRow>& rows) {
    std::string out = "mode,epsilon,x,n,T,count,density\n";
    for (const CsvRow& r : rows) {
        out += r.mode;
        out += ',';
        out += format_double(r.epsilon);
        out += ',';
        if (r.x) out += format_double(*r.x);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += format_double(r.total);
        out += ',';
        out += std::to_string(r.count);
        out += ',';
        out += format_double(r.density);
        out += '\n';
    }
    return out;
}

} // namespace fuzzstat
