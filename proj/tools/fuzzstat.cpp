// Command-line front end: analyze corpus or user-specified families, validate
// window schemes and weights, run the theorem containment suite, and emit
// deterministic CSV/JSON reports.
//
// Exit codes: 0 success, 2 configuration or parse error, 3 validation
// failure, 4 theorem-suite violation.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzstat/analyzer.hpp"
#include "fuzzstat/corpus.hpp"
#include "fuzzstat/report.hpp"
#include "fuzzstat/schemes.hpp"
#include "fuzzstat/theorems.hpp"

namespace fs = std::filesystem;
using namespace fuzzstat;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_validation = 3;
constexpr int exit_theorem = 4;

struct RunConfig {
    std::string example;  // set by --example or --family
    std::vector<double> domain;
    std::string scheme_spec = "preset:statistical";
    std::string weights_spec = "weights:unit";
    double theta = 1.0;
    std::vector<double> epsilons;  // defaults to {0.5}
    std::uint64_t n_max = 1000;
    std::size_t grid_res = SpatialGrid::default_resolution;
    std::size_t alpha_res = AlphaGrid::default_resolution;
    std::string index_mode = "prefix";
    std::string mode_filter = "all";
    double tolerance = 0.05;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
    std::string format = "both";
    bool per_x = false;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    write_file(path, j.dump(2) + "\n");
}

double density_value(std::uint64_t count, double total, double theta) {
    const double denom = (theta == 1.0) ? total : std::pow(total, theta);
    return static_cast<double>(count) / denom;
}

int run_analyze(const RunConfig& cfg) {
    const WindowScheme scheme = parse_scheme(cfg.scheme_spec);
    const WeightSequence weights = parse_weights(cfg.weights_spec);
    const IndexMode mode = parse_index_mode(cfg.index_mode);

    if (cfg.example.empty()) {
        std::cerr << "analyze: --example or --family is required\n";
        return exit_config;
    }
    ExampleSpec spec = default_spec(example_from_string(cfg.example), cfg.seed);
    if (!cfg.domain.empty()) {
        if (cfg.domain.size() != 2 || !(cfg.domain[0] < cfg.domain[1])) {
            std::cerr << "analyze: --domain expects a,b with a < b\n";
            return exit_config;
        }
        spec.domain_lo = cfg.domain[0];
        spec.domain_hi = cfg.domain[1];
    }

    std::vector<double> epsilons = cfg.epsilons.empty() ? std::vector<double>{0.5} : cfg.epsilons;

    // Configuration problems surface before any file is written.
    const AlphaGrid alpha = AlphaGrid::uniform(cfg.alpha_res);
    const SpatialGrid grid = SpatialGrid::uniform(spec.domain_lo, spec.domain_hi, cfg.grid_res);
    const FuzzyFunctionSequence seq = instantiate(spec, alpha);
    if (scheme.representable_horizon() && *scheme.representable_horizon() < cfg.n_max) {
        std::cerr << "analyze: scheme " << scheme.name() << " is only evaluable up to n = "
                  << *scheme.representable_horizon() << ", below --nmax " << cfg.n_max << "\n";
        return exit_config;
    }

    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    // Scheme/weight validation gates the run; its report is always written.
    const std::uint64_t horizon =
        (cfg.n_max > std::numeric_limits<std::uint64_t>::max() / 10) ? cfg.n_max : cfg.n_max * 10;
    const ValidationReport validation = validate(weights, scheme, horizon);
    write_json(out_dir / "validation.json", validation.to_json());
    if (!validation.passed()) {
        for (const ValidationItem& item : validation.items)
            if (!item.passed)
                std::cerr << "validation failed: " << item.check
                          << (item.detail.empty() ? "" : " (" + item.detail + ")") << "\n";
        return exit_validation;
    }

    const bool want_pointwise = cfg.mode_filter == "all" || cfg.mode_filter == "pointwise";
    const bool want_uniform = cfg.mode_filter == "all" || cfg.mode_filter == "uniform";
    const bool want_equi = cfg.mode_filter == "all" || cfg.mode_filter == "equi";

    auto reports = nlohmann::ordered_json::array();
    std::vector<CsvRow> rows;

    for (double eps : epsilons) {
        ClassifyOptions opt;
        opt.theta = cfg.theta;
        opt.epsilon = eps;
        opt.n_max = cfg.n_max;
        opt.index_mode = mode;
        opt.tolerance = cfg.tolerance;
        opt.keep_per_x = cfg.per_x;
        const Classification cls = classify(seq, grid, weights, scheme, opt);

        if (want_pointwise) {
            nlohmann::ordered_json extras;
            extras["x"] = cls.pointwise_x;
            auto flagged = nlohmann::ordered_json::array();
            for (const PointVerdict& pv : cls.flagged_verdicts)
                flagged.push_back({{"x", pv.x},
                                   {"note", pv.note},
                                   {"decision", to_string(pv.decision)},
                                   {"tail_value", pv.tail_value}});
            extras["flagged_points"] = std::move(flagged);
            reports.push_back(mode_report(scheme.name(), weights.name(), cls.pointwise_profile,
                                          cls.pointwise, extras));
            if (cfg.per_x) {
                for (std::size_t i = 0; i < grid.size(); ++i)
                    for (std::size_t j = 0; j < cls.per_x_counts[i].size(); ++j) {
                        CsvRow r;
                        r.mode = "pointwise";
                        r.epsilon = eps;
                        r.x = grid.point(i);
                        r.n = j + 1;
                        r.total = cls.pointwise_profile.entries[j].total;
                        r.count = cls.per_x_counts[i][j];
                        r.density = density_value(r.count, r.total, cfg.theta);
                        rows.push_back(std::move(r));
                    }
            } else {
                append_profile_rows(rows, "pointwise", cls.pointwise_x, cls.pointwise_profile);
            }
            std::cout << "eps " << format_double(eps) << " verdict pointwise: "
                      << to_string(cls.pointwise.decision)
                      << " (tail_value=" << format_double(cls.pointwise.tail_value)
                      << ", x=" << format_double(cls.pointwise_x) << ")\n";
            for (const PointVerdict& pv : cls.flagged_verdicts)
                std::cout << "eps " << format_double(eps) << " flagged x="
                          << format_double(pv.x) << ": " << to_string(pv.decision) << " ("
                          << pv.note << ")\n";
        }
        if (want_uniform) {
            reports.push_back(mode_report(scheme.name(), weights.name(), cls.uniform_profile,
                                          cls.uniform, nlohmann::ordered_json::object()));
            append_profile_rows(rows, "uniform", std::nullopt, cls.uniform_profile);
            std::cout << "eps " << format_double(eps) << " verdict uniform: "
                      << to_string(cls.uniform.decision)
                      << " (tail_value=" << format_double(cls.uniform.tail_value) << ")\n";
        }
        if (want_equi) {
            reports.push_back(mode_report(scheme.name(), weights.name(), cls.equi_profile,
                                          cls.equi, nlohmann::ordered_json::object()));
            append_profile_rows(rows, "equi", std::nullopt, cls.equi_profile);
            std::cout << "eps " << format_double(eps) << " verdict equi: "
                      << to_string(cls.equi.decision)
                      << " (tail_value=" << format_double(cls.equi.tail_value) << ")\n";
        }
    }

    if (cfg.format == "json" || cfg.format == "both")
        write_json(out_dir / "report.json", reports);
    if (cfg.format == "csv" || cfg.format == "both")
        write_file(out_dir / "profile.csv", render_csv(rows));
    return exit_ok;
}

int run_validate(const std::vector<std::string>& specs, std::uint64_t horizon,
                 const std::string& out_dir) {
    // Positional spec strings are routed by prefix; whichever kind is absent
    // falls back to its default (statistical windows, unit weights).
    std::string scheme_spec = "preset:statistical";
    std::string weights_spec = "weights:unit";
    for (const std::string& s : specs) {
        if (s.rfind("weights:", 0) == 0)
            weights_spec = s;
        else
            scheme_spec = s;
    }
    const WindowScheme scheme = parse_scheme(scheme_spec);
    const WeightSequence weights = parse_weights(weights_spec);
    const ValidationReport report = validate(weights, scheme, horizon);
    fs::create_directories(out_dir);
    write_json(fs::path(out_dir) / "validation.json", report.to_json());
    for (const ValidationItem& item : report.items)
        std::cout << (item.passed ? "pass " : "FAIL ") << item.check
                  << (item.surrogate ? " [finite surrogate]" : "")
                  << (item.detail.empty() ? "" : " (" + item.detail + ")") << "\n";
    std::cout << (report.passed() ? "validation passed" : "validation failed") << " at horizon "
              << report.checked_horizon
              << (report.clamped ? " (clamped to the representable prefix)" : "") << "\n";
    return report.passed() ? exit_ok : exit_validation;
}

int run_theorems(std::uint64_t seed, std::uint64_t n_max, const std::string& out_dir) {
    TheoremSuiteConfig cfg;
    cfg.seed = seed;
    cfg.n_max = n_max;
    const TheoremSuiteReport report = run_theorem_suite(cfg);
    fs::create_directories(out_dir);
    write_json(fs::path(out_dir) / "theorems.json", report.to_json());
    std::cout << "theorem suite: " << report.checks_run << " checks, "
              << report.violations.size() << " violations (seed " << seed << ", n_max " << n_max
              << ")\n";
    for (const TheoremViolation& v : report.violations)
        std::cout << "violation: " << v.property << " witness " << v.witness.dump() << "\n";
    return report.passed() ? exit_ok : exit_theorem;
}

int run_manifest(const std::string& out_dir) {
    const nlohmann::ordered_json manifest = corpus_manifest();
    fs::create_directories(out_dir);
    write_json(fs::path(out_dir) / "corpus_manifest.json", manifest);
    std::cout << manifest.dump(2) << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted windowed-density convergence analyzer for fuzzy function families"};
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Profile a family and print per-mode convergence verdicts");
    CLI::Option* opt_example =
        analyze->add_option("--example", cfg.example, "Corpus example name");
    analyze->add_option("--family", cfg.example, "Family name (alias of --example)")
        ->excludes(opt_example);
    analyze->add_option("--domain", cfg.domain, "Domain override a,b (families that allow it)")
        ->delimiter(',');
    analyze->add_option("--scheme", cfg.scheme_spec, "Scheme spec, e.g. window:n,2n-1");
    analyze->add_option("--weights", cfg.weights_spec, "Weights spec, e.g. weights:unit");
    analyze->add_option("--theta", cfg.theta, "Density order in (0,1]");
    analyze->add_option("--eps", cfg.epsilons, "Threshold(s); repeatable");
    analyze->add_option("--nmax", cfg.n_max, "Largest window index n");
    analyze->add_option("--grid", cfg.grid_res, "Spatial grid resolution");
    analyze->add_option("--alpha-grid", cfg.alpha_res, "Alpha grid resolution");
    analyze->add_option("--index-mode", cfg.index_mode, "prefix | window")
        ->check(CLI::IsMember({"prefix", "window"}));
    analyze->add_option("--mode", cfg.mode_filter, "Restrict reported modes")
        ->check(CLI::IsMember({"all", "pointwise", "uniform", "equi"}));
    analyze->add_option("--tolerance", cfg.tolerance, "Verdict tail tolerance in (0, 0.5)");
    analyze->add_option("--seed", cfg.seed, "Seed for the random families");
    analyze->add_option("--out", cfg.out_dir, "Output directory");
    analyze->add_option("--format", cfg.format, "csv | json | both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    analyze->add_flag("--per-x", cfg.per_x, "Emit one CSV row per (n, x) instead of aggregates");

    std::vector<std::string> v_specs;
    std::uint64_t v_horizon = 10000;
    std::string v_out = ".";
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check scheme and weight invariants on a finite horizon");
    validate_cmd->add_option("specs", v_specs, "Scheme and/or weights spec strings")
        ->required()
        ->expected(1, 2);
    validate_cmd->add_option("--horizon", v_horizon, "Largest n checked");
    validate_cmd->add_option("--out", v_out, "Output directory");

    std::uint64_t t_seed = 42;
    std::uint64_t t_nmax = 64;
    std::string t_out = ".";
    CLI::App* theorems_cmd =
        app.add_subcommand("theorems", "Run the randomized containment suite");
    theorems_cmd->add_option("--seed", t_seed, "Suite seed");
    theorems_cmd->add_option("--nmax", t_nmax, "Window horizon per instance");
    theorems_cmd->add_option("--out", t_out, "Output directory");

    std::string m_out = ".";
    CLI::App* manifest_cmd =
        app.add_subcommand("manifest", "Print the corpus manifest");
    manifest_cmd->add_option("--out", m_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*analyze) return run_analyze(cfg);
        if (*validate_cmd) return run_validate(v_specs, v_horizon, v_out);
        if (*theorems_cmd) return run_theorems(t_seed, t_nmax, t_out);
        if (*manifest_cmd) return run_manifest(m_out);
    } catch (const SpecParseError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}
