#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzstat/wide_index.hpp"

namespace fuzzstat {

/// Nonnegative weights t_k, k >= 1, with t_1 > 0. The positive lower bound on
/// the tail cannot be verified by finite computation, so the constructor takes
/// a declared bound that validation checks on a finite prefix (a surrogate, and
/// reported as such).
class WeightSequence {
public:
    using Rule = std::function<double(std::uint64_t)>;

    WeightSequence(std::string name, Rule rule, double declared_liminf,
                   std::optional<double> declared_upper = std::nullopt);

    static WeightSequence unit();
    static WeightSequence constant(double c);
    /// t_k = 1/k. Its tail bound declaration (0.1) is deliberately false: the
    /// sequence exists to demonstrate a failing liminf check.
    static WeightSequence reciprocal();

    double operator()(std::uint64_t k) const { return rule_(k); }
    const std::string& name() const { return name_; }
    double declared_liminf() const { return declared_liminf_; }
    std::optional<double> declared_upper() const { return declared_upper_; }

private:
    std::string name_;
    Rule rule_;
    double declared_liminf_;
    std::optional<double> declared_upper_;
};

/// Integer index window [lo, hi]; empty when hi < lo.
struct IndexWindow {
    wide_uint lo = 1;
    wide_uint hi = 0;
    bool empty() const { return hi < lo; }
    wide_uint size() const { return empty() ? 0 : hi - lo + 1; }
    friend bool operator==(const IndexWindow& a, const IndexWindow& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

/// Generator of per-n index windows. Constructible either from real-valued
/// edge rules (the window is [ceil(lo_rule), floor(hi_rule)]) or natively from
/// integer rules (presets), which keeps endpoints exact beyond double's
/// integer range.
///
/// Geometric presets outgrow even 128-bit indices eventually; such schemes
/// carry a representable horizon past which window() throws and validation
/// clamps its checked prefix (noted in the report).
class WindowScheme {
public:
    using RealRule = std::function<double(std::uint64_t)>;
    using WindowRule = std::function<IndexWindow(std::uint64_t)>;

    static WindowScheme from_real_rules(std::string name, RealRule lo_rule, RealRule hi_rule);
    static WindowScheme from_window_rule(std::string name, WindowRule rule,
                                         std::optional<std::uint64_t> representable_horizon = std::nullopt);

    /// Windows [1, n].
    static WindowScheme statistical();
    /// Windows [n - lambda(n) + 1, n]. Requires lambda(1) = 1, lambda
    /// nondecreasing with steps <= 1 (checked on a prefix; violations report
    /// the failing index).
    static WindowScheme lambda_windows(std::string name,
                                       std::function<std::uint64_t(std::uint64_t)> lambda,
                                       std::uint64_t check_horizon = 1024);
    /// lambda(n) = floor(sqrt(n)).
    static WindowScheme lambda_sqrt();
    /// lambda(n) = n; collapses to the statistical scheme.
    static WindowScheme lambda_linear();
    /// Windows [points(r-1) + 1, points(r)] for an increasing integer sequence
    /// with points(0) = 0 (checked on a prefix).
    static WindowScheme lacunary(std::string name,
                                 std::function<wide_uint(std::uint64_t)> points,
                                 std::optional<std::uint64_t> representable_horizon,
                                 std::uint64_t check_horizon = 64);
    /// points(r) = 2^r; representable for r <= 126.
    static WindowScheme lacunary_pow2();

    IndexWindow window(std::uint64_t n) const;

    const std::string& name() const { return name_; }
    std::optional<std::uint64_t> representable_horizon() const { return representable_horizon_; }
    bool has_real_rules() const { return static_cast<bool>(lo_rule_); }
    double lo_value(std::uint64_t n) const;
    double hi_value(std::uint64_t n) const;

private:
    std::string name_;
    WindowRule rule_;
    RealRule lo_rule_;
    RealRule hi_rule_;
    std::optional<std::uint64_t> representable_horizon_;
};

/// Weight total over one window: T = sum of t_k, k in [lo, hi].
struct WindowAccumulation {
    std::uint64_t n = 0;
    IndexWindow window;
    double total = 0.0;

    /// T^theta; theta == 1 short-circuits so the classical case stays exact.
    double total_pow(double theta) const;
};

/// Exact finite sum over the window at n. Throws std::domain_error when the
/// window is empty there, std::length_error when it is too large to iterate.
WindowAccumulation accumulate(const WeightSequence& w, const WindowScheme& s, std::uint64_t n);

/// Largest window index that iteration will accept.
inline constexpr std::uint64_t max_iterable_window = (std::uint64_t{1} << 33);

struct ValidationItem {
    std::string check;
    bool passed = false;
    bool surrogate = false;                     // finite stand-in for an asymptotic condition
    std::optional<std::uint64_t> witness;       // first failing index
    std::string detail;
};

struct ValidationReport {
    std::uint64_t horizon = 0;
    std::uint64_t checked_horizon = 0;          // may be clamped to the representable prefix
    bool clamped = false;
    std::vector<ValidationItem> items;

    bool passed() const;
    nlohmann::ordered_json to_json() const;
};

struct ValidationConfig {
    std::uint64_t weight_check_first = 1;       // prefix [first, last] for the liminf surrogate
    std::optional<std::uint64_t> weight_check_last;  // defaults to the horizon
    double gap_floor = 2.0;                     // the final gap must exceed this
};

/// Finite-horizon invariant report for a weight sequence and window scheme:
/// weight positivity and declared bounds, window edge monotonicity, hi >= lo,
/// gap growth, window nonemptiness, and total monotonicity. Asymptotic
/// hypotheses are certified only on the checked prefix; those items are
/// flagged surrogate.
ValidationReport validate(const WeightSequence& w, const WindowScheme& s,
                          std::uint64_t horizon, const ValidationConfig& cfg = {});

/// Raised by the spec-string parsers; carries the offending token.
struct SpecParseError : std::runtime_error {
    SpecParseError(const std::string& msg, std::string tok)
        : std::runtime_error(msg + " (token: \"" + tok + "\")"), token(std::move(tok)) {}
    std::string token;
};

/// Scheme spec strings:
///   "window:<expr>,<expr>"      expr: affine in n, e.g. "1", "n", "2n-1", "n+3"
///   "preset:statistical"
///   "preset:lambda:sqrt" | "preset:lambda:linear"
///   "preset:lacunary:pow2"
WindowScheme parse_scheme(const std::string& spec);

/// Weight spec strings: "weights:unit" | "weights:const:<value>" | "weights:inv_k"
WeightSequence parse_weights(const std::string& spec);

/// floor(sqrt(n)) exactly for all 64-bit n.
std::uint64_t integer_sqrt(std::uint64_t n);

} // namespace fuzzstat
