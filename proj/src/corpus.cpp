#include "fuzzstat/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "fuzzstat/schemes.hpp"
#include "fuzzstat/wide_index.hpp"

namespace fuzzstat {

namespace {

// sign of x*m - 1, exact for finite x >= 0 and m >= 1 (m below 2^60).
int cmp_scaled_vs_one(double x, std::uint64_t m) {
    if (x <= 0.0) return -1;
    int e = 0;
    const double fr = std::frexp(x, &e);
    const auto mant = static_cast<std::uint64_t>(std::ldexp(fr, 53));  // x = mant * 2^(e-53)
    const int shift = 53 - e;
    if (shift < 0) return 1;  // x >= 2^53, product certainly above 1
    const wide_uint lhs = wide_uint{mant} * m;
    if (shift >= 127) return -1;  // rhs beyond range, lhs < 2^113
    const wide_uint rhs = wide_uint{1} << shift;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt, std::uint64_t k, double x) {
    std::uint64_t h = splitmix64(seed ^ salt);
    h = splitmix64(h ^ k);
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x));
    return h;
}

// Multiples of 2^-10 in [-8, 8]: metric arithmetic on these values is exact.
double lattice_value(std::uint64_t h) {
    return (static_cast<double>(h % 16385) - 8192.0) / 1024.0;
}

// Multiples of 2^-11 in [0, 4].
double lattice_spread(std::uint64_t h) {
    return static_cast<double>(h % 8193) / 2048.0;
}

double hump_formula(std::uint64_t k, double x) {
    const double u = static_cast<double>(k) * x;
    return u / (1.0 + u * u);
}

void require_unit_domain(const ExampleSpec& spec, const char* name) {
    if (spec.domain_lo != 0.0 || spec.domain_hi != 1.0)
        throw std::invalid_argument(std::string(name) + ": domain is fixed to [0,1]");
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 300 && (b - a) > 1e-14; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    double best = f(0.5 * (a + b));
    best = std::max(best, std::max(f(lo), f(hi)));
    return best;
}

} // namespace

ExampleName example_from_string(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), '-', '_');
    if (t == "squares" || t == "squares_indicator") return ExampleName::squares_indicator;
    if (t == "exp_decay") return ExampleName::exp_decay;
    if (t == "moving_hump") return ExampleName::moving_hump;
    if (t == "power_xn") return ExampleName::power_xn;
    if (t == "random_crisp") return ExampleName::random_crisp;
    if (t == "random_triangular") return ExampleName::random_triangular;
    throw SpecParseError("unknown example name", s);
}

std::string to_string(ExampleName name) {
    switch (name) {
        case ExampleName::squares_indicator: return "squares_indicator";
        case ExampleName::exp_decay: return "exp_decay";
        case ExampleName::moving_hump: return "moving_hump";
        case ExampleName::power_xn: return "power_xn";
        case ExampleName::random_crisp: return "random_crisp";
        case ExampleName::random_triangular: return "random_triangular";
    }
    return "squares_indicator";
}

ExampleSpec default_spec(ExampleName name, std::uint64_t seed) {
    return ExampleSpec{name, 0.0, 1.0, seed};
}

bool is_perfect_square(std::uint64_t k) {
    const std::uint64_t r = integer_sqrt(k);
    return r * r == k;
}

bool hump_arch_contains(std::uint64_t k, double x) {
    return cmp_scaled_vs_one(x, k + 2) >= 0 && cmp_scaled_vs_one(x, k + 1) <= 0;
}

bool hump_on_arch_boundary(double x) {
    if (!(x > 0.0) || x > 1.0) return false;
    const double q = 1.0 / x;
    if (!(q >= 1.0) || q > 9.007199254740992e15) return false;
    const auto qi = static_cast<std::uint64_t>(std::llround(q));
    return qi >= 1 && cmp_scaled_vs_one(x, qi) == 0;
}

FuzzyFunctionSequence instantiate(const ExampleSpec& spec, const AlphaGrid& grid) {
    switch (spec.name) {
        case ExampleName::squares_indicator: {
            auto seq = FuzzyFunctionSequence::crisp_valued(
                "squares_indicator", spec.domain_lo, spec.domain_hi, grid,
                [](std::uint64_t k, double) { return is_perfect_square(k) ? 1.0 : 0.0; },
                [](double) { return 0.0; });
            seq.set_constant_in_x(true);
            return seq;
        }
        case ExampleName::exp_decay: {
            require_unit_domain(spec, "exp_decay");
            auto seq = FuzzyFunctionSequence::crisp_valued(
                "exp_decay", 0.0, 1.0, grid,
                [](std::uint64_t k, double x) { return std::exp(-static_cast<double>(k) * x); },
                [](double) { return 0.0; });
            seq.add_flagged_point(
                0.0, "pointwise limit here is the crisp unit, not the candidate limit");
            return seq;
        }
        case ExampleName::moving_hump: {
            require_unit_domain(spec, "moving_hump");
            auto seq = FuzzyFunctionSequence::crisp_valued(
                "moving_hump", 0.0, 1.0, grid,
                [](std::uint64_t k, double x) {
                    return hump_arch_contains(k, x) ? hump_formula(k, x) : 0.0;
                },
                [](double) { return 0.0; });
            // The k-th member lives on a shrinking arch a fixed spatial grid
            // eventually misses; these points keep the realized sup honest.
            // One of each nextafter pair is inside the arch whichever way the
            // endpoint division rounded.
            seq.set_sup_hints([](std::uint64_t k) {
                const double lo = 1.0 / static_cast<double>(k + 2);
                const double hi = 1.0 / static_cast<double>(k + 1);
                return std::vector<double>{lo, std::nextafter(lo, 1.0),
                                           std::nextafter(hi, 0.0), hi};
            });
            return seq;
        }
        case ExampleName::power_xn: {
            require_unit_domain(spec, "power_xn");
            auto seq = FuzzyFunctionSequence::crisp_valued(
                "power_xn", 0.0, 1.0, grid,
                [](std::uint64_t k, double x) {
                    return std::pow(x, static_cast<double>(k));
                },
                [](double x) { return x == 1.0 ? 1.0 : 0.0; });
            seq.add_flagged_point(1.0, "candidate limit jumps here; every member is continuous");
            return seq;
        }
        case ExampleName::random_crisp: {
            const std::uint64_t seed = spec.seed;
            auto seq = FuzzyFunctionSequence::crisp_valued(
                "random_crisp", spec.domain_lo, spec.domain_hi, grid,
                [seed](std::uint64_t k, double x) { return lattice_value(mix(seed, 1, k, x)); },
                [seed](double x) { return lattice_value(mix(seed, 1, 0, x)); });
            seq.set_params({{"seed", seed}});
            return seq;
        }
        case ExampleName::random_triangular: {
            const std::uint64_t seed = spec.seed;
            const AlphaGrid g = grid;
            auto make = [seed, g](std::uint64_t k, double x) {
                const double c = lattice_value(mix(seed, 2, k, x));
                const double s = lattice_spread(mix(seed, 3, k, x));
                return FuzzyNumber::triangular(c - s, c, c + s, g);
            };
            FuzzyFunctionSequence seq(
                "random_triangular", spec.domain_lo, spec.domain_hi, grid,
                [make](std::uint64_t k, double x) { return make(k, x); },
                [make](double x) { return make(0, x); });
            seq.set_params({{"seed", seed}});
            return seq;
        }
    }
    throw std::invalid_argument("instantiate: unknown example name");
}

double oracle_value(const ExampleSpec& spec, OracleQuantity q, std::uint64_t param) {
    switch (q) {
        case OracleQuantity::square_count: {
            if (spec.name != ExampleName::squares_indicator)
                throw std::invalid_argument("square_count applies to squares_indicator");
            std::uint64_t count = 0;
            for (std::uint64_t m = 1; m < (std::uint64_t{1} << 32) && m * m <= param; ++m)
                ++count;
            return static_cast<double>(count);
        }
        case OracleQuantity::hump_formula_sup: {
            if (spec.name != ExampleName::moving_hump)
                throw std::invalid_argument("hump_formula_sup applies to moving_hump");
            const std::uint64_t k = param;
            return golden_max([k](double x) { return hump_formula(k, x); }, 0.0, 1.0);
        }
        case OracleQuantity::hump_arch_sup: {
            if (spec.name != ExampleName::moving_hump)
                throw std::invalid_argument("hump_arch_sup applies to moving_hump");
            const std::uint64_t k = param;
            const double lo = 1.0 / static_cast<double>(k + 2);
            const double hi = 1.0 / static_cast<double>(k + 1);
            return golden_max([k](double x) { return hump_formula(k, x); }, lo, hi);
        }
        case OracleQuantity::exp_corner_min: {
            if (spec.name != ExampleName::exp_decay)
                throw std::invalid_argument("exp_corner_min applies to exp_decay");
            const std::uint64_t m = param;
            if (m < 1) throw std::invalid_argument("exp_corner_min: m must be at least 1");
            const double x_hi = 1.0 / static_cast<double>(2 * m - 1);
            double best = 1.0;
            for (std::uint64_t k : {m, m + (m - 1) / 2, 2 * m - 1})
                for (double x : {0.0, 0.5 * x_hi, x_hi})
                    best = std::min(best, std::exp(-static_cast<double>(k) * x));
            return best;
        }
    }
    throw std::invalid_argument("oracle_value: unknown quantity");
}

nlohmann::ordered_json corpus_manifest() {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    out.push_back({{"name", "squares_indicator"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", true},
                   {"flagged_points", nlohmann::ordered_json::array()},
                   {"expected",
                    {{"prefix_count_rule", "floor(sqrt(T))"},
                     {"count_at_T_10000", 100}}}});
    out.push_back({{"name", "exp_decay"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", false},
                   {"flagged_points", {0.0}},
                   {"expected",
                    {{"field_value_on_initial_segment", 1.0},
                     {"corner_min", std::exp(-1.0)},
                     {"corner_min_lower_bound", 1.0 / 3.0}}}});
    out.push_back({{"name", "moving_hump"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", false},
                   {"flagged_points", nlohmann::ordered_json::array()},
                   {"expected",
                    {{"formula_sup", 0.5},
                     {"field_bound_off_boundary", "1/m"},
                     {"field_bound_on_boundary", "2/m"}}}});
    out.push_back({{"name", "power_xn"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", false},
                   {"flagged_points", {1.0}},
                   {"expected", {{"limit_jump_at_1", 1.0}}}});
    out.push_back({{"name", "random_crisp"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", false},
                   {"flagged_points", nlohmann::ordered_json::array()},
                   {"params", {{"seed", "caller-chosen"}}},
                   {"expected", nlohmann::ordered_json::object()}});
    out.push_back({{"name", "random_triangular"},
                   {"domain", {0.0, 1.0}},
                   {"constant_in_x", false},
                   {"flagged_points", nlohmann::ordered_json::array()},
                   {"params", {{"seed", "caller-chosen"}}},
                   {"expected", nlohmann::ordered_json::object()}});
    return out;
}

} // namespace fuzzstat
