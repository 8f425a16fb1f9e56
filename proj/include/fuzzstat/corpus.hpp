#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "fuzzstat/sequences.hpp"

namespace fuzzstat {

/// The canonical example families plus seeded random ones.
enum class ExampleName {
    squares_indicator,  // f_k = crisp 1 when k is a perfect square, else crisp 0
    exp_decay,          // f_k(x) = crisp e^(-kx) on [0,1]
    moving_hump,        // f_k(x) = crisp kx/(1+(kx)^2) on [1/(k+2), 1/(k+1)], else 0
    power_xn,           // f_k(x) = crisp x^k on [0,1]
    random_crisp,       // seeded crisp lattice values
    random_triangular,  // seeded triangular numbers with lattice corners
};

ExampleName example_from_string(const std::string& s);
std::string to_string(ExampleName name);

struct ExampleSpec {
    ExampleName name = ExampleName::squares_indicator;
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    std::uint64_t seed = 0;
};

/// Canonical spec for a name: squares and the random families default to
/// [0,1] but accept any domain; the three x-dependent counterexamples are
/// pinned to [0,1].
ExampleSpec default_spec(ExampleName name, std::uint64_t seed = 0);

FuzzyFunctionSequence instantiate(const ExampleSpec& spec, const AlphaGrid& grid);

/// Published quantities recomputed by brute force, independent of the
/// analyzer code paths.
enum class OracleQuantity {
    square_count,      // squares_indicator: #{m >= 1 : m*m <= param}
    hump_formula_sup,  // moving_hump: sup over [0,1] of (kx)/(1+(kx)^2) at k = param
    hump_arch_sup,     // moving_hump: same sup restricted to the k-th arch
    exp_corner_min,    // exp_decay: min of e^(-kx) over k in [m,2m-1], x in [0,1/(2m-1)], m = param
};

double oracle_value(const ExampleSpec& spec, OracleQuantity q, std::uint64_t param);

bool is_perfect_square(std::uint64_t k);

/// Exact rational test: x in [1/(k+2), 1/(k+1)].
bool hump_arch_contains(std::uint64_t k, double x);

/// Exact rational test: 1/x is a positive integer, i.e. x sits on a shared
/// arch boundary where two arches meet.
bool hump_on_arch_boundary(double x);

/// Machine-readable corpus description: every family with its domain, flagged
/// points, and expected reference quantities.
nlohmann::ordered_json corpus_manifest();

} // namespace fuzzstat
