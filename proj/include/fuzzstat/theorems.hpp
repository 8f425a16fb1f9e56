#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fuzzstat/analyzer.hpp"

namespace fuzzstat {

/// Randomized finite-instance checks of the convergence theorems in their
/// set-containment form, which holds exactly at every finite n. Every check
/// compares exact counts or flag arrays against a brute-force oracle that
/// re-evaluates deviations with direct loops.
struct TheoremSuiteConfig {
    std::uint64_t seed = 42;
    std::uint64_t n_max = 64;
    std::size_t crisp_instances = 2;       // random crisp family pairs
    std::size_t triangular_instances = 1;  // random triangular family pairs
    std::size_t alpha_resolution = 33;
    std::vector<double> epsilons{0.25, 0.5, 1.0};
    std::vector<double> scalars{2.0, -3.0, 0.5};
    // (theta, gamma) with theta <= gamma: density at gamma must not exceed
    // density at theta while T >= 1.
    std::vector<std::pair<double, double>> order_pairs{{0.25, 0.75}, {0.4, 0.9}, {0.5, 1.0}};
};

struct TheoremViolation {
    std::string property;
    nlohmann::ordered_json witness;
};

struct TheoremSuiteReport {
    std::uint64_t seed = 0;
    std::uint64_t n_max = 0;
    std::uint64_t checks_run = 0;
    std::vector<TheoremViolation> violations;

    bool passed() const { return violations.empty(); }
    nlohmann::ordered_json to_json() const;
};

TheoremSuiteReport run_theorem_suite(const TheoremSuiteConfig& cfg);

} // namespace fuzzstat
