#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace fuzzstat {

/// Discretization of the membership-level axis. Levels are strictly
/// increasing, start at 0, end at 1. Shared by every fuzzy number taking part
/// in one computation; copies are cheap (shared storage).
class AlphaGrid {
public:
    static constexpr std::size_t default_resolution = 257;

    static AlphaGrid uniform(std::size_t resolution = default_resolution);
    explicit AlphaGrid(std::vector<double> levels);

    std::size_t resolution() const { return levels_->size(); }
    double level(std::size_t i) const { return (*levels_)[i]; }
    const std::vector<double>& levels() const { return *levels_; }

    friend bool operator==(const AlphaGrid& a, const AlphaGrid& b) {
        return a.levels_ == b.levels_ || *a.levels_ == *b.levels_;
    }
    friend bool operator!=(const AlphaGrid& a, const AlphaGrid& b) { return !(a == b); }

private:
    std::shared_ptr<const std::vector<double>> levels_;
};

/// A fuzzy number as a stack of nested level intervals [lower[i], upper[i]],
/// one per grid level. Endpoints are piecewise linear between levels, so the
/// supremum metric below is exact for everything constructible here; numbers
/// with other endpoint shapes are approximated at grid resolution.
///
/// Construction validates the stack (nonempty intervals, nestedness, finite
/// values) and throws std::invalid_argument on violation. Instances are
/// immutable; all operations are pure and thread-safe.
class FuzzyNumber {
public:
    FuzzyNumber(AlphaGrid grid, std::vector<double> lower, std::vector<double> upper);

    /// Embedding of an ordinary real: every level interval is {value}.
    static FuzzyNumber crisp(double value, const AlphaGrid& grid);

    /// Triangular number with support [a, c] and peak b: level interval
    /// [a + t(b-a), c - t(c-b)] at level t. Requires a <= b <= c.
    static FuzzyNumber triangular(double a, double b, double c, const AlphaGrid& grid);

    const AlphaGrid& grid() const { return grid_; }
    std::size_t resolution() const { return grid_.resolution(); }
    std::span<const double> lower() const { return lower_; }
    std::span<const double> upper() const { return upper_; }
    double lower(std::size_t i) const { return lower_[i]; }
    double upper(std::size_t i) const { return upper_[i]; }

    bool is_crisp() const;

    friend bool operator==(const FuzzyNumber& a, const FuzzyNumber& b) {
        return a.grid_ == b.grid_ && a.lower_ == b.lower_ && a.upper_ == b.upper_;
    }
    friend bool operator!=(const FuzzyNumber& a, const FuzzyNumber& b) { return !(a == b); }

private:
    AlphaGrid grid_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Levelwise interval sum. Throws std::invalid_argument on grid mismatch.
FuzzyNumber add(const FuzzyNumber& x, const FuzzyNumber& y);

/// Levelwise scalar multiple; endpoints swap for negative c.
FuzzyNumber scale(double c, const FuzzyNumber& x);

/// Supremum metric: max over levels of the larger endpoint difference.
/// Symmetric, zero exactly when the stacks are identical.
/// Throws std::invalid_argument on grid mismatch.
double distance(const FuzzyNumber& x, const FuzzyNumber& y);

/// {"levels":[...],"lower":[...],"upper":[...]}; doubles survive the round
/// trip bit-for-bit.
nlohmann::ordered_json to_json(const FuzzyNumber& x);
FuzzyNumber fuzzy_from_json(const nlohmann::json& j);

} // namespace fuzzstat
