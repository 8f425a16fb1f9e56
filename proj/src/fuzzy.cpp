#include "fuzzstat/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzstat {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

AlphaGrid AlphaGrid::uniform(std::size_t resolution) {
    require(resolution >= 2, "AlphaGrid: resolution must be at least 2");
    std::vector<double> levels(resolution);
    for (std::size_t i = 0; i < resolution; ++i)
        levels[i] = static_cast<double>(i) / static_cast<double>(resolution - 1);
    levels.front() = 0.0;
    levels.back() = 1.0;
    return AlphaGrid(std::move(levels));
}

AlphaGrid::AlphaGrid(std::vector<double> levels) {
    require(levels.size() >= 2, "AlphaGrid: need at least 2 levels");
    require(levels.front() == 0.0, "AlphaGrid: first level must be 0");
    require(levels.back() == 1.0, "AlphaGrid: last level must be 1");
    for (std::size_t i = 1; i < levels.size(); ++i)
        require(levels[i - 1] < levels[i], "AlphaGrid: levels must be strictly increasing");
    levels_ = std::make_shared<const std::vector<double>>(std::move(levels));
}

FuzzyNumber::FuzzyNumber(AlphaGrid grid, std::vector<double> lower, std::vector<double> upper)
    : grid_(std::move(grid)), lower_(std::move(lower)), upper_(std::move(upper)) {
    std::size_t m = grid_.resolution();
    require(lower_.size() == m && upper_.size() == m,
            "FuzzyNumber: endpoint vectors must match grid resolution");
    for (std::size_t i = 0; i < m; ++i) {
        require(std::isfinite(lower_[i]) && std::isfinite(upper_[i]),
                "FuzzyNumber: endpoints must be finite");
        require(lower_[i] <= upper_[i], "FuzzyNumber: lower endpoint above upper");
        if (i > 0) {
            require(lower_[i - 1] <= lower_[i], "FuzzyNumber: lower endpoints must be nondecreasing");
            require(upper_[i - 1] >= upper_[i], "FuzzyNumber: upper endpoints must be nonincreasing");
        }
    }
}

FuzzyNumber FuzzyNumber::crisp(double value, const AlphaGrid& grid) {
    require(std::isfinite(value), "crisp: value must be finite");
    std::vector<double> lo(grid.resolution(), value);
    std::vector<double> hi(grid.resolution(), value);
    return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

FuzzyNumber FuzzyNumber::triangular(double a, double b, double c, const AlphaGrid& grid) {
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c),
            "triangular: endpoints must be finite");
    require(a <= b && b <= c, "triangular: need a <= b <= c");
    std::size_t m = grid.resolution();
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        double t = grid.level(i);
        lo[i] = a + t * (b - a);
        hi[i] = c - t * (c - b);
    }
    // Rounding could nudge the peak levels apart; pin the top to the peak.
    lo[m - 1] = b;
    hi[m - 1] = b;
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = std::min(lo[i], b);
        hi[i] = std::max(hi[i], b);
    }
    return FuzzyNumber(grid, std::move(lo), std::move(hi));
}

bool FuzzyNumber::is_crisp() const { return lower_ == upper_; }

FuzzyNumber add(const FuzzyNumber& x, const FuzzyNumber& y) {
    if (x.grid() != y.grid()) throw std::invalid_argument("add: grid mismatch");
    std::size_t m = x.resolution();
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = x.lower(i) + y.lower(i);
        hi[i] = x.upper(i) + y.upper(i);
    }
    return FuzzyNumber(x.grid(), std::move(lo), std::move(hi));
}

FuzzyNumber scale(double c, const FuzzyNumber& x) {
    if (!std::isfinite(c)) throw std::invalid_argument("scale: factor must be finite");
    std::size_t m = x.resolution();
    std::vector<double> lo(m), hi(m);
    if (c >= 0) {
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = c * x.lower(i);
            hi[i] = c * x.upper(i);
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = c * x.upper(i);
            hi[i] = c * x.lower(i);
        }
    }
    return FuzzyNumber(x.grid(), std::move(lo), std::move(hi));
}

double distance(const FuzzyNumber& x, const FuzzyNumber& y) {
    if (x.grid() != y.grid()) throw std::invalid_argument("distance: grid mismatch");
    double best = 0.0;
    std::size_t m = x.resolution();
    for (std::size_t i = 0; i < m; ++i) {
        best = std::max(best, std::abs(x.lower(i) - y.lower(i)));
        best = std::max(best, std::abs(x.upper(i) - y.upper(i)));
    }
    return best;
}

nlohmann::ordered_json to_json(const FuzzyNumber& x) {
    nlohmann::ordered_json j;
    j["levels"] = x.grid().levels();
    j["lower"] = std::vector<double>(x.lower().begin(), x.lower().end());
    j["upper"] = std::vector<double>(x.upper().begin(), x.upper().end());
    return j;
}

FuzzyNumber fuzzy_from_json(const nlohmann::json& j) {
    AlphaGrid grid(j.at("levels").get<std::vector<double>>());
    return FuzzyNumber(grid, j.at("lower").get<std::vector<double>>(),
                       j.at("upper").get<std::vector<double>>());
}

} // namespace fuzzstat
