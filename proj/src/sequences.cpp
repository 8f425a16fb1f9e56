#include "fuzzstat/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzstat {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

SpatialGrid SpatialGrid::uniform(double lo, double hi, std::size_t resolution) {
    require(std::isfinite(lo) && std::isfinite(hi), "SpatialGrid: endpoints must be finite");
    require(lo < hi, "SpatialGrid: need lo < hi");
    require(resolution >= 2, "SpatialGrid: need at least 2 points");
    std::vector<double> pts(resolution);
    const double span = hi - lo;
    const auto steps = static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i < resolution; ++i)
        pts[i] = lo + span * (static_cast<double>(i) / steps);
    pts.front() = lo;
    pts.back() = hi;
    return SpatialGrid(std::move(pts));
}

SpatialGrid::SpatialGrid(std::vector<double> points) : points_(std::move(points)) {
    require(!points_.empty(), "SpatialGrid: no points");
    for (double p : points_)
        require(std::isfinite(p), "SpatialGrid: points must be finite");
    for (std::size_t i = 1; i < points_.size(); ++i)
        require(points_[i - 1] < points_[i], "SpatialGrid: points must be strictly increasing");
}

SpatialGrid SpatialGrid::restrict_to(double lo, double hi) const {
    require(lo <= hi, "SpatialGrid::restrict_to: need lo <= hi");
    std::vector<double> kept;
    for (double p : points_)
        if (p >= lo && p <= hi) kept.push_back(p);
    require(!kept.empty(), "SpatialGrid::restrict_to: no grid points in the subinterval");
    return SpatialGrid(std::move(kept));
}

FuzzyFunctionSequence::FuzzyFunctionSequence(std::string name, double domain_lo,
                                             double domain_hi, AlphaGrid grid,
                                             MemberRule member, LimitRule limit)
    : name_(std::move(name)), domain_lo_(domain_lo), domain_hi_(domain_hi),
      grid_(std::move(grid)), member_(std::move(member)), limit_(std::move(limit)) {
    require(std::isfinite(domain_lo_) && std::isfinite(domain_hi_),
            "FuzzyFunctionSequence: domain endpoints must be finite");
    require(domain_lo_ < domain_hi_, "FuzzyFunctionSequence: need domain_lo < domain_hi");
    require(static_cast<bool>(member_), "FuzzyFunctionSequence: missing member rule");
    require(static_cast<bool>(limit_), "FuzzyFunctionSequence: missing limit rule");
}

FuzzyFunctionSequence FuzzyFunctionSequence::crisp_valued(std::string name, double domain_lo,
                                                          double domain_hi, AlphaGrid grid,
                                                          ScalarMemberRule member,
                                                          ScalarLimitRule limit) {
    require(static_cast<bool>(member), "FuzzyFunctionSequence: missing member rule");
    require(static_cast<bool>(limit), "FuzzyFunctionSequence: missing limit rule");
    AlphaGrid g = grid;
    FuzzyFunctionSequence seq(
        std::move(name), domain_lo, domain_hi, grid,
        [member, g](std::uint64_t k, double x) { return FuzzyNumber::crisp(member(k, x), g); },
        [limit, g](double x) { return FuzzyNumber::crisp(limit(x), g); });
    seq.scalar_member_ = std::move(member);
    seq.scalar_limit_ = std::move(limit);
    return seq;
}

FuzzyFunctionSequence& FuzzyFunctionSequence::set_constant_in_x(bool v) {
    constant_in_x_ = v;
    return *this;
}

FuzzyFunctionSequence& FuzzyFunctionSequence::set_sup_hints(HintRule h) {
    hints_ = std::move(h);
    return *this;
}

FuzzyFunctionSequence& FuzzyFunctionSequence::add_flagged_point(double x, std::string note) {
    check_domain(x);
    flagged_.push_back(FlaggedPoint{x, std::move(note)});
    return *this;
}

FuzzyFunctionSequence& FuzzyFunctionSequence::set_params(nlohmann::ordered_json params) {
    params_ = std::move(params);
    return *this;
}

void FuzzyFunctionSequence::check_domain(double x) const {
    if (!(x >= domain_lo_ && x <= domain_hi_))
        throw std::invalid_argument(name_ + ": x outside [" + std::to_string(domain_lo_) + ", " +
                                    std::to_string(domain_hi_) + "]");
}

FuzzyNumber FuzzyFunctionSequence::member(std::uint64_t k, double x) const {
    check_domain(x);
    return member_(k, x);
}

FuzzyNumber FuzzyFunctionSequence::limit(double x) const {
    check_domain(x);
    return limit_(x);
}

double FuzzyFunctionSequence::member_value(std::uint64_t k, double x) const {
    if (!scalar_member_)
        throw std::logic_error(name_ + ": not a crisp-valued family");
    check_domain(x);
    return scalar_member_(k, x);
}

double FuzzyFunctionSequence::limit_value(double x) const {
    if (!scalar_limit_)
        throw std::logic_error(name_ + ": not a crisp-valued family");
    check_domain(x);
    return scalar_limit_(x);
}

double FuzzyFunctionSequence::deviation(std::uint64_t k, double x) const {
    check_domain(x);
    if (scalar_member_) return std::abs(scalar_member_(k, x) - scalar_limit_(x));
    return distance(member_(k, x), limit_(x));
}

std::vector<double> FuzzyFunctionSequence::sup_hints(std::uint64_t k) const {
    if (!hints_) return {};
    std::vector<double> raw = hints_(k);
    std::vector<double> kept;
    kept.reserve(raw.size());
    for (double x : raw)
        if (x >= domain_lo_ && x <= domain_hi_) kept.push_back(x);
    return kept;
}

FuzzyFunctionSequence sum_of(const FuzzyFunctionSequence& f, const FuzzyFunctionSequence& g) {
    require(f.domain_lo() == g.domain_lo() && f.domain_hi() == g.domain_hi(),
            "sum_of: domain mismatch");
    require(f.grid() == g.grid(), "sum_of: alpha grid mismatch");
    std::string name = f.name() + "+" + g.name();
    if (f.has_scalar_rules() && g.has_scalar_rules()) {
        // copy-capture the factors so the sum owns its parts
        FuzzyFunctionSequence fc = f, gc = g;
        return FuzzyFunctionSequence::crisp_valued(
            std::move(name), f.domain_lo(), f.domain_hi(), f.grid(),
            [fc, gc](std::uint64_t k, double x) {
                return fc.member_value(k, x) + gc.member_value(k, x);
            },
            [fc, gc](double x) { return fc.limit_value(x) + gc.limit_value(x); });
    }
    FuzzyFunctionSequence fc = f, gc = g;
    return FuzzyFunctionSequence(
        std::move(name), f.domain_lo(), f.domain_hi(), f.grid(),
        [fc, gc](std::uint64_t k, double x) { return add(fc.member(k, x), gc.member(k, x)); },
        [fc, gc](double x) { return add(fc.limit(x), gc.limit(x)); });
}

FuzzyFunctionSequence scaled(double c, const FuzzyFunctionSequence& f) {
    require(std::isfinite(c), "scaled: scalar must be finite");
    std::string name = std::to_string(c) + "*" + f.name();
    if (f.has_scalar_rules()) {
        FuzzyFunctionSequence fc = f;
        return FuzzyFunctionSequence::crisp_valued(
            std::move(name), f.domain_lo(), f.domain_hi(), f.grid(),
            [fc, c](std::uint64_t k, double x) { return c * fc.member_value(k, x); },
            [fc, c](double x) { return c * fc.limit_value(x); });
    }
    FuzzyFunctionSequence fc = f;
    return FuzzyFunctionSequence(
        std::move(name), f.domain_lo(), f.domain_hi(), f.grid(),
        [fc, c](std::uint64_t k, double x) { return scale(c, fc.member(k, x)); },
        [fc, c](double x) { return scale(c, fc.limit(x)); });
}

} // namespace fuzzstat
