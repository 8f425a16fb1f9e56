#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzstat/fuzzy.hpp"

namespace fuzzstat {

/// Finite stand-in for "for each x in [a,b]": an ordered list of sample
/// points, endpoints included.
class SpatialGrid {
public:
    static constexpr std::size_t default_resolution = 513;

    static SpatialGrid uniform(double lo, double hi,
                               std::size_t resolution = default_resolution);
    explicit SpatialGrid(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double point(std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const { return points_; }
    double lo() const { return points_.front(); }
    double hi() const { return points_.back(); }

    /// Points lying in [lo, hi]; at least one must survive.
    SpatialGrid restrict_to(double lo, double hi) const;

private:
    std::vector<double> points_;
};

/// Domain point whose behavior is known to differ from the family's candidate
/// limit story (e.g. where the pointwise limit disagrees with the candidate).
/// Flagged points are excluded from aggregate pointwise verdicts and reported
/// with their own per-point verdicts instead.
struct FlaggedPoint {
    double x = 0.0;
    std::string note;
};

/// Indexed family k >= 1 of fuzzy-valued functions on [a,b] together with a
/// candidate limit function, all valued on one shared alpha grid.
///
/// Crisp-valued families carry scalar rules so the metric collapses to an
/// absolute difference without building interval stacks. sup_hints(k) lists
/// x-values that a fixed spatial grid would miss when realizing
/// sup over x of the deviation (e.g. shrinking support of the k-th member).
class FuzzyFunctionSequence {
public:
    using MemberRule = std::function<FuzzyNumber(std::uint64_t, double)>;
    using LimitRule = std::function<FuzzyNumber(double)>;
    using ScalarMemberRule = std::function<double(std::uint64_t, double)>;
    using ScalarLimitRule = std::function<double(double)>;
    using HintRule = std::function<std::vector<double>(std::uint64_t)>;

    FuzzyFunctionSequence(std::string name, double domain_lo, double domain_hi,
                          AlphaGrid grid, MemberRule member, LimitRule limit);

    /// Family of crisp values; member/limit rules are derived from the scalar
    /// ones and the deviation fast path activates.
    static FuzzyFunctionSequence crisp_valued(std::string name, double domain_lo,
                                              double domain_hi, AlphaGrid grid,
                                              ScalarMemberRule member,
                                              ScalarLimitRule limit);

    FuzzyFunctionSequence& set_constant_in_x(bool v);
    FuzzyFunctionSequence& set_sup_hints(HintRule h);
    FuzzyFunctionSequence& add_flagged_point(double x, std::string note);
    FuzzyFunctionSequence& set_params(nlohmann::ordered_json params);

    const std::string& name() const { return name_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }
    const AlphaGrid& grid() const { return grid_; }
    bool has_scalar_rules() const { return static_cast<bool>(scalar_member_); }
    bool constant_in_x() const { return constant_in_x_; }
    const std::vector<FlaggedPoint>& flagged() const { return flagged_; }
    const nlohmann::ordered_json& params() const { return params_; }

    FuzzyNumber member(std::uint64_t k, double x) const;
    FuzzyNumber limit(double x) const;
    double member_value(std::uint64_t k, double x) const;  // scalar rules only
    double limit_value(double x) const;                    // scalar rules only

    /// d(member(k,x), limit(x)); |difference| when scalar rules exist.
    double deviation(std::uint64_t k, double x) const;

    /// Extra sup-realization points for index k, clamped to the domain.
    std::vector<double> sup_hints(std::uint64_t k) const;

private:
    void check_domain(double x) const;

    std::string name_;
    double domain_lo_;
    double domain_hi_;
    AlphaGrid grid_;
    MemberRule member_;
    LimitRule limit_;
    ScalarMemberRule scalar_member_;
    ScalarLimitRule scalar_limit_;
    HintRule hints_;
    bool constant_in_x_ = false;
    std::vector<FlaggedPoint> flagged_;
    nlohmann::ordered_json params_ = nlohmann::ordered_json::object();
};

/// Pointwise sum family (f_k + g_k with limit f + g). Same domain and grid
/// required; scalar rules compose when both factors have them.
FuzzyFunctionSequence sum_of(const FuzzyFunctionSequence& f, const FuzzyFunctionSequence& g);

/// Pointwise scalar multiple (c * f_k with limit c * f).
FuzzyFunctionSequence scaled(double c, const FuzzyFunctionSequence& f);

} // namespace fuzzstat
