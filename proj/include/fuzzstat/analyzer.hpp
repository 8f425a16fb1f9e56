#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fuzzstat/schemes.hpp"
#include "fuzzstat/sequences.hpp"

namespace fuzzstat {

/// Which index set the exceedances are counted over at window n:
///   prefix — k in [1, floor(T(n))], the Definitions-facing default;
///   window — k in the integer window itself, used by the worked examples.
/// Every report states the mode.
enum class IndexMode { prefix, window };

enum class ConvergenceMode { pointwise, uniform, equi };

enum class Decision { converges, diverges, inconclusive };

std::string to_string(IndexMode m);
std::string to_string(ConvergenceMode m);
std::string to_string(Decision d);
IndexMode parse_index_mode(const std::string& s);  // "prefix" | "window"

/// One profile row: count of exceedances in the n-th index set, the window
/// total T(n), and density = count / T(n)^theta.
struct ProfileEntry {
    std::uint64_t n = 0;
    double total = 0.0;
    std::uint64_t count = 0;
    double density = 0.0;
};

struct DensityProfile {
    double theta = 1.0;
    double epsilon = 0.0;
    IndexMode index_mode = IndexMode::prefix;
    std::uint64_t n_first = 1;
    std::vector<ProfileEntry> entries;  // n = n_first .. n_first + size - 1

    const ProfileEntry& at(std::uint64_t n) const;
    std::vector<double> densities() const;
};

/// Iterable per-n index set [lo, hi] (empty when hi < lo), always within
/// 64-bit range.
struct IndexSpan {
    std::uint64_t lo = 1;
    std::uint64_t hi = 0;
    bool empty() const { return hi < lo; }
    std::uint64_t size() const { return empty() ? 0 : hi - lo + 1; }
};

/// Precomputed per-n windows, totals, and index sets over an n-range, shared
/// by every profile computation on the same (weights, scheme, mode). Totals
/// come from one weight prefix sum; with exact weights (unit, dyadic
/// constants) they equal the direct window sums exactly.
class AnalysisWindows {
public:
    AnalysisWindows(const WeightSequence& w, const WindowScheme& s,
                    std::uint64_t n_first, std::uint64_t n_last, IndexMode mode);

    std::uint64_t n_first() const { return n_first_; }
    std::uint64_t n_last() const { return n_last_; }
    std::size_t count() const { return totals_.size(); }
    IndexMode mode() const { return mode_; }

    double total(std::uint64_t n) const { return totals_[idx(n)]; }
    IndexSpan index_set(std::uint64_t n) const { return sets_[idx(n)]; }

    /// Largest k any index set reaches.
    std::uint64_t k_max() const { return k_max_; }
    double weight(std::uint64_t k) const { return weights_[k - 1]; }  // k in [1, k_max]

    /// counts[i] = number of flagged k in the index set at n_first + i;
    /// flags[k-1] covers k in [1, k_max].
    std::vector<std::uint64_t> counts_from_flags(const std::vector<unsigned char>& flags) const;

private:
    std::size_t idx(std::uint64_t n) const { return static_cast<std::size_t>(n - n_first_); }

    std::uint64_t n_first_;
    std::uint64_t n_last_;
    IndexMode mode_;
    std::vector<IndexSpan> sets_;
    std::vector<double> totals_;
    std::vector<double> weights_;  // t_k for k = 1..k_max
    std::uint64_t k_max_ = 0;
};

/// Flags over k = 1..k_max: t_k * d(f_k(x), f(x)) >= eps (closed threshold).
std::vector<unsigned char> deviation_flags(const FuzzyFunctionSequence& seq, double x,
                                           const AnalysisWindows& win, double eps);

/// Flags over k: t_k * (sup over grid points and sup hints of d) >= eps.
/// The realized sup is a lower bound on the true supremum.
std::vector<unsigned char> sup_deviation_flags(const FuzzyFunctionSequence& seq,
                                               const SpatialGrid& grid,
                                               const AnalysisWindows& win, double eps);

/// Flags over k: t_k * d >= eps at EVERY grid point (the containment-facing
/// reading of the uniform count).
std::vector<unsigned char> forall_deviation_flags(const FuzzyFunctionSequence& seq,
                                                  const SpatialGrid& grid,
                                                  const AnalysisWindows& win, double eps);

/// Definitional reference count: direct loop over the index set drawn from
/// one accumulation (window mode uses acc's window; prefix mode uses
/// [1, floor(acc.total)]).
std::uint64_t exceedance_count(const FuzzyFunctionSequence& seq, double x,
                               const WeightSequence& w, const WindowAccumulation& acc,
                               double eps, IndexMode mode);

/// Per-x density profile over n in [n_first, n_last].
DensityProfile density_profile(const FuzzyFunctionSequence& seq, double x,
                               const WeightSequence& w, const WindowScheme& s,
                               double theta, double eps,
                               std::uint64_t n_first, std::uint64_t n_last, IndexMode mode);

/// The density field S_m(x) at one m: per grid point, count at m over
/// T(m)^theta; defect = max over the grid, argmax = first maximizing index.
struct DensityField {
    double theta = 1.0;
    double epsilon = 0.0;
    IndexMode index_mode = IndexMode::prefix;
    std::uint64_t m = 0;
    std::vector<double> values;  // parallel to the grid
    double defect = 0.0;
    std::size_t argmax = 0;
};

DensityField s_field(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                     const WeightSequence& w, const WindowScheme& s,
                     double theta, double eps, std::uint64_t m, IndexMode mode);

/// Density profile of the scalar sequence g_k = sup over the grid (plus sup
/// hints) of t_k d(f_k(x), f(x)).
DensityProfile uniform_defect_profile(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                                      const WeightSequence& w, const WindowScheme& s,
                                      double theta, double eps,
                                      std::uint64_t n_first, std::uint64_t n_last, IndexMode mode);

/// Finite-horizon reading of a density series. Heuristic, never a proof, and
/// all output says so. tail_value = mean of the last ceil(25%) entries;
/// converges when the tail is within tolerance of 0; diverges when it sits at
/// 1 - tolerance or above with no evidence of decrease (tail below 95% of the
/// preceding quarter's mean); inconclusive otherwise.
struct ModeVerdict {
    ConvergenceMode mode = ConvergenceMode::pointwise;
    Decision decision = Decision::inconclusive;
    double tail_value = 0.0;
    double tolerance = 0.05;
    std::uint64_t n_max = 0;
};

ModeVerdict assess_tail(ConvergenceMode mode, const std::vector<double>& densities,
                        double tolerance);

/// Per-point verdict, used for flagged domain points.
struct PointVerdict {
    double x = 0.0;
    std::string note;
    Decision decision = Decision::inconclusive;
    double tail_value = 0.0;
};

struct ClassifyOptions {
    double theta = 1.0;
    double epsilon = 0.5;
    std::uint64_t n_max = 1000;
    IndexMode index_mode = IndexMode::prefix;
    double tolerance = 0.05;
    bool keep_per_x = false;  // retain the full per-(x, n) count matrix
};

/// Verdicts for all three modes over n = 1..n_max.
///   pointwise — worst per-x tail over non-flagged grid points; the reported
///               profile belongs to that x. Flagged points get their own
///               verdicts and never join the aggregate.
///   equi      — per-n max over ALL grid points of S_n(x).
///   uniform   — profile of the grid-realized sup sequence g_k.
struct Classification {
    ClassifyOptions options;
    ModeVerdict pointwise;
    ModeVerdict uniform;
    ModeVerdict equi;
    DensityProfile pointwise_profile;
    double pointwise_x = 0.0;
    std::size_t pointwise_argmax = 0;  // grid index of the worst x
    DensityProfile uniform_profile;
    DensityProfile equi_profile;       // entry.count = max over x at that n
    std::vector<double> per_x_tails;   // parallel to the grid
    std::vector<PointVerdict> flagged_verdicts;
    std::vector<std::vector<std::uint64_t>> per_x_counts;  // when keep_per_x
};

Classification classify(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                        const WeightSequence& w, const WindowScheme& s,
                        const ClassifyOptions& opt);

/// Per-alpha-level endpoint profiles: for each level and endpoint side, the
/// exceedance count of t_k |endpoint difference| at eps. max_entries carries
/// the per-n max over (level, side); union_matches_metric records whether the
/// union over levels and sides of the endpoint exceedance sets equals the
/// metric exceedance set (exact, since d is the max of the endpoint gaps).
struct AlphaCutProfiles {
    double theta = 1.0;
    double epsilon = 0.0;
    IndexMode index_mode = IndexMode::prefix;
    std::vector<ProfileEntry> max_entries;
    std::size_t level_at_max = 0;  // at n_last
    int side_at_max = 0;           // 0 = lower endpoints, 1 = upper
    bool union_matches_metric = false;
};

AlphaCutProfiles alpha_cut_profiles(const FuzzyFunctionSequence& seq, double x,
                                    const WeightSequence& w, const WindowScheme& s,
                                    double theta, double eps,
                                    std::uint64_t n_first, std::uint64_t n_last, IndexMode mode);

/// Largest neighbor-pair jump d(f(x-h), f(x+h)) over the grid at h = grid
/// step, arguments clamped to the domain; reports the rightmost maximizer.
/// A discontinuity of height J shows up as a jump near J; smooth functions
/// show jumps on the order of h.
struct ContinuityProbe {
    double max_jump = 0.0;
    double x_at_max = 0.0;
    double step = 0.0;
};

ContinuityProbe continuity_probe(const std::function<FuzzyNumber(double)>& f,
                                 const SpatialGrid& grid);
ContinuityProbe continuity_probe_scalar(const std::function<double(double)>& f,
                                        const SpatialGrid& grid);

} // namespace fuzzstat
