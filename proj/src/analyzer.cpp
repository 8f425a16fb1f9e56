#include "fuzzstat/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "fuzzstat/parallel.hpp"

namespace fuzzstat {

namespace {

// Hard cap on iterable index spans; profiles over wider ranges would need
// out-of-core counting, which nothing here requires.
constexpr std::uint64_t max_analysis_span = std::uint64_t{1} << 26;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double density_of(std::uint64_t count, double total, double theta) {
    const double t_theta = (theta == 1.0) ? total : std::pow(total, theta);
    return static_cast<double>(count) / t_theta;
}

void check_profile_args(double theta, double eps) {
    require(theta > 0.0 && theta <= 1.0, "order theta must lie in (0, 1]");
    require(eps > 0.0 && std::isfinite(eps), "epsilon must be positive and finite");
}

std::vector<ProfileEntry> make_entries(const AnalysisWindows& win,
                                       const std::vector<std::uint64_t>& counts,
                                       double theta) {
    std::vector<ProfileEntry> entries(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::uint64_t n = win.n_first() + i;
        entries[i] = ProfileEntry{n, win.total(n), counts[i],
                                  density_of(counts[i], win.total(n), theta)};
    }
    return entries;
}

double mean_of(const std::vector<double>& v, std::size_t first, std::size_t last) {
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += v[i];
    return sum / static_cast<double>(last - first);
}

} // namespace

std::string to_string(IndexMode m) {
    return m == IndexMode::prefix ? "prefix" : "window";
}

std::string to_string(ConvergenceMode m) {
    switch (m) {
        case ConvergenceMode::pointwise: return "pointwise";
        case ConvergenceMode::uniform: return "uniform";
        case ConvergenceMode::equi: return "equi";
    }
    return "pointwise";
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::converges: return "converges";
        case Decision::diverges: return "diverges";
        case Decision::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

IndexMode parse_index_mode(const std::string& s) {
    if (s == "prefix") return IndexMode::prefix;
    if (s == "window") return IndexMode::window;
    throw SpecParseError("unknown index mode (expected prefix or window)", s);
}

const ProfileEntry& DensityProfile::at(std::uint64_t n) const {
    if (n < n_first || n >= n_first + entries.size())
        throw std::out_of_range("DensityProfile: n outside the profiled range");
    return entries[static_cast<std::size_t>(n - n_first)];
}

std::vector<double> DensityProfile::densities() const {
    std::vector<double> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) out[i] = entries[i].density;
    return out;
}

AnalysisWindows::AnalysisWindows(const WeightSequence& w, const WindowScheme& s,
                                 std::uint64_t n_first, std::uint64_t n_last, IndexMode mode)
    : n_first_(n_first), n_last_(n_last), mode_(mode) {
    require(n_first >= 1, "AnalysisWindows: n_first must be at least 1");
    require(n_last >= n_first, "AnalysisWindows: need n_last >= n_first");

    const std::size_t n_count = static_cast<std::size_t>(n_last - n_first + 1);
    std::vector<IndexWindow> windows(n_count);
    std::uint64_t max_hi = 0;
    for (std::size_t i = 0; i < n_count; ++i) {
        const std::uint64_t n = n_first + i;
        windows[i] = s.window(n);
        if (windows[i].empty())
            throw std::domain_error("AnalysisWindows: empty window at n=" + std::to_string(n));
        if (!fits_u64(windows[i].hi) ||
            static_cast<std::uint64_t>(windows[i].hi) > max_analysis_span)
            throw std::length_error("AnalysisWindows: window endpoint at n=" + std::to_string(n) +
                                    " exceeds the iterable analysis span");
        max_hi = std::max(max_hi, static_cast<std::uint64_t>(windows[i].hi));
    }

    // One shared weight prefix sum serves every total.
    weights_.resize(max_hi);
    for (std::uint64_t k = 1; k <= max_hi; ++k) {
        const double t = w(k);
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::domain_error("AnalysisWindows: weight not finite and nonnegative at k=" +
                                    std::to_string(k));
        weights_[k - 1] = t;
    }
    std::vector<double> prefix(max_hi + 1, 0.0);
    for (std::uint64_t k = 1; k <= max_hi; ++k) prefix[k] = prefix[k - 1] + weights_[k - 1];

    totals_.resize(n_count);
    sets_.resize(n_count);
    for (std::size_t i = 0; i < n_count; ++i) {
        const std::uint64_t lo = static_cast<std::uint64_t>(windows[i].lo);
        const std::uint64_t hi = static_cast<std::uint64_t>(windows[i].hi);
        totals_[i] = prefix[hi] - prefix[lo - 1];
        if (!(totals_[i] > 0.0))
            throw std::domain_error("AnalysisWindows: window total not positive at n=" +
                                    std::to_string(n_first + i));
        if (mode_ == IndexMode::window) {
            sets_[i] = IndexSpan{lo, hi};
        } else {
            const double f = std::floor(totals_[i]);
            if (f < 1.0) {
                sets_[i] = IndexSpan{1, 0};
            } else {
                if (f > static_cast<double>(max_analysis_span))
                    throw std::length_error("AnalysisWindows: prefix extent at n=" +
                                            std::to_string(n_first + i) +
                                            " exceeds the iterable analysis span");
                sets_[i] = IndexSpan{1, static_cast<std::uint64_t>(f)};
            }
        }
        k_max_ = std::max(k_max_, sets_[i].empty() ? 0 : sets_[i].hi);
    }

    // Flags cover every index-set member; extend the weight cache when prefix
    // sets outrun the windows themselves (possible when weights exceed 1).
    if (k_max_ > max_hi) {
        weights_.resize(k_max_);
        for (std::uint64_t k = max_hi + 1; k <= k_max_; ++k) {
            const double t = w(k);
            if (!(t >= 0.0) || !std::isfinite(t))
                throw std::domain_error("AnalysisWindows: weight not finite and nonnegative at k=" +
                                        std::to_string(k));
            weights_[k - 1] = t;
        }
    }
}

std::vector<std::uint64_t> AnalysisWindows::counts_from_flags(
    const std::vector<unsigned char>& flags) const {
    if (flags.size() != k_max_)
        throw std::logic_error("counts_from_flags: flag array does not cover k_max");
    std::vector<std::uint64_t> prefix(k_max_ + 1, 0);
    for (std::uint64_t k = 1; k <= k_max_; ++k)
        prefix[k] = prefix[k - 1] + (flags[k - 1] ? 1 : 0);
    std::vector<std::uint64_t> counts(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i)
        counts[i] = sets_[i].empty() ? 0 : prefix[sets_[i].hi] - prefix[sets_[i].lo - 1];
    return counts;
}

std::vector<unsigned char> deviation_flags(const FuzzyFunctionSequence& seq, double x,
                                           const AnalysisWindows& win, double eps) {
    check_profile_args(1.0, eps);
    std::vector<unsigned char> flags(win.k_max(), 0);
    for (std::uint64_t k = 1; k <= win.k_max(); ++k)
        flags[k - 1] = (win.weight(k) * seq.deviation(k, x) >= eps) ? 1 : 0;
    return flags;
}

std::vector<unsigned char> sup_deviation_flags(const FuzzyFunctionSequence& seq,
                                               const SpatialGrid& grid,
                                               const AnalysisWindows& win, double eps) {
    check_profile_args(1.0, eps);
    const std::size_t xs = seq.constant_in_x() ? 1 : grid.size();
    std::vector<unsigned char> flags(win.k_max(), 0);
    parallel_chunks(win.k_max(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t k = static_cast<std::uint64_t>(i) + 1;
            double sup = 0.0;
            for (std::size_t j = 0; j < xs; ++j)
                sup = std::max(sup, seq.deviation(k, grid.point(j)));
            for (double hx : seq.sup_hints(k))
                sup = std::max(sup, seq.deviation(k, hx));
            flags[i] = (win.weight(k) * sup >= eps) ? 1 : 0;
        }
    });
    return flags;
}

std::vector<unsigned char> forall_deviation_flags(const FuzzyFunctionSequence& seq,
                                                  const SpatialGrid& grid,
                                                  const AnalysisWindows& win, double eps) {
    check_profile_args(1.0, eps);
    const std::size_t xs = seq.constant_in_x() ? 1 : grid.size();
    std::vector<unsigned char> flags(win.k_max(), 0);
    parallel_chunks(win.k_max(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t k = static_cast<std::uint64_t>(i) + 1;
            bool everywhere = true;
            for (std::size_t j = 0; j < xs && everywhere; ++j)
                everywhere = (win.weight(k) * seq.deviation(k, grid.point(j)) >= eps);
            flags[i] = everywhere ? 1 : 0;
        }
    });
    return flags;
}

std::uint64_t exceedance_count(const FuzzyFunctionSequence& seq, double x,
                               const WeightSequence& w, const WindowAccumulation& acc,
                               double eps, IndexMode mode) {
    check_profile_args(1.0, eps);
    IndexSpan span;
    if (mode == IndexMode::window) {
        if (!fits_u64(acc.window.hi))
            throw std::length_error("exceedance_count: window too large to iterate");
        span = IndexSpan{static_cast<std::uint64_t>(acc.window.lo),
                         static_cast<std::uint64_t>(acc.window.hi)};
    } else {
        const double f = std::floor(acc.total);
        if (f < 1.0) return 0;
        span = IndexSpan{1, static_cast<std::uint64_t>(f)};
    }
    if (span.size() > max_analysis_span)
        throw std::length_error("exceedance_count: index set too large to iterate");
    std::uint64_t count = 0;
    for (std::uint64_t k = span.lo; k <= span.hi; ++k)
        if (w(k) * seq.deviation(k, x) >= eps) ++count;
    return count;
}

DensityProfile density_profile(const FuzzyFunctionSequence& seq, double x,
                               const WeightSequence& w, const WindowScheme& s,
                               double theta, double eps,
                               std::uint64_t n_first, std::uint64_t n_last, IndexMode mode) {
    check_profile_args(theta, eps);
    AnalysisWindows win(w, s, n_first, n_last, mode);
    const auto counts = win.counts_from_flags(deviation_flags(seq, x, win, eps));
    DensityProfile profile{theta, eps, mode, n_first, make_entries(win, counts, theta)};
    return profile;
}

DensityField s_field(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                     const WeightSequence& w, const WindowScheme& s,
                     double theta, double eps, std::uint64_t m, IndexMode mode) {
    check_profile_args(theta, eps);
    AnalysisWindows win(w, s, m, m, mode);
    const IndexSpan span = win.index_set(m);
    const double total = win.total(m);

    DensityField field{theta, eps, mode, m, std::vector<double>(grid.size(), 0.0), 0.0, 0};
    parallel_chunks(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::uint64_t count = 0;
            if (!span.empty())
                for (std::uint64_t k = span.lo; k <= span.hi; ++k)
                    if (win.weight(k) * seq.deviation(k, grid.point(i)) >= eps) ++count;
            field.values[i] = density_of(count, total, theta);
        }
    });
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (field.values[i] > field.defect) {
            field.defect = field.values[i];
            field.argmax = i;
        }
    }
    return field;
}

DensityProfile uniform_defect_profile(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                                      const WeightSequence& w, const WindowScheme& s,
                                      double theta, double eps,
                                      std::uint64_t n_first, std::uint64_t n_last,
                                      IndexMode mode) {
    check_profile_args(theta, eps);
    AnalysisWindows win(w, s, n_first, n_last, mode);
    const auto counts = win.counts_from_flags(sup_deviation_flags(seq, grid, win, eps));
    DensityProfile profile{theta, eps, mode, n_first, make_entries(win, counts, theta)};
    return profile;
}

ModeVerdict assess_tail(ConvergenceMode mode, const std::vector<double>& densities,
                        double tolerance) {
    require(!densities.empty(), "assess_tail: empty density series");
    require(tolerance > 0.0 && tolerance < 0.5, "assess_tail: tolerance must lie in (0, 0.5)");
    const std::size_t len = densities.size();
    const std::size_t q = (len + 3) / 4;  // ceil(25%)
    const double tail = mean_of(densities, len - q, len);

    bool decreasing = false;
    if (len >= 2 * q) {
        const double prev = mean_of(densities, len - 2 * q, len - q);
        decreasing = prev > 0.0 && tail < 0.95 * prev;
    }

    Decision decision = Decision::inconclusive;
    if (tail <= tolerance)
        decision = Decision::converges;
    else if (tail >= 1.0 - tolerance && !decreasing)
        decision = Decision::diverges;

    return ModeVerdict{mode, decision, tail, tolerance, len};
}

Classification classify(const FuzzyFunctionSequence& seq, const SpatialGrid& grid,
                        const WeightSequence& w, const WindowScheme& s,
                        const ClassifyOptions& opt) {
    check_profile_args(opt.theta, opt.epsilon);
    require(opt.n_max >= 8, "classify: n_max must be at least 8");
    require(opt.tolerance > 0.0 && opt.tolerance < 0.5,
            "classify: tolerance must lie in (0, 0.5)");

    AnalysisWindows win(w, s, 1, opt.n_max, opt.index_mode);
    const std::size_t n_count = win.count();
    const std::size_t grid_size = grid.size();

    Classification out;
    out.options = opt;
    out.per_x_tails.assign(grid_size, 0.0);
    if (opt.keep_per_x) out.per_x_counts.assign(grid_size, {});

    // Per-x pass. A family constant in x is evaluated once and broadcast.
    const std::size_t xs_count = seq.constant_in_x() ? 1 : grid_size;
    std::vector<std::uint64_t> equi_counts(n_count, 0);
    std::mutex merge_mutex;
    parallel_chunks(xs_count, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> local_max(n_count, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const auto counts =
                win.counts_from_flags(deviation_flags(seq, grid.point(i), win, opt.epsilon));
            std::vector<double> densities(n_count);
            for (std::size_t j = 0; j < n_count; ++j) {
                densities[j] = density_of(counts[j], win.total(win.n_first() + j), opt.theta);
                local_max[j] = std::max(local_max[j], counts[j]);
            }
            out.per_x_tails[i] =
                assess_tail(ConvergenceMode::pointwise, densities, opt.tolerance).tail_value;
            if (opt.keep_per_x) out.per_x_counts[i] = counts;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t j = 0; j < n_count; ++j)
            equi_counts[j] = std::max(equi_counts[j], local_max[j]);
    });
    if (seq.constant_in_x()) {
        for (std::size_t i = 1; i < grid_size; ++i) {
            out.per_x_tails[i] = out.per_x_tails[0];
            if (opt.keep_per_x) out.per_x_counts[i] = out.per_x_counts[0];
        }
    }

    // Flagged grid points never join the pointwise aggregate; they carry their
    // own verdicts. Matching is by exact coordinate.
    std::vector<bool> is_flagged(grid_size, false);
    for (const FlaggedPoint& fp : seq.flagged())
        for (std::size_t i = 0; i < grid_size; ++i)
            if (grid.point(i) == fp.x) is_flagged[i] = true;

    std::size_t worst = grid_size;  // sentinel
    for (std::size_t i = 0; i < grid_size; ++i) {
        if (is_flagged[i]) continue;
        if (worst == grid_size || out.per_x_tails[i] > out.per_x_tails[worst]) worst = i;
    }
    if (worst == grid_size) worst = 0;  // every point flagged: fall back to the full grid
    out.pointwise_argmax = worst;
    out.pointwise_x = grid.point(worst);

    {
        std::vector<std::uint64_t> counts;
        if (opt.keep_per_x) {
            counts = out.per_x_counts[worst];
        } else {
            counts = win.counts_from_flags(
                deviation_flags(seq, out.pointwise_x, win, opt.epsilon));
        }
        out.pointwise_profile = DensityProfile{opt.theta, opt.epsilon, opt.index_mode, 1,
                                               make_entries(win, counts, opt.theta)};
        out.pointwise = assess_tail(ConvergenceMode::pointwise,
                                    out.pointwise_profile.densities(), opt.tolerance);
    }

    out.equi_profile = DensityProfile{opt.theta, opt.epsilon, opt.index_mode, 1,
                                      make_entries(win, equi_counts, opt.theta)};
    out.equi = assess_tail(ConvergenceMode::equi, out.equi_profile.densities(), opt.tolerance);

    {
        const auto counts =
            win.counts_from_flags(sup_deviation_flags(seq, grid, win, opt.epsilon));
        out.uniform_profile = DensityProfile{opt.theta, opt.epsilon, opt.index_mode, 1,
                                             make_entries(win, counts, opt.theta)};
        out.uniform = assess_tail(ConvergenceMode::uniform, out.uniform_profile.densities(),
                                  opt.tolerance);
    }

    for (const FlaggedPoint& fp : seq.flagged()) {
        const auto counts = win.counts_from_flags(deviation_flags(seq, fp.x, win, opt.epsilon));
        std::vector<double> densities(n_count);
        for (std::size_t j = 0; j < n_count; ++j)
            densities[j] = density_of(counts[j], win.total(win.n_first() + j), opt.theta);
        const ModeVerdict v = assess_tail(ConvergenceMode::pointwise, densities, opt.tolerance);
        out.flagged_verdicts.push_back(PointVerdict{fp.x, fp.note, v.decision, v.tail_value});
    }

    return out;
}

AlphaCutProfiles alpha_cut_profiles(const FuzzyFunctionSequence& seq, double x,
                                    const WeightSequence& w, const WindowScheme& s,
                                    double theta, double eps,
                                    std::uint64_t n_first, std::uint64_t n_last, IndexMode mode) {
    check_profile_args(theta, eps);
    AnalysisWindows win(w, s, n_first, n_last, mode);
    const std::uint64_t k_max = win.k_max();
    const std::size_t levels = seq.grid().resolution();
    if (2 * levels * static_cast<std::size_t>(k_max) > (std::size_t{1} << 28))
        throw std::length_error("alpha_cut_profiles: span times alpha resolution too large");

    // side-major layout: [side][level][k]
    std::vector<std::vector<unsigned char>> flags(
        2 * levels, std::vector<unsigned char>(static_cast<std::size_t>(k_max), 0));
    std::vector<unsigned char> metric_flags(static_cast<std::size_t>(k_max), 0);

    const FuzzyNumber fl = seq.limit(x);
    parallel_chunks(static_cast<std::size_t>(k_max), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t k = static_cast<std::uint64_t>(i) + 1;
            const FuzzyNumber fk = seq.member(k, x);
            const double t = win.weight(k);
            double dmax = 0.0;
            for (std::size_t lv = 0; lv < levels; ++lv) {
                const double dl = std::abs(fk.lower(lv) - fl.lower(lv));
                const double du = std::abs(fk.upper(lv) - fl.upper(lv));
                flags[lv][i] = (t * dl >= eps) ? 1 : 0;
                flags[levels + lv][i] = (t * du >= eps) ? 1 : 0;
                dmax = std::max(dmax, std::max(dl, du));
            }
            metric_flags[i] = (t * dmax >= eps) ? 1 : 0;
        }
    });

    const std::size_t n_count = win.count();
    std::vector<std::uint64_t> max_counts(n_count, 0);
    std::vector<std::uint64_t> final_counts(2 * levels, 0);
    for (std::size_t f = 0; f < flags.size(); ++f) {
        const auto counts = win.counts_from_flags(flags[f]);
        for (std::size_t j = 0; j < n_count; ++j)
            max_counts[j] = std::max(max_counts[j], counts[j]);
        final_counts[f] = counts.back();
    }
    // First (lower side first, then level order) pair attaining the final-n max.
    std::size_t level_at_max = 0;
    int side_at_max = 0;
    for (std::size_t side = 0; side < 2; ++side) {
        bool found = false;
        for (std::size_t lv = 0; lv < levels; ++lv) {
            if (final_counts[side * levels + lv] == max_counts.back()) {
                side_at_max = static_cast<int>(side);
                level_at_max = lv;
                found = true;
                break;
            }
        }
        if (found) break;
    }

    bool union_ok = true;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k_max) && union_ok; ++i) {
        unsigned char any = 0;
        for (std::size_t f = 0; f < flags.size() && !any; ++f) any = flags[f][i];
        union_ok = (any == metric_flags[i]);
    }

    AlphaCutProfiles out;
    out.theta = theta;
    out.epsilon = eps;
    out.index_mode = mode;
    out.max_entries = make_entries(win, max_counts, theta);
    out.level_at_max = level_at_max;
    out.side_at_max = side_at_max;
    out.union_matches_metric = union_ok;
    return out;
}

namespace {

template <typename Jump>
ContinuityProbe probe_impl(const SpatialGrid& grid, Jump&& jump_at) {
    if (grid.size() < 2)
        throw std::invalid_argument("continuity probe: need at least 2 grid points");
    const double h = (grid.hi() - grid.lo()) / static_cast<double>(grid.size() - 1);
    ContinuityProbe probe{0.0, grid.lo(), h};
    bool first = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        const double a = std::max(grid.lo(), x - h);
        const double b = std::min(grid.hi(), x + h);
        const double j = jump_at(a, b);
        if (first || j >= probe.max_jump) {  // rightmost maximizer
            probe.max_jump = j;
            probe.x_at_max = x;
            first = false;
        }
    }
    return probe;
}

} // namespace

ContinuityProbe continuity_probe(const std::function<FuzzyNumber(double)>& f,
                                 const SpatialGrid& grid) {
    return probe_impl(grid, [&](double a, double b) { return distance(f(a), f(b)); });
}

ContinuityProbe continuity_probe_scalar(const std::function<double(double)>& f,
                                        const SpatialGrid& grid) {
    return probe_impl(grid, [&](double a, double b) { return std::abs(f(a) - f(b)); });
}

} // namespace fuzzstat
