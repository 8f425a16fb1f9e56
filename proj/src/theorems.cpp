#include "fuzzstat/theorems.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzstat/corpus.hpp"

namespace fuzzstat {

namespace {

struct Combo {
    const WindowScheme* scheme;
    const WeightSequence* weights;
    IndexMode mode;
};

// Definitional index span at n, built from a direct accumulation rather than
// the analyzer's shared tables.
IndexSpan brute_span(const WeightSequence& w, const WindowScheme& s, std::uint64_t n,
                     IndexMode mode) {
    const WindowAccumulation acc = accumulate(w, s, n);
    if (mode == IndexMode::window)
        return IndexSpan{static_cast<std::uint64_t>(acc.window.lo),
                         static_cast<std::uint64_t>(acc.window.hi)};
    const double f = std::floor(acc.total);
    if (f < 1.0) return IndexSpan{1, 0};
    return IndexSpan{1, static_cast<std::uint64_t>(f)};
}

// dev[xi][k-1] = d(f_k(x_i), f(x_i)), evaluated member by member.
std::vector<std::vector<double>> dev_table(const FuzzyFunctionSequence& seq,
                                           const std::vector<double>& xs, std::uint64_t k_max) {
    std::vector<std::vector<double>> dev(xs.size(), std::vector<double>(k_max));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::uint64_t k = 1; k <= k_max; ++k)
            dev[i][k - 1] = seq.deviation(k, xs[i]);
    return dev;
}

std::vector<unsigned char> flags_of(const std::vector<double>& dev, const WeightSequence& w,
                                    double eps) {
    std::vector<unsigned char> f(dev.size());
    for (std::size_t i = 0; i < dev.size(); ++i)
        f[i] = (w(static_cast<std::uint64_t>(i) + 1) * dev[i] >= eps) ? 1 : 0;
    return f;
}

std::uint64_t count_in_span(const std::vector<unsigned char>& flags, IndexSpan span) {
    std::uint64_t c = 0;
    if (!span.empty())
        for (std::uint64_t k = span.lo; k <= span.hi; ++k)
            if (flags[k - 1]) ++c;
    return c;
}

double density_at(std::uint64_t count, double total, double theta) {
    const double denom = (theta == 1.0) ? total : std::pow(total, theta);
    return static_cast<double>(count) / denom;
}

class SuiteRunner {
public:
    explicit SuiteRunner(const TheoremSuiteConfig& cfg) : cfg_(cfg) {
        report_.seed = cfg.seed;
        report_.n_max = cfg.n_max;
    }

    TheoremSuiteReport run();

private:
    void check(bool ok, const std::string& property, nlohmann::ordered_json witness) {
        ++report_.checks_run;
        if (!ok && report_.violations.size() < 64)
            report_.violations.push_back(TheoremViolation{property, std::move(witness)});
    }

    void run_pair(const FuzzyFunctionSequence& f, const FuzzyFunctionSequence& g,
                  const std::string& tag, bool with_classify);

    TheoremSuiteConfig cfg_;
    TheoremSuiteReport report_;
};

TheoremSuiteReport SuiteRunner::run() {
    const AlphaGrid alpha = AlphaGrid::uniform(cfg_.alpha_resolution);
    std::size_t pair_index = 0;
    for (std::size_t i = 0; i < cfg_.crisp_instances; ++i, ++pair_index) {
        const std::uint64_t base = cfg_.seed * 1000003ULL + pair_index * 7919ULL;
        const auto f = instantiate(default_spec(ExampleName::random_crisp, base + 1), alpha);
        const auto g = instantiate(default_spec(ExampleName::random_crisp, base + 2), alpha);
        run_pair(f, g, "crisp#" + std::to_string(i), i == 0);
    }
    for (std::size_t i = 0; i < cfg_.triangular_instances; ++i, ++pair_index) {
        const std::uint64_t base = cfg_.seed * 1000003ULL + pair_index * 7919ULL;
        const auto f = instantiate(default_spec(ExampleName::random_triangular, base + 1), alpha);
        const auto g = instantiate(default_spec(ExampleName::random_triangular, base + 2), alpha);
        run_pair(f, g, "triangular#" + std::to_string(i), false);
    }
    return report_;
}

void SuiteRunner::run_pair(const FuzzyFunctionSequence& f, const FuzzyFunctionSequence& g,
                           const std::string& tag, bool with_classify) {
    const SpatialGrid grid = SpatialGrid::uniform(f.domain_lo(), f.domain_hi(), 5);
    const std::vector<double>& xs = grid.points();

    const WindowScheme statistical = WindowScheme::statistical();
    const WindowScheme doubling = parse_scheme("window:n,2n-1");
    const WindowScheme lambda = WindowScheme::lambda_sqrt();
    const WeightSequence unit = WeightSequence::unit();
    const WeightSequence heavy = WeightSequence::constant(2.5);

    std::vector<Combo> combos;
    for (const WindowScheme* s : {&statistical, &doubling, &lambda})
        for (const WeightSequence* w : {&unit, &heavy})
            for (IndexMode mode : {IndexMode::prefix, IndexMode::window})
                combos.push_back(Combo{s, w, mode});

    // Largest index any combo can reach: prefix sets with weight 2.5 extend to
    // floor(2.5 * window size).
    std::uint64_t k_max = 0;
    for (const Combo& c : combos)
        for (std::uint64_t n = 1; n <= cfg_.n_max; ++n) {
            const IndexSpan span = brute_span(*c.weights, *c.scheme, n, c.mode);
            if (!span.empty()) k_max = std::max(k_max, span.hi);
        }

    const FuzzyFunctionSequence fg = sum_of(f, g);
    const auto dev_f = dev_table(f, xs, k_max);
    const auto dev_g = dev_table(g, xs, k_max);
    const auto dev_fg = dev_table(fg, xs, k_max);

    std::vector<FuzzyFunctionSequence> scaled_fams;
    std::vector<std::vector<std::vector<double>>> dev_scaled;
    for (double c : cfg_.scalars) {
        scaled_fams.push_back(scaled(c, f));
        dev_scaled.push_back(dev_table(scaled_fams.back(), xs, k_max));
    }

    auto witness = [&](const Combo& c, nlohmann::ordered_json extra) {
        nlohmann::ordered_json w{{"family", tag},
                                 {"scheme", c.scheme->name()},
                                 {"weights", c.weights->name()},
                                 {"index_mode", to_string(c.mode)},
                                 {"seed", cfg_.seed},
                                 {"n_max", cfg_.n_max}};
        for (auto& [key, val] : extra.items()) w[key] = val;
        return w;
    };

    for (const Combo& combo : combos) {
        std::vector<IndexSpan> spans(cfg_.n_max);
        for (std::uint64_t n = 1; n <= cfg_.n_max; ++n)
            spans[n - 1] = brute_span(*combo.weights, *combo.scheme, n, combo.mode);

        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            for (double eps : cfg_.epsilons) {
                const auto flag_f = flags_of(dev_f[xi], *combo.weights, eps);
                const auto flag_f_half = flags_of(dev_f[xi], *combo.weights, eps / 2.0);
                const auto flag_g_half = flags_of(dev_g[xi], *combo.weights, eps / 2.0);
                const auto flag_sum = flags_of(dev_fg[xi], *combo.weights, eps);

                // (a) closure of sums: the sum's exceedance set at eps sits
                // inside the union of the factors' sets at eps/2.
                bool closure_ok = true;
                std::uint64_t bad_k = 0;
                for (std::uint64_t k = 1; k <= k_max; ++k)
                    if (flag_sum[k - 1] && !(flag_f_half[k - 1] || flag_g_half[k - 1])) {
                        closure_ok = false;
                        bad_k = k;
                        break;
                    }
                check(closure_ok, "closure_sum_containment",
                      witness(combo, {{"x", xs[xi]}, {"eps", eps}, {"k", bad_k}}));

                // (b) scalar multiples: exceedance set of c*f at eps equals
                // the base set at eps/|c|.
                for (std::size_t ci = 0; ci < cfg_.scalars.size(); ++ci) {
                    const double c = cfg_.scalars[ci];
                    const auto flag_cf = flags_of(dev_scaled[ci][xi], *combo.weights, eps);
                    const auto flag_base = flags_of(dev_f[xi], *combo.weights, eps / std::abs(c));
                    bool equal = flag_cf == flag_base;
                    std::uint64_t where = 0;
                    if (!equal)
                        for (std::uint64_t k = 1; k <= k_max; ++k)
                            if (flag_cf[k - 1] != flag_base[k - 1]) {
                                where = k;
                                break;
                            }
                    check(equal, "scalar_set_equality",
                          witness(combo, {{"x", xs[xi]}, {"eps", eps}, {"c", c}, {"k", where}}));
                }

                // Per-n counts feed the order and pipeline checks.
                std::vector<std::uint64_t> counts(cfg_.n_max);
                std::vector<double> totals(cfg_.n_max);
                for (std::uint64_t n = 1; n <= cfg_.n_max; ++n) {
                    counts[n - 1] = count_in_span(flag_f, spans[n - 1]);
                    totals[n - 1] = accumulate(*combo.weights, *combo.scheme, n).total;
                }

                // (c) order monotonicity: with T >= 1, density falls (weakly)
                // as theta grows.
                for (const auto& [theta, gamma] : cfg_.order_pairs) {
                    bool mono_ok = true;
                    std::uint64_t bad_n = 0;
                    for (std::uint64_t n = 1; n <= cfg_.n_max; ++n) {
                        if (totals[n - 1] < 1.0) continue;
                        const double dth = density_at(counts[n - 1], totals[n - 1], theta);
                        const double dga = density_at(counts[n - 1], totals[n - 1], gamma);
                        if (dga > dth * (1.0 + 1e-12)) {
                            mono_ok = false;
                            bad_n = n;
                            break;
                        }
                    }
                    check(mono_ok, "order_monotonicity",
                          witness(combo, {{"x", xs[xi]},
                                          {"eps", eps},
                                          {"theta", theta},
                                          {"gamma", gamma},
                                          {"n", bad_n}}));
                }

                // (g) pipeline agreement: the shared-table profile and the
                // definitional count both match the brute counts.
                const DensityProfile prof = density_profile(
                    f, xs[xi], *combo.weights, *combo.scheme, 1.0, eps, 1, cfg_.n_max, combo.mode);
                bool profile_ok = true;
                std::uint64_t bad_profile_n = 0;
                for (std::uint64_t n = 1; n <= cfg_.n_max; ++n) {
                    if (prof.at(n).count != counts[n - 1] ||
                        counts[n - 1] > spans[n - 1].size()) {
                        profile_ok = false;
                        bad_profile_n = n;
                        break;
                    }
                }
                check(profile_ok, "profile_matches_brute_counts",
                      witness(combo, {{"x", xs[xi]}, {"eps", eps}, {"n", bad_profile_n}}));

                for (std::uint64_t n : {std::uint64_t{1}, cfg_.n_max / 2, cfg_.n_max}) {
                    if (n < 1) continue;
                    const std::uint64_t direct =
                        exceedance_count(f, xs[xi], *combo.weights,
                                         accumulate(*combo.weights, *combo.scheme, n), eps,
                                         combo.mode);
                    check(direct == counts[n - 1], "direct_count_matches_brute",
                          witness(combo, {{"x", xs[xi]}, {"eps", eps}, {"n", n}}));
                }
            }
        }

        // (d) chain domination, at one representative epsilon.
        {
            const double eps = cfg_.epsilons.front();
            AnalysisWindows win(*combo.weights, *combo.scheme, 1, cfg_.n_max, combo.mode);
            const std::uint64_t wk = win.k_max();
            check(wk <= k_max, "route_index_range",
                  witness(combo, {{"eps", eps}, {"k_max", wk}}));
            const auto a_route = sup_deviation_flags(f, grid, win, eps);
            const auto b_route = forall_deviation_flags(f, grid, win, eps);

            std::vector<unsigned char> brute_sup(std::min(wk, k_max), 0),
                brute_all(std::min(wk, k_max), 0);
            for (std::uint64_t k = 1; k <= std::min(wk, k_max); ++k) {
                double sup = 0.0;
                bool everywhere = true;
                for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                    sup = std::max(sup, dev_f[xi][k - 1]);
                    everywhere = everywhere &&
                                 ((*combo.weights)(k)*dev_f[xi][k - 1] >= eps);
                }
                brute_sup[k - 1] = ((*combo.weights)(k)*sup >= eps) ? 1 : 0;
                brute_all[k - 1] = everywhere ? 1 : 0;
            }
            check(a_route == brute_sup, "sup_route_matches_brute",
                  witness(combo, {{"eps", eps}}));
            check(b_route == brute_all, "forall_route_matches_brute",
                  witness(combo, {{"eps", eps}}));

            bool chain_ok = true;
            nlohmann::ordered_json chain_witness;
            for (std::size_t xi = 0; xi < xs.size() && chain_ok; ++xi) {
                const auto flag_x = flags_of(dev_f[xi], *combo.weights, eps);
                for (std::uint64_t k = 1; k <= std::min(wk, k_max) && chain_ok; ++k) {
                    if (brute_all[k - 1] && !flag_x[k - 1]) {
                        chain_ok = false;
                        chain_witness = {{"x", xs[xi]}, {"k", k}, {"side", "forall in pointwise"}};
                    }
                    if (flag_x[k - 1] && !brute_sup[k - 1]) {
                        chain_ok = false;
                        chain_witness = {{"x", xs[xi]}, {"k", k}, {"side", "pointwise in sup"}};
                    }
                }
            }
            check(chain_ok, "chain_domination", witness(combo, chain_witness));

            // Equi defect bounds every per-x field value.
            for (std::uint64_t m : {std::max<std::uint64_t>(1, cfg_.n_max / 2), cfg_.n_max}) {
                const DensityField field =
                    s_field(f, grid, *combo.weights, *combo.scheme, 1.0, eps, m, combo.mode);
                const IndexSpan span = brute_span(*combo.weights, *combo.scheme, m, combo.mode);
                const double total = accumulate(*combo.weights, *combo.scheme, m).total;
                bool defect_ok = true;
                double brute_defect = 0.0;
                for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                    const auto flag_x = flags_of(dev_f[xi], *combo.weights, eps);
                    const double v = density_at(count_in_span(flag_x, span), total, 1.0);
                    brute_defect = std::max(brute_defect, v);
                    if (v > field.defect) defect_ok = false;
                }
                check(defect_ok && field.defect == brute_defect, "equi_defect_dominates",
                      witness(combo, {{"m", m}, {"eps", eps}}));
            }
        }

        // (e) alpha-cut endpoint profiles, at one (x, eps) per combo.
        {
            const double eps = cfg_.epsilons[cfg_.epsilons.size() / 2];
            const std::size_t xi = xs.size() / 2;
            const AlphaCutProfiles cuts =
                alpha_cut_profiles(f, xs[xi], *combo.weights, *combo.scheme, 1.0, eps, 1,
                                   cfg_.n_max, combo.mode);
            const auto metric_flags = flags_of(dev_f[xi], *combo.weights, eps);
            bool bound_ok = true;
            std::uint64_t bad_n = 0;
            for (std::uint64_t n = 1; n <= cfg_.n_max; ++n) {
                const std::uint64_t metric_count = count_in_span(metric_flags, spans[n - 1]);
                if (cuts.max_entries[n - 1].count > metric_count) {
                    bound_ok = false;
                    bad_n = n;
                    break;
                }
            }
            check(bound_ok, "alpha_cut_count_bound",
                  witness(combo, {{"x", xs[xi]}, {"eps", eps}, {"n", bad_n}}));
            check(cuts.union_matches_metric, "alpha_cut_union_equals_metric",
                  witness(combo, {{"x", xs[xi]}, {"eps", eps}}));
        }
    }

    // (f) subinterval restriction, once per pair on the statistical preset.
    // classify needs a minimal horizon, so degenerate n_max runs skip it.
    if (with_classify && cfg_.n_max >= 8) {
        ClassifyOptions opt;
        opt.theta = 1.0;
        opt.epsilon = cfg_.epsilons.front();
        opt.n_max = cfg_.n_max;
        opt.index_mode = IndexMode::prefix;
        opt.keep_per_x = true;
        const Classification full = classify(f, grid, unit, statistical, opt);
        const SpatialGrid subgrid = grid.restrict_to(0.25, 0.75);
        const Classification sub = classify(f, subgrid, unit, statistical, opt);

        bool match = true;
        double full_worst = 0.0, sub_worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            full_worst = std::max(full_worst, full.per_x_tails[i]);
        for (std::size_t j = 0; j < subgrid.size(); ++j) {
            sub_worst = std::max(sub_worst, sub.per_x_tails[j]);
            for (std::size_t i = 0; i < grid.size(); ++i)
                if (grid.point(i) == subgrid.point(j) &&
                    full.per_x_counts[i] != sub.per_x_counts[j])
                    match = false;
        }
        check(match, "subinterval_per_x_agreement",
              nlohmann::ordered_json{{"family", tag}, {"seed", cfg_.seed}});
        check(sub_worst <= full_worst, "subinterval_no_worse",
              nlohmann::ordered_json{{"family", tag},
                                     {"seed", cfg_.seed},
                                     {"sub_worst", sub_worst},
                                     {"full_worst", full_worst}});
    }
}

} // namespace

nlohmann::ordered_json TheoremSuiteReport::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["n_max"] = n_max;
    j["checks_run"] = checks_run;
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : violations)
        arr.push_back({{"property", v.property}, {"witness", v.witness}});
    j["violations"] = std::move(arr);
    return j;
}

TheoremSuiteReport run_theorem_suite(const TheoremSuiteConfig& cfg) {
    if (cfg.n_max < 1) throw std::invalid_argument("run_theorem_suite: n_max must be at least 1");
    SuiteRunner runner(cfg);
    return runner.run();
}

} // namespace fuzzstat
