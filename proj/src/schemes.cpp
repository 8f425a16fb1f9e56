#include "fuzzstat/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace fuzzstat {

WeightSequence::WeightSequence(std::string name, Rule rule, double declared_liminf,
                               std::optional<double> declared_upper)
    : name_(std::move(name)), rule_(std::move(rule)),
      declared_liminf_(declared_liminf), declared_upper_(declared_upper) {
    if (!rule_) throw std::invalid_argument("WeightSequence: missing rule");
    if (!(declared_liminf_ > 0.0))
        throw std::invalid_argument("WeightSequence: declared tail bound must be positive");
    double t1 = rule_(1);
    if (!(t1 > 0.0)) throw std::invalid_argument("WeightSequence: t_1 must be positive");
}

WeightSequence WeightSequence::unit() {
    return WeightSequence("weights:unit", [](std::uint64_t) { return 1.0; }, 1.0, 1.0);
}

WeightSequence WeightSequence::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("WeightSequence::constant: need a positive finite value");
    return WeightSequence("weights:const:" + std::to_string(c),
                          [c](std::uint64_t) { return c; }, c, c);
}

WeightSequence WeightSequence::reciprocal() {
    return WeightSequence("weights:inv_k",
                          [](std::uint64_t k) { return 1.0 / static_cast<double>(k); },
                          0.1, 1.0);
}

std::uint64_t integer_sqrt(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

WindowScheme WindowScheme::from_real_rules(std::string name, RealRule lo_rule, RealRule hi_rule) {
    if (!lo_rule || !hi_rule)
        throw std::invalid_argument("WindowScheme: missing edge rule");
    WindowScheme s;
    s.name_ = std::move(name);
    s.lo_rule_ = lo_rule;
    s.hi_rule_ = hi_rule;
    s.rule_ = [lo_rule, hi_rule](std::uint64_t n) {
        double a = lo_rule(n);
        double b = hi_rule(n);
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::domain_error("WindowScheme: edge rule not finite at n=" + std::to_string(n));
        if (!(a > 0.0))
            throw std::domain_error("WindowScheme: lower edge must be positive at n=" + std::to_string(n));
        double lo = std::ceil(a);
        double hi = std::floor(b);
        constexpr double exact_max = 9007199254740992.0; // 2^53
        if (lo > exact_max || hi > exact_max)
            throw std::domain_error("WindowScheme: edge exceeds exact double range at n=" + std::to_string(n));
        IndexWindow w;
        w.lo = static_cast<wide_uint>(lo);
        if (hi < 1.0) { w.hi = 0; w.lo = 1; return w; } // empty
        w.hi = static_cast<wide_uint>(hi);
        return w;
    };
    return s;
}

WindowScheme WindowScheme::from_window_rule(std::string name, WindowRule rule,
                                            std::optional<std::uint64_t> representable_horizon) {
    if (!rule) throw std::invalid_argument("WindowScheme: missing rule");
    WindowScheme s;
    s.name_ = std::move(name);
    s.rule_ = std::move(rule);
    s.representable_horizon_ = representable_horizon;
    return s;
}

WindowScheme WindowScheme::statistical() {
    auto s = from_window_rule("preset:statistical", [](std::uint64_t n) {
        return IndexWindow{1, static_cast<wide_uint>(n)};
    });
    s.lo_rule_ = [](std::uint64_t) { return 1.0; };
    s.hi_rule_ = [](std::uint64_t n) { return static_cast<double>(n); };
    return s;
}

WindowScheme WindowScheme::lambda_windows(std::string name,
                                          std::function<std::uint64_t(std::uint64_t)> lambda,
                                          std::uint64_t check_horizon) {
    if (!lambda) throw std::invalid_argument("lambda_windows: missing rule");
    if (lambda(1) != 1)
        throw std::invalid_argument(name + ": lambda(1) must be 1 (failing index 1)");
    std::uint64_t prev = 1;
    for (std::uint64_t n = 2; n <= check_horizon; ++n) {
        std::uint64_t cur = lambda(n);
        if (cur < prev)
            throw std::invalid_argument(name + ": lambda must be nondecreasing (failing index " +
                                        std::to_string(n) + ")");
        if (cur > prev + 1)
            throw std::invalid_argument(name + ": lambda may grow by at most 1 per step (failing index " +
                                        std::to_string(n) + ")");
        prev = cur;
    }
    auto s = from_window_rule(name, [lambda](std::uint64_t n) {
        std::uint64_t l = lambda(n);
        if (l < 1 || l > n)
            throw std::domain_error("lambda window out of range at n=" + std::to_string(n));
        return IndexWindow{static_cast<wide_uint>(n - l + 1), static_cast<wide_uint>(n)};
    });
    s.lo_rule_ = [lambda](std::uint64_t n) {
        return static_cast<double>(n) - static_cast<double>(lambda(n)) + 1.0;
    };
    s.hi_rule_ = [](std::uint64_t n) { return static_cast<double>(n); };
    return s;
}

WindowScheme WindowScheme::lambda_sqrt() {
    return lambda_windows("preset:lambda:sqrt", [](std::uint64_t n) { return integer_sqrt(n); });
}

WindowScheme WindowScheme::lambda_linear() {
    return lambda_windows("preset:lambda:linear", [](std::uint64_t n) { return n; });
}

WindowScheme WindowScheme::lacunary(std::string name,
                                    std::function<wide_uint(std::uint64_t)> points,
                                    std::optional<std::uint64_t> representable_horizon,
                                    std::uint64_t check_horizon) {
    if (!points) throw std::invalid_argument("lacunary: missing point sequence");
    std::uint64_t limit = check_horizon;
    if (representable_horizon) limit = std::min(limit, *representable_horizon);
    wide_uint prev = points(0);
    for (std::uint64_t r = 1; r <= limit; ++r) {
        wide_uint cur = points(r);
        if (cur <= prev)
            throw std::invalid_argument(name + ": point sequence must be strictly increasing (failing index " +
                                        std::to_string(r) + ")");
        prev = cur;
    }
    return from_window_rule(name, [points, name](std::uint64_t r) {
        if (r < 1) throw std::domain_error(name + ": window index starts at 1");
        return IndexWindow{points(r - 1) + 1, points(r)};
    }, representable_horizon);
}

WindowScheme WindowScheme::lacunary_pow2() {
    return lacunary("preset:lacunary:pow2",
                    [](std::uint64_t r) { return wide_uint{1} << r; },
                    /*representable_horizon=*/126);
}

IndexWindow WindowScheme::window(std::uint64_t n) const {
    if (n < 1) throw std::domain_error("WindowScheme: window index starts at 1");
    if (representable_horizon_ && n > *representable_horizon_)
        throw std::domain_error("WindowScheme " + name_ + ": index " + std::to_string(n) +
                                " beyond representable horizon " + std::to_string(*representable_horizon_));
    return rule_(n);
}

double WindowScheme::lo_value(std::uint64_t n) const {
    if (lo_rule_) return lo_rule_(n);
    IndexWindow w = window(n);
    return static_cast<double>(w.lo);
}

double WindowScheme::hi_value(std::uint64_t n) const {
    if (hi_rule_) return hi_rule_(n);
    IndexWindow w = window(n);
    return static_cast<double>(w.hi);
}

double WindowAccumulation::total_pow(double theta) const {
    return theta == 1.0 ? total : std::pow(total, theta);
}

WindowAccumulation accumulate(const WeightSequence& w, const WindowScheme& s, std::uint64_t n) {
    IndexWindow win = s.window(n);
    if (win.empty())
        throw std::domain_error("accumulate: empty window at n=" + std::to_string(n));
    if (!fits_u64(win.hi) || win.size() > max_iterable_window)
        throw std::length_error("accumulate: window too large to iterate at n=" + std::to_string(n));
    double total = 0.0;
    for (std::uint64_t k = static_cast<std::uint64_t>(win.lo);
         k <= static_cast<std::uint64_t>(win.hi); ++k) {
        double t = w(k);
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::domain_error("accumulate: weight not a finite nonnegative value at k=" +
                                    std::to_string(k));
        total += t;
    }
    if (!(total > 0.0))
        throw std::domain_error("accumulate: window total must be positive at n=" + std::to_string(n));
    return WindowAccumulation{n, win, total};
}

bool ValidationReport::passed() const {
    return std::all_of(items.begin(), items.end(),
                       [](const ValidationItem& it) { return it.passed; });
}

nlohmann::ordered_json ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["horizon"] = horizon;
    j["checked_horizon"] = checked_horizon;
    j["clamped_to_representable_prefix"] = clamped;
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& it : items) {
        nlohmann::ordered_json e;
        e["check"] = it.check;
        e["passed"] = it.passed;
        e["surrogate"] = it.surrogate;
        if (it.witness) e["witness_index"] = *it.witness;
        if (!it.detail.empty()) e["detail"] = it.detail;
        arr.push_back(std::move(e));
    }
    j["items"] = std::move(arr);
    return j;
}

ValidationReport validate(const WeightSequence& w, const WindowScheme& s,
                          std::uint64_t horizon, const ValidationConfig& cfg) {
    if (horizon < 4) throw std::invalid_argument("validate: horizon must be at least 4");

    ValidationReport rep;
    rep.horizon = horizon;
    rep.checked_horizon = horizon;
    if (s.representable_horizon() && *s.representable_horizon() < horizon) {
        rep.checked_horizon = *s.representable_horizon();
        rep.clamped = true;
    }
    std::uint64_t H = rep.checked_horizon;

    // --- weights ---
    {
        ValidationItem it{"weights.t1_positive", w(1) > 0.0, false, std::nullopt, ""};
        if (!it.passed) it.witness = 1;
        rep.items.push_back(it);
    }
    {
        std::uint64_t first = std::max<std::uint64_t>(1, cfg.weight_check_first);
        std::uint64_t last = cfg.weight_check_last.value_or(horizon);
        ValidationItem it{"weights.tail_lower_bound", true, true, std::nullopt, ""};
        for (std::uint64_t k = first; k <= last; ++k) {
            double t = w(k);
            if (!(t >= w.declared_liminf())) {
                it.passed = false;
                it.witness = k;
                it.detail = "t_k=" + std::to_string(t) + " < declared bound " +
                            std::to_string(w.declared_liminf());
                break;
            }
        }
        if (it.passed)
            it.detail = "min over [" + std::to_string(first) + "," + std::to_string(last) +
                        "] >= " + std::to_string(w.declared_liminf());
        rep.items.push_back(it);
    }
    if (w.declared_upper()) {
        ValidationItem it{"weights.upper_bound", true, true, std::nullopt, ""};
        for (std::uint64_t k = 1; k <= horizon; ++k) {
            if (!(w(k) <= *w.declared_upper())) {
                it.passed = false;
                it.witness = k;
                it.detail = "t_k above declared upper bound " + std::to_string(*w.declared_upper());
                break;
            }
        }
        rep.items.push_back(it);
    }

    // --- window edges ---
    ValidationItem lo_mono{"scheme.lower_edge_nondecreasing", true, false, std::nullopt, ""};
    ValidationItem hi_mono{"scheme.upper_edge_nondecreasing", true, false, std::nullopt, ""};
    ValidationItem ordered{"scheme.upper_at_least_lower", true, false, std::nullopt, ""};
    ValidationItem nonempty{"scheme.window_nonempty", true, false, std::nullopt, ""};
    ValidationItem evaluable{"scheme.window_evaluable", true, false, std::nullopt, ""};

    std::vector<IndexWindow> wins;
    wins.reserve(H);
    for (std::uint64_t n = 1; n <= H; ++n) {
        try {
            wins.push_back(s.window(n));
        } catch (const std::exception& e) {
            evaluable.passed = false;
            evaluable.witness = n;
            evaluable.detail = e.what();
            break;
        }
    }
    std::uint64_t evaluated = wins.size();
    for (std::uint64_t n = 1; n <= evaluated; ++n) {
        const IndexWindow& win = wins[n - 1];
        if (win.empty() && nonempty.passed) {
            nonempty.passed = false;
            nonempty.witness = n;
        }
        if (n > 1) {
            const IndexWindow& prev = wins[n - 2];
            if (win.lo < prev.lo && lo_mono.passed) {
                lo_mono.passed = false;
                lo_mono.witness = n;
            }
            if (win.hi < prev.hi && hi_mono.passed) {
                hi_mono.passed = false;
                hi_mono.witness = n;
            }
        }
    }
    // With real-valued edge rules, check ordering on the rules themselves;
    // integer windows can be empty (hi < lo) even when the real edges satisfy
    // hi_rule >= lo_rule, and that is reported by the nonempty check instead.
    if (s.has_real_rules()) {
        for (std::uint64_t n = 1; n <= evaluated; ++n) {
            if (!(s.hi_value(n) >= s.lo_value(n))) {
                ordered.passed = false;
                ordered.witness = n;
                break;
            }
        }
    } else {
        for (std::uint64_t n = 1; n <= evaluated; ++n) {
            if (wins[n - 1].hi + 1 < wins[n - 1].lo) {
                ordered.passed = false;
                ordered.witness = n;
                break;
            }
        }
    }

    // Gap growth surrogate: gap(N) > gap(N/2) and gap(N) > floor.
    ValidationItem gap{"scheme.gap_growth", false, true, std::nullopt, ""};
    if (evaluated >= 4) {
        std::uint64_t N = evaluated;
        std::uint64_t M = N / 2;
        auto gap_of = [&](std::uint64_t n) -> wide_uint {
            const IndexWindow& win = wins[n - 1];
            return win.empty() ? 0 : win.hi - win.lo;
        };
        wide_uint gN = gap_of(N), gM = gap_of(M);
        bool grows = gN > gM;
        bool above_floor = static_cast<double>(gN) > cfg.gap_floor;
        gap.passed = grows && above_floor;
        gap.detail = "gap(" + std::to_string(N) + ")=" + to_string(gN) +
                     ", gap(" + std::to_string(M) + ")=" + to_string(gM) +
                     ", floor=" + std::to_string(cfg.gap_floor);
        if (!gap.passed) gap.witness = N;
    } else {
        gap.detail = "fewer than 4 evaluable windows";
        gap.witness = evaluated;
    }

    // Window totals nondecreasing. Totals come from one shared weight prefix
    // sum, so the check costs O(max endpoint) rather than O(sum of window
    // sizes); windows whose endpoint exceeds the budget are skipped and noted.
    ValidationItem totals{"scheme.window_total_nondecreasing", true, true, std::nullopt, ""};
    {
        constexpr std::uint64_t endpoint_budget = std::uint64_t{1} << 24;
        std::vector<double> prefix{0.0};        // prefix[k] = t_1 + ... + t_k
        auto prefix_to = [&](std::uint64_t k) {
            while (prefix.size() <= k)
                prefix.push_back(prefix.back() + w(prefix.size()));
            return prefix[k];
        };
        double prev_total = 0.0;
        bool have_prev = false;
        for (std::uint64_t n = 1; n <= evaluated; ++n) {
            const IndexWindow& win = wins[n - 1];
            if (win.empty()) continue;
            if (win.hi > endpoint_budget) {
                totals.detail = "totals checked up to n=" + std::to_string(n - 1) +
                                " (window endpoint beyond iteration budget)";
                break;
            }
            double total = prefix_to(static_cast<std::uint64_t>(win.hi)) -
                           prefix_to(static_cast<std::uint64_t>(win.lo) - 1);
            if (have_prev && total < prev_total) {
                totals.passed = false;
                totals.witness = n;
                break;
            }
            prev_total = total;
            have_prev = true;
        }
    }

    rep.items.push_back(lo_mono);
    rep.items.push_back(hi_mono);
    rep.items.push_back(ordered);
    rep.items.push_back(nonempty);
    rep.items.push_back(evaluable);
    rep.items.push_back(gap);
    rep.items.push_back(totals);
    return rep;
}

// ---------------------------------------------------------------------------
// spec-string parsing
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_real_token(const std::string& tok) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw SpecParseError("expected a number", tok);
    }
}

// Affine expression in n: [coef] "n" [("+"|"-") constant] or a bare constant.
struct AffineExpr {
    double coef = 0.0;   // multiplies n
    double shift = 0.0;
};

AffineExpr parse_affine(const std::string& tok) {
    if (tok.empty()) throw SpecParseError("empty window edge expression", tok);
    AffineExpr e;
    std::size_t npos = tok.find('n');
    if (npos == std::string::npos) {
        e.shift = parse_real_token(tok);
        return e;
    }
    if (tok.find('n', npos + 1) != std::string::npos)
        throw SpecParseError("window edge expression may mention n once", tok);
    std::string head = tok.substr(0, npos);
    std::string rest = tok.substr(npos + 1);
    if (head.empty())
        e.coef = 1.0;
    else if (head == "-")
        e.coef = -1.0;
    else
        e.coef = parse_real_token(head);
    if (!rest.empty()) {
        if (rest[0] != '+' && rest[0] != '-')
            throw SpecParseError("expected +c or -c after n", tok);
        e.shift = parse_real_token(rest);
    }
    return e;
}

} // namespace

WindowScheme parse_scheme(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.empty() || parts[0].empty())
        throw SpecParseError("empty scheme spec", spec);
    if (parts[0] == "window") {
        if (parts.size() != 2)
            throw SpecParseError("window spec must look like window:<lo>,<hi>", spec);
        auto edges = split(parts[1], ',');
        if (edges.size() != 2)
            throw SpecParseError("window spec needs two comma-separated edges", parts[1]);
        AffineExpr lo = parse_affine(edges[0]);
        AffineExpr hi = parse_affine(edges[1]);
        return WindowScheme::from_real_rules(
            "window:" + parts[1],
            [lo](std::uint64_t n) { return lo.coef * static_cast<double>(n) + lo.shift; },
            [hi](std::uint64_t n) { return hi.coef * static_cast<double>(n) + hi.shift; });
    }
    if (parts[0] == "preset") {
        if (parts.size() < 2) throw SpecParseError("preset spec needs a name", spec);
        const std::string& name = parts[1];
        if (name == "statistical") {
            if (parts.size() != 2) throw SpecParseError("preset:statistical takes no parameters", spec);
            return WindowScheme::statistical();
        }
        if (name == "lambda" || name == "lambda_stat") {
            if (parts.size() != 3) throw SpecParseError("preset:lambda needs a rule (sqrt|linear)", spec);
            if (parts[2] == "sqrt") return WindowScheme::lambda_sqrt();
            if (parts[2] == "linear") return WindowScheme::lambda_linear();
            throw SpecParseError("unknown lambda rule", parts[2]);
        }
        if (name == "lacunary") {
            if (parts.size() != 3) throw SpecParseError("preset:lacunary needs a rule (pow2)", spec);
            if (parts[2] == "pow2") return WindowScheme::lacunary_pow2();
            throw SpecParseError("unknown lacunary rule", parts[2]);
        }
        throw SpecParseError("unknown preset", name);
    }
    throw SpecParseError("unknown scheme kind (expected window: or preset:)", parts[0]);
}

WeightSequence parse_weights(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.empty() || parts[0] != "weights")
        throw SpecParseError("weight spec must start with weights:", spec);
    if (parts.size() < 2) throw SpecParseError("weight spec needs a name", spec);
    const std::string& name = parts[1];
    if (name == "unit") {
        if (parts.size() != 2) throw SpecParseError("weights:unit takes no parameters", spec);
        return WeightSequence::unit();
    }
    if (name == "const") {
        if (parts.size() != 3) throw SpecParseError("weights:const needs a value", spec);
        return WeightSequence::constant(parse_real_token(parts[2]));
    }
    if (name == "inv_k") {
        if (parts.size() != 2) throw SpecParseError("weights:inv_k takes no parameters", spec);
        return WeightSequence::reciprocal();
    }
    throw SpecParseError("unknown weight rule", name);
}

} // namespace fuzzstat
