#include "stenv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stenv/environment.hpp"
#include "stenv/extrema.hpp"
#include "stenv/fluctuation.hpp"
#include "stenv/laplace_inversion.hpp"
#include "stenv/montecarlo.hpp"
#include "stenv/quadrature.hpp"
#include "stenv/scale_functions.hpp"
#include "stenv/walk_demo.hpp"

namespace stenv {
namespace {

// Pinned tolerances.  The Monte Carlo suite uses "3 standard errors plus the
// stated grid allowance"; everything deterministic is absolute.
constexpr double kTolBiasEndpoints = 1e-12;
constexpr double kTolGForms = 1e-8;
constexpr double kTolBrownianLt = 1e-10;
constexpr double kTolMeanSum = 1e-12;
constexpr double kTolMeanFdRel = 1e-4;
constexpr double kTolExitProduct = 1e-12;
// The slope transform is evaluated in extended precision, so this comparison
// sees the full double-precision roundoff of the scale-function composition
// (measured up to ~2e-10 at the cancellation-heavy fractional-a points).
constexpr double kTolCompose = 1e-9;
// Closed form vs quadrature-backed tilted transform: the quadrature's
// absolute error is divided by a small regularized-gamma tail (measured up
// to ~2e-9 at u = 5).
constexpr double kTolUndershoot = 1e-8;
constexpr double kTolScaleLaplace = 1e-6;
constexpr double kTolInversionVsSeries = 1e-4;
constexpr double kTolCdfMonotone = 1e-5;
constexpr double kTolNormalization = 1e-3;
constexpr double kSignAllowance = 0.01;    // grid allowance, sign of the limit position
constexpr double kMeanRelAllowance = 0.05; // grid allowance, slope means
constexpr double kKsMax = 0.03;            // full sample size (2e4 paths)
constexpr double kKsMaxFast = 0.06;        // widened for the fast sample size

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Tracks the worst margin |deviation| / tolerance across sub-checks.
struct Worst {
    double ratio = 0.0;
    std::string what;
    bool pass = true;

    void add(const std::string& name, double dev, double tol) {
        const double r = tol > 0.0 ? std::abs(dev) / tol : (dev == 0.0 ? 0.0 : 1e300);
        if (r > ratio) {
            ratio = r;
            what = name + fmt(" |dev|=%.3g tol=%.3g", std::abs(dev), tol);
        }
        if (!(std::abs(dev) <= tol))
            pass = false;
    }
    std::string detail() const { return fmt("worst %s (%.2f of tol)", what.c_str(), ratio); }
};

// ---------------------------------------------------------------- criteria 1-4

bool crit_bias_endpoints(std::string& d) {
    Worst w;
    w.add("gamma(1)-1", bias_gamma(1.0) - 1.0, kTolBiasEndpoints);
    w.add("gamma(2)-0.5", bias_gamma(2.0) - 0.5, kTolBiasEndpoints);
    bool mono = true;
    double prev = bias_gamma(1.0);
    for (int i = 1; i <= 200; ++i) {
        const double g = bias_gamma(1.0 + double(i) / 200.0);
        if (!(g < prev))
            mono = false;
        prev = g;
    }
    d = w.detail() + (mono ? ", strictly decreasing over 201 pts" : ", MONOTONICITY FAILED");
    return w.pass && mono;
}

bool crit_g_forms(std::string& d) {
    Worst w;
    for (double a : {1.1, 1.5, 1.9, 2.0})
        w.add(fmt("a=%g", a), g_closed(a) - g_integral(a), kTolGForms);
    d = w.detail();
    return w.pass;
}

bool crit_brownian_lt(std::string& d) {
    ScaleContext ctx;
    ctx.a = 2.0;
    Worst w;
    for (double u : {0.1, 1.0, 10.0}) {
        const double ref = 1.0 / std::cosh(std::sqrt(u));
        w.add(fmt("up,u=%g", u), slope_length_lt(ctx, SlopeKind::Upward, u) - ref,
              kTolBrownianLt);
        w.add(fmt("down,u=%g", u), slope_length_lt(ctx, SlopeKind::Downward, u) - ref,
              kTolBrownianLt);
    }
    d = w.detail();
    return w.pass;
}

bool crit_mean_identities(std::string& d) {
    Worst w;
    for (double a : {1.3, 1.7, 2.0}) {
        ScaleContext ctx;
        ctx.a = a;
        const double mu = slope_length_mean(ctx, SlopeKind::Upward);
        const double md = slope_length_mean(ctx, SlopeKind::Downward);
        const double target = 1.0 / ((a - 1.0) * std::exp(log_gamma(a)));
        w.add(fmt("sum,a=%g", a), mu + md - target, kTolMeanSum);
        const double u = 1e-6;
        for (SlopeKind kind : {SlopeKind::Upward, SlopeKind::Downward}) {
            const double mean =
                slope_length_mean(ctx, kind);
            const double fd = (1.0 - slope_length_lt(ctx, kind, u)) / u;
            w.add(fmt("fd,%s,a=%g", kind == SlopeKind::Upward ? "up" : "down", a),
                  fd / mean - 1.0, kTolMeanFdRel);
        }
    }
    d = w.detail();
    return w.pass;
}

// ---------------------------------------------------------------- criterion 5

bool crit_fluctuation_algebra(std::string& d) {
    Worst w;
    for (double a : {1.3, 1.7, 2.0}) {
        ScaleContext ctx;
        ctx.a = a;
        for (double u : {0.1, 1.0, 5.0}) {
            const double up_exc = lt_up_excursion(ctx, u, 1.0);
            const double down_run = lt_down_run(ctx, u, 1.0);
            w.add(fmt("exit,a=%g,u=%g", a, u), up_exc * down_run * Zq(ctx, u, 1.0) - 1.0,
                  kTolExitProduct);

            const double up_all = lt_up_run(ctx, u, std::nullopt, 1.0);
            w.add(fmt("compose-up,a=%g,u=%g", a, u),
                  up_exc * up_all - slope_length_lt(ctx, SlopeKind::Upward, u),
                  kTolCompose);
            const double down_exc = lt_down_excursion(ctx, HittingParams{u, 0.0, 1.0});
            w.add(fmt("compose-down,a=%g,u=%g", a, u),
                  down_exc * down_run - slope_length_lt(ctx, SlopeKind::Downward, u),
                  kTolCompose);

            // closed incomplete-gamma form against the quadrature-based
            // exponentially tilted Z at q = -psi(u)
            const double tz = tilted_Z(ctx, u, -psi(ctx, u), 1.0);
            w.add(fmt("undershoot,a=%g,u=%g", a, u),
                  lt_undershoot(ctx, u, 1.0) - std::exp(-u) / tz, kTolUndershoot);
        }
    }
    d = w.detail();
    return w.pass;
}

// ---------------------------------------------------------------- criterion 6

bool crit_scale_laplace(std::string& d) {
    Worst w;
    for (double a : {1.3, 1.7, 2.0}) {
        ScaleContext ctx;
        ctx.a = a;
        for (double q : {0.0, 0.5, 2.0}) {
            const double lam = 2.0 * phi(ctx, q) + 1.0;
            // tail beyond 30: integrand ~ e^{-(lam - phi(q)) z} with rate >= 1
            const double integral = integrate_adaptive(
                [&](double z) { return std::exp(-lam * z) * Wq(ctx, q, z); }, 0.0, 30.0,
                1e-9);
            w.add(fmt("a=%g,q=%g", a, q), integral - 1.0 / (psi(ctx, lam) - q),
                  kTolScaleLaplace);
        }
    }
    d = w.detail();
    return w.pass;
}

// ---------------------------------------------------------------- criterion 7

bool crit_inversion(std::string& d) {
    Worst w;
    const TransformHandle sech = [](double lam) { return 1.0 / std::cosh(std::sqrt(lam)); };
    // the sech transform is evaluable to machine precision, so the highest
    // supported order pays off; series-backed transforms stay at the default
    InversionConfig inv;
    inv.n_terms = 20;
    double max_dev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = 0.1 + (5.0 - 0.1) * double(i) / 49.0;
        max_dev = std::max(max_dev,
                           std::abs(gaver_stehfest(sech, t, inv) - kesten_oracle_density(t)));
    }
    w.add("sech-vs-series", max_dev, kTolInversionVsSeries);

    for (double a : {1.5, 2.0}) {
        ScaleContext ctx;
        ctx.a = a;
        double worst_drop = 0.0, prev = 0.0;
        for (int i = 0; i <= 160; ++i) {
            const double x = -8.0 + 16.0 * double(i) / 160.0;
            const double F = cdf_b1(ctx, x);
            if (i > 0)
                worst_drop = std::max(worst_drop, prev - F);
            prev = F;
        }
        w.add(fmt("cdf-monotone,a=%g", a), worst_drop, kTolCdfMonotone);

        const double T = a == 2.0 ? 6.0 : 24.0;
        const double body = integrate_adaptive(
                                [&](double x) { return density_b1(ctx, x); }, -T, 0.0, 1e-6) +
                            integrate_adaptive(
                                [&](double x) { return density_b1(ctx, x); }, 0.0, T, 1e-6);
        const double tails = cdf_b1(ctx, -T) + (1.0 - cdf_b1(ctx, T));
        w.add(fmt("normalization,a=%g", a), body + tails - 1.0, kTolNormalization);
    }
    d = w.detail();
    return w.pass;
}

// ---------------------------------------------------------------- criterion 8

McConfig mc_config(double a, const AcceptanceOptions& opt) {
    McConfig cfg;
    cfg.sim.a = a;
    cfg.sim.h = 1e-3;
    cfg.sim.seed = 0x5eedULL;
    cfg.threads = opt.threads;
    cfg.n_paths = opt.fast ? 2000 : 20000;
    cfg.n_increment_probes = opt.fast ? 200000 : 1000000;
    cfg.n_renewal_sequences = opt.fast ? 4000 : 20000;
    return cfg;
}

void check_z(Worst& w, const McReport& rep, const std::string& name, double extra = 0.0) {
    const auto it = rep.comparisons.find(name);
    if (it == rep.comparisons.end()) {
        w.add(rep.mode + "/" + name + " MISSING", 1.0, 0.5);
        return;
    }
    const Comparison& c = it->second;
    w.add(rep.mode + "/" + name, c.empirical - c.analytic, 3.0 * c.se + extra);
}

bool crit_monte_carlo(const AcceptanceOptions& opt, std::string& d) {
    Worst w;
    std::size_t retries = 0, failed = 0;
    for (double a : {1.5, 2.0}) {
        const McConfig cfg = mc_config(a, opt);

        const McReport inc = calibrate_increments(cfg);
        check_z(w, inc, "sign_vs_inv_a");
        check_z(w, inc, "exp_moment_lambda0.25");
        check_z(w, inc, "exp_moment_lambda0.5");

        const McReport bl = estimate_b1_law(cfg);
        check_z(w, bl, "sign_vs_gamma", kSignAllowance);
        w.add(fmt("b1_law/ks,a=%g", a), bl.ks_statistic.value_or(1.0),
              opt.fast ? kKsMaxFast : kKsMax);
        retries += bl.cap_retries;
        failed += bl.failed_paths;

        const McReport sl = estimate_slope_stats(cfg);
        for (const char* name : {"up_mean", "down_mean"}) {
            const Comparison& c = sl.comparisons.at(name);
            w.add(fmt("slope/%s,a=%g", name, a), c.empirical - c.analytic,
                  3.0 * c.se + kMeanRelAllowance * c.analytic);
        }
        for (double u : {0.5, 1.0, 2.0}) {
            check_z(w, sl, fmt("up_lt_u%g", u));
            check_z(w, sl, fmt("down_lt_u%g", u));
        }
        retries += sl.cap_retries;
        failed += sl.failed_paths;

        const double xs[] = {0.0};
        const McReport rn = renewal_overshoot_check(cfg, xs);
        const Comparison& c = rn.comparisons.at("overshoot_x0");
        w.add(fmt("renewal/x0,a=%g", a), c.empirical - (1.0 - bias_gamma(a)),
              3.0 * c.se);
    }
    d = w.detail() + fmt("; cap retries %zu, failed paths %zu", retries, failed);
    return w.pass;
}

// ---------------------------------------------------------------- criterion 9

bool crit_walk_demo(const AcceptanceOptions& opt, std::string& d) {
    // Blocking sub-checks: flat-environment reduction and odds telescoping.
    bool pass = true;
    {
        EnvironmentPath flat;
        flat.h = 0.01;
        flat.origin = 50;
        flat.values.assign(101, 0.0);
        for (double p : build_chain(flat).p_right)
            if (p != 0.5)
                pass = false;
    }
    {
        SimConfig sim;
        sim.a = 1.5;
        sim.seed = 0x5eedULL;
        const EnvironmentPath path = generate_two_sided(sim, StopRule{1.0, 2, true}, 7);
        const RwreChain chain = build_chain(path);
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const double odds = (1.0 - chain.p_right[i]) / chain.p_right[i];
            const double ref = std::exp(path.values[i + 1] - path.values[i]);
            worst = std::max(worst, std::abs(odds / ref - 1.0));
        }
        if (worst > 1e-12)
            pass = false;
    }

    // Soft: localization in a hand-built valley at -0.7 (depth reached when
    // the histogram mode sits where the potential is within 1 of its bottom).
    const int n_valley = opt.fast ? 30 : 100;
    const std::size_t valley_steps = opt.fast ? 50'000 : 200'000;
    int localized = 0;
    {
        EnvironmentPath valley;
        valley.h = 0.01;
        valley.origin = 200;
        valley.values.resize(401);
        for (std::size_t i = 0; i < valley.values.size(); ++i) {
            const double pos = valley.position(i);
            valley.values[i] = 3.0 * (std::abs(pos + 0.7) - 0.7);
        }
        const RwreChain chain = build_chain(valley);
        for (int r = 0; r < n_valley; ++r) {
            Rng rng(0x5eedULL, 900 + std::uint64_t(r));
            const WalkSummary walk = run_walk(chain, valley_steps, rng);
            if (std::abs(chain.position(walk.mode_site) + 0.7) <= 1.0 / 3.0)
                ++localized;
        }
    }
    const bool valley_ok = localized * 100 >= 95 * n_valley;

    DemoConfig demo;
    demo.sim.a = 1.5;
    demo.sim.seed = 0x5eedULL;
    demo.threads = opt.threads;
    demo.n_envs = opt.fast ? 150 : 500;
    demo.n_steps = opt.fast ? 200'000 : 1'000'000;
    const DemoResult res = left_bias_demo(demo);
    const bool left_ok = res.left_fraction > 0.55;

    d = fmt("exact reductions %s; soft: valley %d/%d%s, left fraction %.3f%s",
            pass ? "ok" : "FAILED", localized, n_valley, valley_ok ? "" : " (soft miss)",
            res.left_fraction, left_ok ? "" : " (soft miss)");
    return pass; // soft parts reported, not blocking
}

// ---------------------------------------------------------------- criterion 10
// Independent brute-force coding of the flank definition.

bool flanked_min(const std::vector<double>& w, std::size_t i, double x, bool* waived) {
    bool right = false;
    for (std::size_t s = i + 1; s < w.size(); ++s) {
        if (w[s] >= w[i] + x) {
            right = true;
            break;
        }
        if (w[s] < w[i])
            break;
    }
    if (!right)
        return false;
    if (waived)
        *waived = false;
    for (std::size_t s = i; s-- > 0;) {
        if (w[s] >= w[i] + x)
            return true;
        if (w[s] <= w[i]) // an earlier index at or below the value: not earliest
            return false;
    }
    if (waived)
        *waived = true;
    return true;
}

bool flanked_max(const std::vector<double>& w, std::size_t i, double x, bool* waived) {
    bool right = false;
    for (std::size_t s = i + 1; s < w.size(); ++s) {
        if (w[s] <= w[i] - x) {
            right = true;
            break;
        }
        if (w[s] > w[i])
            break;
    }
    if (!right)
        return false;
    if (waived)
        *waived = false;
    for (std::size_t s = i; s-- > 0;) {
        if (w[s] <= w[i] - x)
            return true;
        if (w[s] >= w[i])
            return false;
    }
    if (waived)
        *waived = true;
    return true;
}

std::optional<ExtremaRecord> oracle_first(const std::vector<double>& w, double x) {
    if (w.empty())
        return std::nullopt;
    double mn = w[0], mx = w[0];
    std::size_t mni = 0, mxi = 0;
    for (std::size_t t = 1; t < w.size(); ++t) {
        if (w[t] < mn) {
            mn = w[t];
            mni = t;
        }
        if (w[t] > mx) {
            mx = w[t];
            mxi = t;
        }
        if (w[t] >= mn + x)
            return ExtremaRecord{mni, ExtremumKind::Minimum};
        if (w[t] <= mx - x)
            return ExtremaRecord{mxi, ExtremumKind::Maximum};
    }
    return std::nullopt;
}

std::vector<ExtremaRecord> oracle_extrema(const std::vector<double>& w, double x) {
    std::vector<ExtremaRecord> out;
    const auto first = oracle_first(w, x);
    if (!first)
        return out;
    out.push_back(*first);
    for (std::size_t i = first->index + 1; i < w.size(); ++i) {
        if (flanked_min(w, i, x, nullptr))
            out.push_back({i, ExtremumKind::Minimum});
        else if (flanked_max(w, i, x, nullptr))
            out.push_back({i, ExtremumKind::Maximum});
    }
    return out;
}

bool crit_extrema_oracle(std::string& d) {
    std::size_t n_paths = 0;
    std::string first_fail;

    auto run_case = [&](const std::vector<double>& w, double x) {
        ++n_paths;
        if (!first_fail.empty())
            return;
        const auto sweep = find_x_extrema(w, x);
        const auto oracle = oracle_extrema(w, x);
        bool same = sweep.size() == oracle.size();
        for (std::size_t j = 0; same && j < sweep.size(); ++j)
            same = sweep[j].index == oracle[j].index && sweep[j].kind == oracle[j].kind;
        // No fully flanked extremum may precede the first emission, and the
        // emitted sequence must alternate with value gaps >= x.
        if (same && !sweep.empty())
            for (std::size_t i = 0; i < sweep.front().index && same; ++i)
                if (flanked_min(w, i, x, nullptr) || flanked_max(w, i, x, nullptr))
                    same = false;
        for (std::size_t j = 0; same && j + 1 < sweep.size(); ++j) {
            if (sweep[j].kind == sweep[j + 1].kind)
                same = false;
            else if (std::abs(w[sweep[j + 1].index] - w[sweep[j].index]) < x)
                same = false;
        }
        if (!same)
            first_fail = fmt("path %zu (len %zu, x=%g)", n_paths, w.size(), x);
    };

    Rng rng(0xACCE55ULL, 0);
    const double levels[] = {0.8, 1.6, 3.2};
    auto gaussian_step = [&](double sd) {
        // Box-Muller on the deterministic substream
        const double u1 = rng.uniform(), u2 = rng.uniform();
        return sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };

    for (int p = 0; p < 6000; ++p) { // Gaussian random walks
        const std::size_t n = 40 + rng.raw() % 361;
        std::vector<double> w(n);
        double v = 0.0;
        for (auto& e : w)
            e = (v += gaussian_step(1.0));
        run_case(w, levels[p % 3]);
    }
    {
        StableIncrementSampler stable(1.5, 1.0);
        for (int p = 0; p < 2000; ++p) { // heavy-tailed walks with jumps
            const std::size_t n = 40 + rng.raw() % 361;
            std::vector<double> w(n);
            double v = 0.0;
            for (auto& e : w)
                e = (v += 0.5 * stable.unit(rng));
            run_case(w, levels[p % 3]);
        }
    }
    for (int p = 0; p < 2000; ++p) { // lattice walks: exact ties and plateaus
        const std::size_t n = 30 + rng.raw() % 171;
        std::vector<double> w(n);
        double v = 0.0;
        for (auto& e : w)
            e = (v += 0.5 * (double(rng.raw() % 5) - 2.0));
        run_case(w, p % 2 == 0 ? 1.0 : 1.5);
    }
    for (int p = 0; p < 300; ++p) { // long paths up to the size cap
        const std::size_t n = 3000 + rng.raw() % 2001;
        std::vector<double> w(n);
        double v = 0.0;
        for (auto& e : w)
            e = (v += gaussian_step(1.0));
        run_case(w, levels[p % 3]);
    }

    // Hand-built degenerate and exact-threshold cases.
    const std::vector<std::pair<std::vector<double>, double>> crafted = {
        {{0.0}, 1.0},
        {{0.0, 2.0}, 1.0},
        {{0, 1, 2, 3, 4, 5}, 1.0},          // monotone up
        {{5, 4, 3, 2, 1, 0}, 1.0},          // monotone down
        {{1, 1, 1, 1}, 0.5},                // constant
        {{0, 2, 0, 2}, 1.0},                // sawtooth
        {{0, 1, 0, 1, 0, 1}, 1.0},          // gaps exactly x
        {{0, 1, 1, 0, 2, 2, -1, 3}, 1.0},   // plateaus at extremes
        {{0, 3, 1.5, 10, 2, 11}, 1.5},      // jump past both thresholds
        {{2, 0, 2, 0, 2}, 2.0},             // alternating at exactly x
        {{0, -1, -1, -2, -1, -2, 0, -2}, 1.0},
        {{1, 0, 1, 2, 1, 0, 1}, 1.0},       // symmetric hat
    };
    for (const auto& [w, x] : crafted)
        run_case(w, x);

    d = first_fail.empty() ? fmt("%zu paths, sweep == definition on all", n_paths)
                           : "MISMATCH at " + first_fail;
    return first_fail.empty();
}

} // namespace

int run_acceptance(const AcceptanceOptions& opt, std::ostream& os) {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> fn;
    };
    const Criterion criteria[] = {
        {"bias-endpoints-monotonicity", [](std::string& d) { return crit_bias_endpoints(d); }},
        {"bias-integral-vs-closed-form", [](std::string& d) { return crit_g_forms(d); }},
        {"brownian-slope-transform", [](std::string& d) { return crit_brownian_lt(d); }},
        {"slope-mean-identities", [](std::string& d) { return crit_mean_identities(d); }},
        {"fluctuation-identity-algebra",
         [](std::string& d) { return crit_fluctuation_algebra(d); }},
        {"scale-function-laplace-identity",
         [](std::string& d) { return crit_scale_laplace(d); }},
        {"inversion-accuracy", [](std::string& d) { return crit_inversion(d); }},
        {"monte-carlo-vs-analytic",
         [&](std::string& d) { return crit_monte_carlo(opt, d); }},
        {"walk-demo", [&](std::string& d) { return crit_walk_demo(opt, d); }},
        {"extrema-oracle-equivalence", [](std::string& d) { return crit_extrema_oracle(d); }},
    };

    int failures = 0;
    int idx = 0;
    for (const Criterion& c : criteria) {
        ++idx;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        os << (pass ? "PASS" : "FAIL") << "  " << idx << "  " << c.name << "  " << detail
           << "  [" << fmt("%.2f", secs) << "s]\n";
        os.flush();
        if (!pass)
            ++failures;
    }
    return failures;
}

} // namespace stenv
