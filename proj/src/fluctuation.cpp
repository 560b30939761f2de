#include "stenv/fluctuation.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "stenv/quadrature.hpp"

#ifdef STENV_USE_FLOAT128
#include <quadmath.h>
#endif

namespace stenv {

void validate(const ScaleContext& ctx, const HittingParams& hp) {
    validate(ctx);
    if (hp.u < 0.0 || hp.v < 0.0) throw DomainError("HittingParams: u, v must be >= 0");
    if (!(hp.k > 0.0)) throw DomainError("HittingParams: k must be > 0");
}

double lt_down_excursion(const ScaleContext& ctx, const HittingParams& hp) {
    validate(ctx, hp);
    const double a = ctx.a, u = hp.u, v = hp.v, k = hp.k;
    const double p = u - psi(ctx, v);
    const double Wu = Wq(ctx, u, k);
    const double Wup = Wq_prime(ctx, u, k);
    const double Zv = tilted_Z(ctx, v, p, k);
    // W(k)/W'(k) = k/(a-1); the e^{-vk} factors of the tilted W cancel in the ratio
    return std::exp(v * k) * (k / (a - 1.0)) *
           (Zv * (Wup / Wu - v) - p * std::exp(-v * k) * Wu);
}

double lt_up_run(const ScaleContext& ctx, double u, std::optional<double> x, double k) {
    validate(ctx, HittingParams{u, 0.0, k});
    if (x && *x < 0.0) throw DomainError("lt_up_run: x must be >= 0");
    const double a = ctx.a;
    const double Wu = Wq(ctx, u, k);
    const double Wup = Wq_prime(ctx, u, k);
    const double base = ((a - 1.0) / k) * (Wu / Wup);
    if (!x) return base;
    return base * -std::expm1(-(*x) * Wup / Wu);
}

double lt_up_excursion(const ScaleContext& ctx, double u, double k) {
    validate(ctx, HittingParams{u, 0.0, k});
    return W(ctx, k) / Wq(ctx, u, k);
}

double lt_down_run(const ScaleContext& ctx, double u, double k) {
    validate(ctx, HittingParams{u, 0.0, k});
    return Wq(ctx, u, k) / (Zq(ctx, u, k) * W(ctx, k));
}

double lt_undershoot(const ScaleContext& ctx, double u, double k) {
    validate(ctx, HittingParams{u, 0.0, k});
    return std::exp(-u * k) / regularized_upper_gamma(ctx.a, u * k);
}

namespace {

// sin(pi x) with the integer part removed before multiplying by pi, so the
// zeros at integer x are hit exactly and stay accurate for x in the hundreds.
double sin_pi(double x) {
    const double n = std::nearbyint(x);
    const double r = std::sin(M_PI * (x - n));
    return static_cast<long long>(n) % 2 == 0 ? r : -r;
}

#ifdef STENV_USE_FLOAT128
using wide_real = __float128;
inline wide_real wide_exp(wide_real x) { return expq(x); }
inline wide_real wide_log(wide_real x) { return logq(x); }
inline wide_real wide_lgamma(wide_real x) { return lgammaq(x); }
#else
using wide_real = long double;
inline wide_real wide_exp(wide_real x) { return std::exp(x); }
inline wide_real wide_log(wide_real x) { return std::log(x); }
inline wide_real wide_lgamma(wide_real x) { return std::lgamma(x); }
#endif

// log Gamma(1 + a m) for m = 0..need-1 in extended precision, cached per a
// (every inversion node of one run shares the same a).
const std::vector<wide_real>& wide_lgamma_table(double a, int need) {
    thread_local double cached_a = -1.0;
    thread_local std::vector<wide_real> table;
    if (cached_a != a) {
        table.clear();
        cached_a = a;
    }
    if (static_cast<int>(table.size()) < need) {
        const std::size_t old = table.size();
        table.resize(static_cast<std::size_t>(need));
        for (std::size_t m = old; m < table.size(); ++m)
            table[m] = wide_lgamma(wide_real(1) + wide_real(a) * static_cast<wide_real>(m));
    }
    return table;
}

// Down-slope transform for moderate s = u^{1/a}: the combination
// E' + c u E'' - c u E'^2 / E  (c = a/(a-1)) cancels from e^{2s}-sized terms
// down to a value of order u^{2/a - 2}, so it is summed in extended
// precision, whose extra mantissa bits absorb the cancellation.
double lt_down_wide(double a, double u) {
    const double s = std::pow(u, 1.0 / a);
    const int peak = static_cast<int>(s / a) + 1;
    const int n_max = peak + static_cast<int>(14.0 * std::sqrt(static_cast<double>(peak))) + 24;
    const auto& lg = wide_lgamma_table(a, n_max + 3);
    const wide_real lnu = wide_log(wide_real(u));
    wide_real e0 = 0, e1 = 0, e2 = 0;
    for (int n = 0; n <= n_max; ++n) {
        const wide_real ln_un = static_cast<wide_real>(n) * lnu;
        e0 += wide_exp(ln_un - lg[static_cast<std::size_t>(n)]);
        e1 += static_cast<wide_real>(n + 1) * wide_exp(ln_un - lg[static_cast<std::size_t>(n) + 1]);
        e2 += static_cast<wide_real>(n + 1) * static_cast<wide_real>(n + 2) *
              wide_exp(ln_un - lg[static_cast<std::size_t>(n) + 2]);
    }
    const wide_real c = wide_real(a) / (wide_real(a) - 1);
    const wide_real comb = e1 + c * wide_real(u) * e2 - c * wide_real(u) * e1 * e1 / e0;
    return static_cast<double>(wide_exp(wide_lgamma(wide_real(a) + 1)) * comb);
}

// Down-slope transform for large s: substituting the exponential asymptotics
// of the Mittag-Leffler derivatives, every e^{s}-sized contribution cancels
// identically and the transform reduces to the algebraic series
//   L(u) = Gamma(a+1) * sum_{k>=1} u^{-k-1} / Gamma(1 - a k) *
//          [ -s^2/(a(a-1)) - 2 k s/(a-1) + k - a k (k+1)/(a-1) ].
// The series is asymptotic (divergent); summing to the smallest term leaves
// a remainder exponentially small in s.
double lt_down_asymptotic(double a, double u) {
    const double s = std::pow(u, 1.0 / a);
    const double lu = std::log(u);
    const double ln_pi = std::log(M_PI);
    double total = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 400; ++k) {
        const double ak = a * k;
        // 1/Gamma(1 - a k) = Gamma(a k) sin(pi a k) / pi, zero at integer a k
        const double sp = sin_pi(ak);
        const double br = -s * s / (a * (a - 1.0)) - 2.0 * k * s / (a - 1.0) + k -
                          ak * (k + 1.0) / (a - 1.0);
        if (sp == 0.0 || br == 0.0) continue;
        const double ln_mag = std::lgamma(ak) + std::log(std::fabs(sp)) - ln_pi +
                              std::log(std::fabs(br)) - (k + 1.0) * lu;
        const double term = ((sp < 0.0) != (br < 0.0) ? -1.0 : 1.0) * std::exp(ln_mag);
        const double mag = std::fabs(term);
        if (k > 2 && mag >= prev) break;  // smallest term reached
        total += term;
        prev = mag;
        if (mag < 1e-18 * std::fabs(total)) break;
    }
    return std::exp(std::lgamma(a + 1.0)) * total;
}

}  // namespace

double slope_length_lt(const ScaleContext& ctx, SlopeKind kind, double u) {
    validate(ctx);
    if (u < 0.0) throw DomainError("slope_length_lt: u must be >= 0");
    const double a = ctx.a;
    // Continuous environment: both slope laws coincide and the transform is
    // exactly 1/cosh(sqrt(u)).
    if (a == 2.0) return 1.0 / std::cosh(std::sqrt(u));
    const double gamma_a1 = std::exp(log_gamma(a + 1.0));
    if (kind == SlopeKind::Upward) {
        const double e1 = mittag_leffler(a, u, 1, ctx.series);
        const double e2 = mittag_leffler(a, u, 2, ctx.series);
        return 1.0 / (gamma_a1 * (e1 + (a / (a - 1.0)) * u * e2));
    }
    // Downward: the combination is a near-total cancellation between
    // e^{s}-sized terms (s = u^{1/a}) whose sum is only ~u^{2/a - 2}; double
    // precision loses it entirely by s ~ 25, and any precision switch midway
    // would plant a seam that Gaver-Stehfest's large signed weights amplify.
    // So: extended precision throughout, asymptotic series once even
    // binary128 runs out near s = 55 (where the asymptotic error is already
    // below ~1e-5 relative for every a).
    if (u == 0.0) return 1.0;
    const double s = std::pow(u, 1.0 / a);
    if (s > 55.0) return lt_down_asymptotic(a, u);
    return lt_down_wide(a, u);
}

TransformHandle slope_length_transform(const ScaleContext& ctx, SlopeKind kind) {
    return [ctx, kind](double lambda) { return slope_length_lt(ctx, kind, lambda); };
}

double slope_length_mean(const ScaleContext& ctx, SlopeKind kind) {
    validate(ctx);
    const double a = ctx.a;
    const double ratio = std::exp(log_gamma(a) - log_gamma(2.0 * a - 1.0));
    if (kind == SlopeKind::Upward) return ratio / (a - 1.0);
    return (std::exp(-log_gamma(a)) - ratio) / (a - 1.0);
}

double bias_gamma(double a) {
    if (!(a >= 1.0 && a <= 2.0)) throw DomainError("bias_gamma: a must lie in [1,2]");
    return std::exp(2.0 * log_gamma(a) - log_gamma(2.0 * a - 1.0));
}

double g_closed(double a) {
    if (!(a >= 1.0 && a <= 2.0)) throw DomainError("g_closed: a must lie in [1,2]");
    return log_gamma(2.0 * a - 1.0) - 2.0 * log_gamma(a);
}

double g_integral(double a) {
    if (!(a >= 1.0 && a <= 2.0)) throw DomainError("g_integral: a must lie in [1,2]");
    if (a == 1.0) return 0.0;
    const double eps = 1e-8, cutoff = 60.0;
    const auto integrand = [a](double t) {
        const double num = std::expm1(-(a - 1.0) * t);
        return std::exp(-t) * num * num / (t * -std::expm1(-t));
    };
    // integrand -> (a-1)^2 as t -> 0: account for the head of the cut interval
    const double head = (a - 1.0) * (a - 1.0) * eps;
    return head + integrate_adaptive(integrand, eps, cutoff, 1e-12, 10000);
}

namespace {

// Short lengths carry mass F(t) ~ t^nu: down slopes against a jump
// environment shrink like t^{2 - 2/a} (a single overshooting jump ends them),
// while up slopes and the continuous case a = 2 have superpolynomially small
// short-length mass, for which a linear head loses nothing.
double short_length_exponent(const ScaleContext& ctx, SlopeKind kind) {
    return kind == SlopeKind::Downward && ctx.a < 2.0 ? 2.0 - 2.0 / ctx.a : 1.0;
}

// Survival 1 - F(t) of a slope-length law via inversion of (1 - L(lambda))/lambda;
// below the inversion floor, a power head calibrated to match F(t_min).
double slope_survival(const ScaleContext& ctx, SlopeKind kind, double t,
                      const InversionConfig& inv) {
    const TransformHandle lt = slope_length_transform(ctx, kind);
    const TransformHandle surv = [&](double lam) { return (1.0 - lt(lam)) / lam; };
    const auto at = [&](double s) {
        const double v = gaver_stehfest(surv, s, inv);
        return std::min(1.0, std::max(0.0, v));
    };
    if (t >= inv.t_min) return at(t);
    const double nu = short_length_exponent(ctx, kind);
    return 1.0 - (1.0 - at(inv.t_min)) * std::pow(t / inv.t_min, nu);
}

// G(t) = int_0^t (1 - F(s)) ds via inversion of (1 - L(lambda))/lambda^2;
// below the floor, the integral of the same power head: G(t) = t - c t^{nu+1},
// with c chosen so G is continuous at t_min (and G(0) = 0 exactly).
double slope_survival_integral(const ScaleContext& ctx, SlopeKind kind, double t,
                               const InversionConfig& inv) {
    if (t == 0.0) return 0.0;
    const TransformHandle lt = slope_length_transform(ctx, kind);
    const TransformHandle g = [&](double lam) { return (1.0 - lt(lam)) / (lam * lam); };
    const double mean = slope_length_mean(ctx, kind);
    const auto at = [&](double s) {
        const double v = gaver_stehfest(g, s, inv);
        return std::min(mean, std::max(0.0, v));
    };
    if (t >= inv.t_min) return at(t);
    const double nu = short_length_exponent(ctx, kind);
    const double f_below = inv.t_min - at(inv.t_min);  // int_0^{t_min} F >= 0
    return t - f_below * std::pow(t / inv.t_min, nu + 1.0);
}

} // namespace

double density_b1(const ScaleContext& ctx, double x, const InversionConfig& inv) {
    validate(ctx);
    validate(inv);
    const double c = (ctx.a - 1.0) * std::exp(log_gamma(ctx.a));
    if (x == 0.0) return c;
    const SlopeKind kind = x < 0.0 ? SlopeKind::Upward : SlopeKind::Downward;
    return c * slope_survival(ctx, kind, std::fabs(x), inv);
}

double cdf_b1(const ScaleContext& ctx, double x, const InversionConfig& inv) {
    validate(ctx);
    validate(inv);
    const double c = (ctx.a - 1.0) * std::exp(log_gamma(ctx.a));
    const double gam = bias_gamma(ctx.a);
    double v;
    if (x <= 0.0)
        v = gam - c * slope_survival_integral(ctx, SlopeKind::Upward, -x, inv);
    else
        v = gam + c * slope_survival_integral(ctx, SlopeKind::Downward, x, inv);
    return std::min(1.0, std::max(0.0, v));
}

} // namespace stenv
