#include "stenv/special_functions.hpp"

#include <cmath>
#include <limits>

namespace stenv {

namespace {

void validate_common(double a, int order, const SeriesConfig& cfg) {
    if (!(a >= 1.0 && a <= 2.0)) throw DomainError("mittag_leffler: a must lie in [1,2]");
    if (order < 0 || order > 2) throw DomainError("mittag_leffler: order must be 0, 1 or 2");
    if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance <= 1e-6))
        throw DomainError("mittag_leffler: rel_tolerance out of (0, 1e-6]");
    if (cfg.max_terms < 50) throw DomainError("mittag_leffler: max_terms < 50");
}

// log of the series coefficient of z^m for the order-r termwise derivative:
// c_m = (m+r)! / m!  ->  1, (m+1), (m+2)(m+1).
double log_coeff(int m, int order) {
    switch (order) {
        case 0: return 0.0;
        case 1: return std::log(double(m) + 1.0);
        default: return std::log(double(m) + 2.0) + std::log(double(m) + 1.0);
    }
}

// Nonnegative real argument: all terms positive.  Terms are formed in log
// space and summed relative to the running peak, so intermediate magnitudes
// never overflow even when E_a(z) ~ exp(z^{1/a}) is huge.
double ml_series_positive(double a, double z, int order, const SeriesConfig& cfg) {
    if (z == 0.0) return std::exp(log_coeff(0, order) - std::lgamma(1.0 + a * order));
    const double logz = std::log(z);
    double peak = -std::numeric_limits<double>::infinity();
    double sum = 0.0, comp = 0.0; // Kahan accumulator of exp(logterm - peak)
    double prev_lt = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < cfg.max_terms; ++m) {
        const double lt = log_coeff(m, order) + m * logz - std::lgamma(1.0 + a * (m + order));
        if (lt > peak) {
            // rescale the accumulated sum to the new peak
            const double scale = std::exp(peak - lt);
            sum *= scale;
            comp *= scale;
            peak = lt;
        }
        const double term = std::exp(lt - peak);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        const bool decreasing = lt < prev_lt;
        if (decreasing && term < cfg.rel_tolerance * sum) {
            const double r = peak + std::log(sum);
            if (r > 709.0) throw DomainError("mittag_leffler: result overflows double");
            return std::exp(r);
        }
        prev_lt = lt;
    }
    throw NonConvergence("mittag_leffler: series did not converge within max_terms");
}

// Signed/complex regime: plain Kahan summation; the domain cap keeps the
// cancellation (peak term / result) within double precision.
template <class T>
T ml_series_general(double a, T z, int order, const SeriesConfig& cfg) {
    T term = T(1);
    T sum = T(0), comp = T(0);
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int m = 0; m < cfg.max_terms; ++m) {
        T t_m = term * std::exp(log_coeff(m, order) - std::lgamma(1.0 + a * (m + order)));
        const T y = t_m - comp;
        const T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        const double mag = std::abs(t_m);
        if (m >= 2 && mag < prev_mag && mag < cfg.rel_tolerance * (std::abs(sum) + 1e-300))
            return sum;
        prev_mag = mag;
        term *= z;
    }
    throw NonConvergence("mittag_leffler: series did not converge within max_terms");
}

} // namespace

double mittag_leffler(double a, double z, int order, const SeriesConfig& cfg) {
    validate_common(a, order, cfg);
    if (z >= 0.0) {
        if (z > cfg.domain_cap_real) throw DomainError("mittag_leffler: z above real-domain cap");
        return ml_series_positive(a, z, order, cfg);
    }
    if (-z > cfg.domain_cap_complex)
        throw DomainError("mittag_leffler: |z| above cancelling-domain cap");
    return ml_series_general<double>(a, z, order, cfg);
}

std::complex<double> mittag_leffler(double a, std::complex<double> z, int order,
                                    const SeriesConfig& cfg) {
    validate_common(a, order, cfg);
    if (z.imag() == 0.0 && z.real() >= 0.0) return mittag_leffler(a, z.real(), order, cfg);
    if (std::abs(z) > cfg.domain_cap_complex)
        throw DomainError("mittag_leffler: |z| above cancelling-domain cap");
    return ml_series_general<std::complex<double>>(a, z, order, cfg);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: x must be > 0");
    return std::lgamma(x);
}

namespace {

// Lower regularized gamma by power series, x < s+1.
double gamma_p_series(double s, double x) {
    double ap = s, del = 1.0 / s, sum = del;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw NonConvergence("regularized_lower_gamma: series did not converge");
}

// Upper regularized gamma by Lentz continued fraction, x >= s+1.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    throw NonConvergence("regularized_upper_gamma: continued fraction did not converge");
}

} // namespace

double regularized_lower_gamma(double s, double x) {
    if (!(s > 0.0)) throw DomainError("regularized gamma: s must be > 0");
    if (x < 0.0) throw DomainError("regularized gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    return x < s + 1.0 ? gamma_p_series(s, x) : 1.0 - gamma_q_cf(s, x);
}

double regularized_upper_gamma(double s, double x) {
    if (!(s > 0.0)) throw DomainError("regularized gamma: s must be > 0");
    if (x < 0.0) throw DomainError("regularized gamma: x must be >= 0");
    if (x == 0.0) return 1.0;
    return x < s + 1.0 ? 1.0 - gamma_p_series(s, x) : gamma_q_cf(s, x);
}

} // namespace stenv
