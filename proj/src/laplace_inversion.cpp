#include "stenv/laplace_inversion.hpp"

#include <cmath>

namespace stenv {

void validate(const InversionConfig& cfg) {
    if (cfg.n_terms < 8 || cfg.n_terms > 20 || cfg.n_terms % 2 != 0)
        throw DomainError("InversionConfig: n_terms must be even and in [8,20]");
    if (!(cfg.t_min > 0.0 && cfg.t_min < cfg.t_max))
        throw DomainError("InversionConfig: need 0 < t_min < t_max");
}

std::vector<double> stehfest_weights(int n_terms) {
    if (n_terms < 2 || n_terms % 2 != 0) throw DomainError("stehfest_weights: n must be even");
    const int half = n_terms / 2;
    // Each summand j^{n/2} (2j)! / ((n/2-j)! j! (j-1)! (k-j)! (2j-k)!) is a
    // ratio of exact 128-bit integers for n <= 20.  Splitting it into integer
    // quotient plus remainder/denominator keeps the per-term error at the
    // long-double epsilon absolute instead of relative to the huge term.
    std::vector<unsigned long long> fact(2 * n_terms + 1, 1ULL);
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * i;

    std::vector<double> zeta(n_terms);
    for (int k = 1; k <= n_terms; ++k) {
        long double sum = 0.0L, comp = 0.0L;
        const int j_lo = (k + 1) / 2, j_hi = std::min(k, half);
        for (int j = j_lo; j <= j_hi; ++j) {
            unsigned __int128 num = fact[2 * j];
            for (int p = 0; p < half; ++p) num *= (unsigned __int128)j;
            unsigned __int128 den = (unsigned __int128)fact[half - j] * fact[j];
            den *= (unsigned __int128)fact[j - 1] * fact[k - j];
            den *= fact[2 * j - k];
            const long double term = (long double)(unsigned long long)(num / den) +
                                     (long double)(unsigned long long)(num % den) /
                                         (long double)(unsigned long long)den;
            const long double y = term - comp;
            const long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        zeta[k - 1] = double(((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum);
    }
    return zeta;
}

double gaver_stehfest(const TransformHandle& fhat, double t, const InversionConfig& cfg) {
    validate(cfg);
    if (!(t >= cfg.t_min && t <= cfg.t_max))
        throw DomainError("gaver_stehfest: t outside [t_min, t_max]");
    static thread_local std::vector<double> zeta;
    static thread_local int zeta_n = 0;
    if (zeta_n != cfg.n_terms) {
        zeta = stehfest_weights(cfg.n_terms);
        zeta_n = cfg.n_terms;
    }
    const double log2_over_t = M_LN2 / t;
    // The weights are huge and alternating; long-double compensated
    // accumulation keeps the cancellation noise below the truncation error.
    long double sum = 0.0L, comp = 0.0L;
    for (int k = 1; k <= cfg.n_terms; ++k) {
        const long double term = (long double)zeta[k - 1] * fhat(k * log2_over_t);
        const long double y = term - comp;
        const long double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return double(log2_over_t * sum);
}

double invert_cdf(const TransformHandle& fhat, double t, const InversionConfig& cfg) {
    const double v =
        gaver_stehfest([&](double lam) { return fhat(lam) / lam; }, t, cfg);
    return std::min(1.0, std::max(0.0, v));
}

double kesten_oracle_density(double t, int terms) {
    if (!(t > 0.0)) throw DomainError("kesten_oracle_density: t must be > 0");
    const double c = M_PI * M_PI * t / 4.0;
    double sum = 0.0;
    for (int n = terms - 1; n >= 0; --n) { // smallest terms first
        const double m = 2.0 * n + 1.0;
        const double term = (n % 2 == 0 ? m : -m) * std::exp(-m * m * c);
        sum += term;
    }
    return M_PI * sum;
}

} // namespace stenv
