#pragma once
#include <complex>

#include "stenv/errors.hpp"

namespace stenv {

struct SeriesConfig {
    double rel_tolerance = 1e-14; // termwise stopping tolerance, relative to the partial sum
    int max_terms = 400;
    double domain_cap_real = 1e4;    // |z| cap for nonnegative real arguments
    double domain_cap_complex = 30.; // |z| cap otherwise (alternating/cancelling regime)
};

// Mittag-Leffler function E_a(z) = sum_{n>=0} z^n / Gamma(1 + a n) and its
// termwise derivatives d^r/dz^r E_a(z) for r in {0,1,2}.  a in [1,2].
// E_2(z) = cosh(sqrt(z)); E_1(z) = exp(z).
double mittag_leffler(double a, double z, int order = 0, const SeriesConfig& cfg = {});
std::complex<double> mittag_leffler(double a, std::complex<double> z, int order = 0,
                                    const SeriesConfig& cfg = {});

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Regularized incomplete gamma functions, s > 0, x >= 0.
// Q(s,x) = Gamma(s,x)/Gamma(s) (upper), P(s,x) = 1 - Q(s,x) (lower).
double regularized_upper_gamma(double s, double x);
double regularized_lower_gamma(double s, double x);

} // namespace stenv
