#pragma once
#include <functional>
#include <vector>

#include "stenv/errors.hpp"

namespace stenv {

// A Laplace transform sampled on the positive real axis.
using TransformHandle = std::function<double(double)>;

struct InversionConfig {
    int n_terms = 16;   // Gaver-Stehfest order; even, in [8, 20]
    double t_min = 0.05; // requests below this are rejected, not extrapolated
    double t_max = 50.0;
};

void validate(const InversionConfig& cfg);

// Gaver-Stehfest weights zeta_1..zeta_n (accumulated in long double).
std::vector<double> stehfest_weights(int n_terms);

// f(t) ~= (ln 2 / t) * sum_k zeta_k * fhat(k ln 2 / t).
double gaver_stehfest(const TransformHandle& fhat, double t, const InversionConfig& cfg = {});

// CDF at t of the density with transform fhat: inversion of fhat(lambda)/lambda,
// clamped to [0,1].
double invert_cdf(const TransformHandle& fhat, double t, const InversionConfig& cfg = {});

// Residue-series density with Laplace transform 1/cosh(sqrt(lambda)):
//   f(t) = pi * sum_{n>=0} (-1)^n (2n+1) exp(-(2n+1)^2 pi^2 t / 4),  t > 0.
// Exact reference for the a = 2 slope-length law; used to calibrate inversion error.
double kesten_oracle_density(double t, int terms = 64);

} // namespace stenv
