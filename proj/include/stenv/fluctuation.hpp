#pragma once
#include <optional>

#include "stenv/laplace_inversion.hpp"
#include "stenv/scale_functions.hpp"

namespace stenv {

enum class SlopeKind { Upward, Downward };

// Parameters of the joint drawdown transforms: u weights the time component,
// v the spatial overshoot, k > 0 is the threshold level.  p = u - psi(v).
struct HittingParams {
    double u = 0.0;
    double v = 0.0;
    double k = 1.0;
};

void validate(const ScaleContext& ctx, const HittingParams& hp);

// E exp{-u (time from last maximum to drawdown of size k) - v (drawdown overshoot)}:
//   e^{vk} (W(k)/W'(k)) (Z_v^{(p)}(k) W_v^{(p)'}(k)/W_v^{(p)}(k) - p W_v^{(p)}(k)).
double lt_down_excursion(const ScaleContext& ctx, const HittingParams& hp);

// E[e^{-u sigma_k} 1{height of the preceding rise <= x}] where sigma_k is the
// time of the running maximum when the drawdown of size k completes:
//   (W'(k)/W(k)) (W^{(u)}(k)/W^{(u)'}(k)) (1 - e^{-x W^{(u)'}(k)/W^{(u)}(k)});
// x = nullopt drops the height restriction.
double lt_up_run(const ScaleContext& ctx, double u, std::optional<double> x, double k);

// E e^{-u (time from last minimum to drawup of size k)} = W(k)/W^{(u)}(k).
double lt_up_excursion(const ScaleContext& ctx, double u, double k);

// E e^{-u sigma_k} for the running-minimum time at drawup completion:
//   W^{(u)}(k) / (Z^{(u)}(k) W(k)).
double lt_down_run(const ScaleContext& ctx, double u, double k);

// E e^{-u (depth below the minimum at drawup completion)} = e^{-uk} / Q(a, uk).
double lt_undershoot(const ScaleContext& ctx, double u, double k);

// Laplace transforms of the two slope-length laws at threshold 1:
//   upward:   1 / (Gamma(a+1) D(u)),        D(u) = E_a'(u) + (a/(a-1)) u E_a''(u)
//   downward: Gamma(a+1) (D(u) - (a/(a-1)) u E_a'(u)^2 / E_a(u)).
// Both collapse to 1/cosh(sqrt(u)) at a = 2.
double slope_length_lt(const ScaleContext& ctx, SlopeKind kind, double u);
TransformHandle slope_length_transform(const ScaleContext& ctx, SlopeKind kind);

// Mean slope lengths: upward Gamma(a)/((a-1) Gamma(2a-1)),
// downward (1/Gamma(a) - Gamma(a)/Gamma(2a-1))/(a-1); they sum to 1/((a-1)Gamma(a)).
double slope_length_mean(const ScaleContext& ctx, SlopeKind kind);

// gamma(a) = P(limit position < 0) = Gamma(a)^2 / Gamma(2a-1) = e^{-g(a)};
// gamma(1) = 1, gamma(2) = 1/2, strictly decreasing on [1,2].
double bias_gamma(double a);
double g_closed(double a);   // log(Gamma(2a-1)/Gamma(a)^2)
double g_integral(double a); // independent integral representation of g(a)

// Density and CDF of the limit position: f(x) = (a-1)Gamma(a)(1 - F_up(-x)) for
// x <= 0 and (a-1)Gamma(a)(1 - F_down(x)) for x > 0, where F_side is the CDF of
// the matching slope-length law.  Evaluated by Gaver-Stehfest inversion.
double density_b1(const ScaleContext& ctx, double x, const InversionConfig& inv = {});
double cdf_b1(const ScaleContext& ctx, double x, const InversionConfig& inv = {});

} // namespace stenv
