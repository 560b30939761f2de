#pragma once
#include "stenv/special_functions.hpp"

namespace stenv {

// Evaluation context for the scale functions of the spectrally negative
// stable process with Laplace exponent psi(lambda) = lambda^a, a in (1,2].
struct ScaleContext {
    double a = 1.5;
    SeriesConfig series{};
    double quad_abs_tol = 1e-10;
    int quad_max_subdivisions = 10000;
};

void validate(const ScaleContext& ctx);

double psi(const ScaleContext& ctx, double lambda); // lambda^a, lambda >= 0
double phi(const ScaleContext& ctx, double q);      // inverse: q^{1/a}, q >= 0

// W(z) = z^{a-1} / Gamma(a), z >= 0.
double W(const ScaleContext& ctx, double z);
// W^{(q)}(z) = a z^{a-1} E_a'(q z^a), q >= 0.
double Wq(const ScaleContext& ctx, double q, double z);
// d/dz W^{(q)}(z) = a(a-1) z^{a-2} E_a'(q z^a) + a^2 q z^{2a-2} E_a''(q z^a), z > 0.
double Wq_prime(const ScaleContext& ctx, double q, double z);
// Z^{(q)}(z) = E_a(q z^a), q >= 0.
double Zq(const ScaleContext& ctx, double q, double z);

// Esscher-tilted scale functions under the exponential change of measure with
// rate c >= 0; defined whenever q + psi(c) >= 0:
//   W_c^{(q)}(z) = e^{-cz} W^{(q + psi(c))}(z)
//   Z_c^{(q)}(z) = 1 + q * int_0^z W_c^{(q)}(s) ds       (adaptive quadrature)
double tilted_W(const ScaleContext& ctx, double c, double q, double z);
double tilted_Z(const ScaleContext& ctx, double c, double q, double z);

// Two-sided upward exit: E_x[e^{-q T_y} 1{hit y before 0}] = W^{(q)}(x)/W^{(q)}(y),
// 0 <= x <= y, q >= 0.
double exit_up_lt(const ScaleContext& ctx, double q, double x, double y);

} // namespace stenv
