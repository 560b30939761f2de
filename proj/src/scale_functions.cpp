#include "stenv/scale_functions.hpp"

#include <cmath>

#include "stenv/quadrature.hpp"

namespace stenv {

void validate(const ScaleContext& ctx) {
    if (!(ctx.a > 1.0 && ctx.a <= 2.0)) throw DomainError("ScaleContext: a must lie in (1,2]");
}

double psi(const ScaleContext& ctx, double lambda) {
    validate(ctx);
    if (lambda < 0.0) throw DomainError("psi: lambda must be >= 0");
    return std::pow(lambda, ctx.a);
}

double phi(const ScaleContext& ctx, double q) {
    validate(ctx);
    if (q < 0.0) throw DomainError("phi: q must be >= 0");
    return std::pow(q, 1.0 / ctx.a);
}

double W(const ScaleContext& ctx, double z) {
    validate(ctx);
    if (z < 0.0) throw DomainError("W: z must be >= 0");
    return std::pow(z, ctx.a - 1.0) / std::exp(log_gamma(ctx.a));
}

double Wq(const ScaleContext& ctx, double q, double z) {
    validate(ctx);
    if (q < 0.0) throw DomainError("Wq: q must be >= 0");
    if (z < 0.0) throw DomainError("Wq: z must be >= 0");
    if (z == 0.0) return 0.0;
    const double a = ctx.a;
    return a * std::pow(z, a - 1.0) * mittag_leffler(a, q * std::pow(z, a), 1, ctx.series);
}

double Wq_prime(const ScaleContext& ctx, double q, double z) {
    validate(ctx);
    if (q < 0.0) throw DomainError("Wq_prime: q must be >= 0");
    if (!(z > 0.0)) throw DomainError("Wq_prime: z must be > 0");
    const double a = ctx.a, za = std::pow(z, a);
    return a * (a - 1.0) * std::pow(z, a - 2.0) * mittag_leffler(a, q * za, 1, ctx.series) +
           a * a * q * std::pow(z, 2.0 * a - 2.0) * mittag_leffler(a, q * za, 2, ctx.series);
}

double Zq(const ScaleContext& ctx, double q, double z) {
    validate(ctx);
    if (q < 0.0) throw DomainError("Zq: q must be >= 0");
    if (z < 0.0) throw DomainError("Zq: z must be >= 0");
    return mittag_leffler(ctx.a, q * std::pow(z, ctx.a), 0, ctx.series);
}

double tilted_W(const ScaleContext& ctx, double c, double q, double z) {
    validate(ctx);
    if (c < 0.0) throw DomainError("tilted_W: c must be >= 0");
    const double shifted = q + psi(ctx, c);
    if (shifted < 0.0) throw DomainError("tilted_W: q + psi(c) must be >= 0");
    return std::exp(-c * z) * Wq(ctx, shifted, z);
}

double tilted_Z(const ScaleContext& ctx, double c, double q, double z) {
    validate(ctx);
    if (c < 0.0) throw DomainError("tilted_Z: c must be >= 0");
    if (z < 0.0) throw DomainError("tilted_Z: z must be >= 0");
    const double shifted = q + psi(ctx, c);
    if (shifted < 0.0) throw DomainError("tilted_Z: q + psi(c) must be >= 0");
    if (q == 0.0 || z == 0.0) return 1.0;
    const double integral = integrate_adaptive(
        [&](double s) { return std::exp(-c * s) * Wq(ctx, shifted, s); }, 0.0, z,
        ctx.quad_abs_tol, ctx.quad_max_subdivisions);
    return 1.0 + q * integral;
}

double exit_up_lt(const ScaleContext& ctx, double q, double x, double y) {
    validate(ctx);
    if (q < 0.0) throw DomainError("exit_up_lt: q must be >= 0");
    if (!(0.0 <= x && x <= y) || !(y > 0.0))
        throw DomainError("exit_up_lt: need 0 <= x <= y, y > 0");
    return Wq(ctx, q, x) / Wq(ctx, q, y);
}

} // namespace stenv
