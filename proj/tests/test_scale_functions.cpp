#include <cmath>

#include "doctest.h"
#include "stenv/quadrature.hpp"
#include "stenv/scale_functions.hpp"

using namespace stenv;

namespace {
ScaleContext ctx_of(double a) {
    ScaleContext c;
    c.a = a;
    return c;
}
} // namespace

TEST_CASE("psi and phi are inverse power laws") {
    const auto ctx = ctx_of(1.5);
    CHECK(psi(ctx, 2.0) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
    CHECK(phi(ctx, 2.0) == doctest::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-15));
    for (double q : {0.0, 0.3, 1.0, 7.5}) {
        CHECK(psi(ctx, phi(ctx, q)) == doctest::Approx(q).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)psi(ctx, -1.0), DomainError);
    CHECK_THROWS_AS((void)phi(ctx, -0.5), DomainError);
}

TEST_CASE("scale function frozen values") {
    // mpmath references: W(z) = z^{a-1}/Gamma(a); W^{(q)}, Z^{(q)} via the
    // Mittag-Leffler series.
    CHECK(W(ctx_of(1.5), 2.0) == doctest::Approx(1.5957691216057307).epsilon(1e-14));
    CHECK(Wq(ctx_of(1.5), 0.8, 1.2) == doctest::Approx(1.9275991496136984).epsilon(1e-14));
    CHECK(Wq_prime(ctx_of(1.5), 0.8, 1.2) == doctest::Approx(1.8271694087194166).epsilon(1e-14));
    CHECK(Zq(ctx_of(1.5), 0.8, 1.2) == doctest::Approx(1.9994229749889868).epsilon(1e-14));
}

TEST_CASE("a = 2 closed forms: sinh/cosh scale functions") {
    const auto ctx = ctx_of(2.0);
    // W^{(q)}(z) = sinh(z sqrt q)/sqrt q, Z^{(q)}(z) = cosh(z sqrt q)
    CHECK(Wq(ctx, 1.0, 1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-14));
    CHECK(Wq_prime(ctx, 1.0, 1.0) == doctest::Approx(1.5430806348152438).epsilon(1e-14));
    CHECK(Zq(ctx, 1.0, 1.0) == doctest::Approx(1.5430806348152438).epsilon(1e-14));
    CHECK(Wq(ctx, 4.0, 0.7) == doctest::Approx(std::sinh(1.4) / 2.0).epsilon(1e-13));
    CHECK(Zq(ctx, 4.0, 0.7) == doctest::Approx(std::cosh(1.4)).epsilon(1e-13));
    // q = 0 reduces to W: z^{a-1}/Gamma(a) = z at a = 2
    CHECK(Wq(ctx, 0.0, 1.3) == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(W(ctx, 1.3) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("Wq_prime matches a central finite difference") {
    for (double a : {1.3, 1.7, 2.0}) {
        const auto ctx = ctx_of(a);
        const double q = 0.9, z = 1.1, dz = 1e-6;
        const double fd = (Wq(ctx, q, z + dz) - Wq(ctx, q, z - dz)) / (2.0 * dz);
        CHECK(Wq_prime(ctx, q, z) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("Laplace transform of Wq is 1/(psi(lambda) - q)") {
    // truncated at T = 30 with frozen mpmath targets for the closed form
    struct Case {
        double a, q, target;
    };
    const Case cases[] = {{1.3, 0.5, 0.44574177609805323}, {2.0, 2.0, 0.079008573559271744}};
    for (const auto& c : cases) {
        const auto ctx = ctx_of(c.a);
        const double lam = 2.0 * phi(ctx, c.q) + 1.0;
        const double got = integrate_adaptive(
            [&](double z) { return std::exp(-lam * z) * Wq(ctx, c.q, z); }, 0.0, 30.0, 1e-10);
        CHECK(got == doctest::Approx(c.target).epsilon(1e-8));
        CHECK(got == doctest::Approx(1.0 / (psi(ctx, lam) - c.q)).epsilon(1e-8));
    }
}

TEST_CASE("Zq is 1 + q * integral of Wq") {
    for (double a : {1.4, 2.0}) {
        const auto ctx = ctx_of(a);
        const double q = 1.7, z = 1.4;
        const double integral =
            integrate_adaptive([&](double s) { return Wq(ctx, q, s); }, 0.0, z, 1e-12);
        CHECK(Zq(ctx, q, z) == doctest::Approx(1.0 + q * integral).epsilon(1e-10));
    }
}

TEST_CASE("monotonicity in z and in q") {
    const auto ctx = ctx_of(1.6);
    double prev = 0.0;
    for (double z = 0.25; z <= 3.0; z += 0.25) {
        const double w = Wq(ctx, 1.2, z);
        CHECK(w > prev);
        prev = w;
    }
    CHECK(Wq(ctx, 2.0, 1.0) > Wq(ctx, 1.0, 1.0));
    CHECK(Zq(ctx, 2.0, 1.0) > Zq(ctx, 1.0, 1.0));
}

TEST_CASE("tilted scale functions") {
    // c = 0 tilts are the plain scale functions
    const auto ctx = ctx_of(1.5);
    CHECK(tilted_W(ctx, 0.0, 0.8, 1.2) == doctest::Approx(Wq(ctx, 0.8, 1.2)).epsilon(1e-14));
    CHECK(tilted_Z(ctx, 0.0, 0.8, 1.2) == doctest::Approx(Zq(ctx, 0.8, 1.2)).epsilon(1e-8));
    // q = -psi(c): the tilt cancels the killing, W_c^{(q)}(z) = e^{-cz} W(z); frozen value
    const double q = -psi(ctx, 2.0);
    CHECK(tilted_W(ctx, 2.0, q, 0.5) == doctest::Approx(0.29352532634747980).epsilon(1e-13));
    CHECK(tilted_W(ctx, 2.0, q, 0.5) ==
          doctest::Approx(std::exp(-1.0) * W(ctx, 0.5)).epsilon(1e-13));
    // Z_u^{(-psi(u))}(k) = Q(a, u^a k^a): frozen mpmath quadrature values
    struct Case {
        double a, u, k, target;
    };
    const Case cases[] = {{2.0, 1.0, 1.0, 0.73575888234288464},
                          {1.3, 0.1, 1.0, 0.95938828647239886},
                          {1.7, 5.0, 1.0, 0.025924099387003302}};
    for (const auto& c : cases) {
        const auto cx = ctx_of(c.a);
        CHECK(tilted_Z(cx, c.u, -psi(cx, c.u), c.k) == doctest::Approx(c.target).epsilon(1e-8));
    }
    // q + psi(c) < 0 is outside the tilt's domain
    CHECK_THROWS_AS((void)tilted_W(ctx, 1.0, -2.0, 0.5), DomainError);
    CHECK_THROWS_AS((void)tilted_Z(ctx, 1.0, -2.0, 0.5), DomainError);
}

TEST_CASE("two-sided upward exit transform") {
    // a = 2, q = 1: W^{(1)}(x) = sinh(x), so the exit transform is sinh(1)/sinh(2)
    const auto ctx = ctx_of(2.0);
    CHECK(exit_up_lt(ctx, 1.0, 1.0, 2.0) ==
          doctest::Approx(std::sinh(1.0) / std::sinh(2.0)).epsilon(1e-13));
    // boundary cases: from the target it is 1, from 0 it is 0 (for a < 2 jump off 0)
    CHECK(exit_up_lt(ctx, 1.0, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    // q = 0: ratio of plain scale functions, (x/y)^{a-1}
    const auto cx = ctx_of(1.5);
    CHECK(exit_up_lt(cx, 0.0, 1.0, 4.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS((void)exit_up_lt(cx, 1.0, 3.0, 2.0), DomainError); // x > y
    CHECK_THROWS_AS((void)exit_up_lt(cx, 1.0, -0.5, 2.0), DomainError);
}

TEST_CASE("validation") {
    ScaleContext bad;
    bad.a = 1.0; // scale functions need a strictly above 1
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad.a = 2.2;
    CHECK_THROWS_AS(validate(bad), DomainError);
    const auto ctx = ctx_of(1.5);
    CHECK_THROWS_AS((void)W(ctx, -1.0), DomainError);
    CHECK_THROWS_AS((void)Wq(ctx, -0.5, 1.0), DomainError);
    CHECK_THROWS_AS((void)Zq(ctx, 1.0, -1.0), DomainError);
}
