#include <cmath>

#include "doctest.h"
#include "stenv/quadrature.hpp"

using namespace stenv;

TEST_CASE("polynomials and smooth integrands") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 3.0) ==
          doctest::Approx(9.0).epsilon(1e-13));
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-13));
    // Gaussian mass against erf
    const double got = integrate_adaptive(
        [](double x) { return std::exp(-x * x); }, -2.0, 2.0, 1e-12);
    CHECK(got == doctest::Approx(std::sqrt(M_PI) * std::erf(2.0)).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity") {
    // int_0^1 x^{-1/2} dx = 2; nodes are interior so the endpoint is never hit
    const double got =
        integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
    CHECK(got == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("orientation and degenerate interval") {
    const auto f = [](double x) { return std::cos(x); };
    const double fwd = integrate_adaptive(f, 0.0, 1.0);
    const double rev = integrate_adaptive(f, 1.0, 0.0);
    CHECK(rev == doctest::Approx(-fwd).epsilon(1e-14));
    CHECK(integrate_adaptive(f, 0.7, 0.7) == doctest::Approx(0.0));
}

TEST_CASE("validation and failure modes") {
    const auto f = [](double x) { return x; };
    CHECK_THROWS_AS((void)integrate_adaptive(f, 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS((void)integrate_adaptive(f, 0.0, 1.0, -1e-8), DomainError);
    // violently oscillatory integrand with a subdivision budget too small to resolve it
    const auto osc = [](double x) { return std::sin(500.0 * x * x); };
    CHECK_THROWS_AS((void)integrate_adaptive(osc, 0.0, 20.0, 1e-13, 3), NonConvergence);
}
