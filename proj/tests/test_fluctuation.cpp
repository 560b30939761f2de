#include <cmath>

#include "doctest.h"
#include "stenv/fluctuation.hpp"

using namespace stenv;

namespace {
ScaleContext ctx_of(double a) {
    ScaleContext c;
    c.a = a;
    return c;
}
} // namespace

// Frozen transform values at (a, u, k = 1) from 40-digit mpmath evaluations.

TEST_CASE("drawdown/drawup transforms at a = 2 (Brownian closed forms)") {
    const auto ctx = ctx_of(2.0);
    const double u = 1.0;
    CHECK(lt_up_excursion(ctx, u, 1.0) == doctest::Approx(0.85091812823932155).epsilon(1e-13));
    // down-run transform at a = 2 is tanh(1)
    CHECK(lt_down_run(ctx, u, 1.0) == doctest::Approx(0.76159415595576489).epsilon(1e-13));
    CHECK(lt_down_run(ctx, u, 1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-13));
    CHECK(lt_up_run(ctx, u, std::nullopt, 1.0) ==
          doctest::Approx(0.76159415595576489).epsilon(1e-13));
    CHECK(lt_down_excursion(ctx, {u, 0.0, 1.0}) ==
          doctest::Approx(0.85091812823932155).epsilon(1e-12));
    CHECK(lt_down_excursion(ctx, {1.0, 1.0, 1.0}) ==
          doctest::Approx(0.85091812823932155).epsilon(1e-12));
    // undershoot at (a=2, u=1): e^{-1}/Q(2,1) = e^{-1}/(2/e) = 1/2 exactly
    CHECK(lt_undershoot(ctx, u, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("drawdown/drawup transforms, frozen fractional-a values") {
    struct Case {
        double a, u;
        double upexc, downrun, uprun, downexc0, undershoot;
    };
    const Case cases[] = {
        {1.3, 0.1, 0.93940986003640915, 0.97799423615763018, 0.78760033947038869,
         0.98661331109052742, 0.94313994739604454},
        {1.7, 5.0, 0.27686615564202598, 0.46335462716225026, 0.26974125312788867,
         0.50512605268247063, 0.25991055266758644},
    };
    for (const auto& c : cases) {
        const auto ctx = ctx_of(c.a);
        CHECK(lt_up_excursion(ctx, c.u, 1.0) == doctest::Approx(c.upexc).epsilon(1e-12));
        CHECK(lt_down_run(ctx, c.u, 1.0) == doctest::Approx(c.downrun).epsilon(1e-12));
        CHECK(lt_up_run(ctx, c.u, std::nullopt, 1.0) ==
              doctest::Approx(c.uprun).epsilon(1e-12));
        CHECK(lt_down_excursion(ctx, {c.u, 0.0, 1.0}) ==
              doctest::Approx(c.downexc0).epsilon(1e-8));
        CHECK(lt_undershoot(ctx, c.u, 1.0) == doctest::Approx(c.undershoot).epsilon(1e-12));
    }
    // joint transform with a spatial weight
    CHECK(lt_down_excursion(ctx_of(1.5), {2.0, 0.7, 1.0}) ==
          doctest::Approx(0.55301687524297506).epsilon(1e-8));
}

TEST_CASE("transform identities: exit product and slope compositions") {
    for (double a : {1.3, 1.7, 2.0}) {
        const auto ctx = ctx_of(a);
        for (double u : {0.1, 1.0, 5.0}) {
            // up-excursion * down-run * Z^{(u)} = 1
            const double prod =
                lt_up_excursion(ctx, u, 1.0) * lt_down_run(ctx, u, 1.0) * Zq(ctx, u, 1.0);
            CHECK(prod == doctest::Approx(1.0).epsilon(1e-12));
            // slope laws factor into their two independent phases
            const double comp_up =
                lt_up_excursion(ctx, u, 1.0) * lt_up_run(ctx, u, std::nullopt, 1.0);
            CHECK(comp_up ==
                  doctest::Approx(slope_length_lt(ctx, SlopeKind::Upward, u)).epsilon(1e-10));
            const double comp_down =
                lt_down_excursion(ctx, {u, 0.0, 1.0}) * lt_down_run(ctx, u, 1.0);
            CHECK(comp_down ==
                  doctest::Approx(slope_length_lt(ctx, SlopeKind::Downward, u)).epsilon(1e-8));
        }
    }
}

TEST_CASE("slope-length transforms, frozen values") {
    const auto b = ctx_of(2.0);
    // both laws collapse to 1/cosh(sqrt u) at a = 2
    struct P {
        double u, val;
    };
    const P brown[] = {{0.1, 0.95200191233134197},
                       {1.0, 0.64805427366388540},
                       {10.0, 0.084507022703924755}};
    for (const auto& p : brown) {
        CHECK(slope_length_lt(b, SlopeKind::Upward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-12));
        CHECK(slope_length_lt(b, SlopeKind::Downward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-12));
        CHECK(p.val == doctest::Approx(1.0 / std::cosh(std::sqrt(p.u))).epsilon(1e-13));
    }
    const auto m = ctx_of(1.5);
    const P up15[] = {{0.5, 0.49280800540945557},
                      {1.0, 0.29531948694970675},
                      {2.0, 0.13550432101156775}};
    const P down15[] = {{0.5, 0.80452096946130479},
                        {1.0, 0.67233892125521021},
                        {2.0, 0.50532134463918741}};
    for (const auto& p : up15)
        CHECK(slope_length_lt(m, SlopeKind::Upward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-13));
    for (const auto& p : down15)
        CHECK(slope_length_lt(m, SlopeKind::Downward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-13));
    // u = 0 gives total mass 1 for both laws
    CHECK(slope_length_lt(m, SlopeKind::Upward, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(slope_length_lt(m, SlopeKind::Downward, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // handle form agrees with direct evaluation
    const auto h = slope_length_transform(m, SlopeKind::Upward);
    CHECK(h(1.0) == doctest::Approx(slope_length_lt(m, SlopeKind::Upward, 1.0)));
}

TEST_CASE("slope-length transforms at large arguments, frozen values") {
    // The down-slope transform is a near-total cancellation at large u; these
    // values (120-digit reference arithmetic) pin all evaluation regimes:
    // extended-precision series up to u^{1/a} = 55 and the asymptotic series
    // beyond. Arguments reach the largest node the default inversion uses at
    // its smallest supported time.
    struct P {
        double a, u, val;
    };
    const P wide[] = {
        {1.2, 25.0, 0.28892550825324184},   {1.2, 60.0, 0.20982963809323750},
        {1.3, 30.0, 0.16142054497666830},   {1.3, 100.0, 0.087190243049791244},
        {1.5, 30.0, 0.068571695925048827},  {1.5, 60.0, 0.039339457987911894},
        {1.5, 110.0, 0.024746669092896948}, {1.5, 222.0, 0.014786857261502536},
        {1.8, 60.0, 0.0089376044323961827}, {1.8, 150.0, 0.0030997961970913927},
        {1.8, 222.0, 0.0020568259147719604}, {1.95, 100.0, 0.0010247807718580068},
        {1.95, 222.0, 0.00035352607384112900},
    };
    for (const auto& p : wide)
        CHECK(slope_length_lt(ctx_of(p.a), SlopeKind::Downward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-13));
    // deepest into the cancellation the extended-precision series has to go
    CHECK(slope_length_lt(ctx_of(1.2), SlopeKind::Downward, 100.0) ==
          doctest::Approx(0.17491029227735695).epsilon(3e-10));
    const P tail[] = {
        {1.2, 150.0, 0.15171334689390497},
        {1.2, 222.0, 0.13241819396974010},
        {1.3, 200.0, 0.062029415271573425},
    };
    for (const auto& p : tail)
        CHECK(slope_length_lt(ctx_of(p.a), SlopeKind::Downward, p.u) ==
              doctest::Approx(p.val).epsilon(1e-8));
    // the up-slope series is positive-term and stays accurate even when the
    // transform itself is astronomically small
    CHECK(slope_length_lt(ctx_of(1.5), SlopeKind::Upward, 110.0) ==
          doctest::Approx(1.8908097053651678e-11).epsilon(1e-12));
    CHECK(slope_length_lt(ctx_of(1.2), SlopeKind::Upward, 222.0) ==
          doctest::Approx(4.6966492754483781e-42).epsilon(1e-12));
}

TEST_CASE("limit-position density and CDF at a = 1.5, frozen values") {
    // references: 40-digit contour inversion of the slope-survival transforms,
    // assembled into the density (a-1)Gamma(a) S(|x|) and its integral
    const auto ctx = ctx_of(1.5);
    const double c = 0.5 * std::tgamma(1.5);
    const double gam = bias_gamma(1.5);
    struct P {
        double t, surv, integ;
    };
    // down slopes: the law of b1 on x > 0
    const P down[] = {
        {0.05, 0.9001477231540105, 0.047219718418605677},
        {0.10, 0.81932449122559148, 0.090188525882519347},
        {0.25, 0.60572350601253223, 0.19645853624104794},
        {0.50, 0.35852786343445642, 0.31438190896140527},
        {1.00, 0.12484229270498905, 0.42514526150096921},
        {2.00, 0.015131440638825869, 0.47713412601286821},
    };
    for (const auto& p : down) {
        CHECK(density_b1(ctx, p.t) == doctest::Approx(c * p.surv).epsilon(2e-4).scale(1.0));
        CHECK(cdf_b1(ctx, p.t) ==
              doctest::Approx(gam + c * p.integ).epsilon(5e-5).scale(1.0));
    }
    // up slopes: the law of b1 on x < 0
    const P up[] = {
        {0.10, 0.99999999441320597, 0.099999999983695557},
        {0.25, 0.99287996114539509, 0.24979221854038481},
        {0.50, 0.88759614163439952, 0.48672166768392234},
        {1.00, 0.63291563439539562, 0.86432977614338706},
        {2.00, 0.31528001143171179, 1.3201656084001246},
    };
    for (const auto& p : up) {
        CHECK(density_b1(ctx, -p.t) == doctest::Approx(c * p.surv).epsilon(2e-4).scale(1.0));
        CHECK(cdf_b1(ctx, -p.t) ==
              doctest::Approx(gam - c * p.integ).epsilon(5e-5).scale(1.0));
    }
    // below the inversion floor the power head takes over: exact at 0,
    // continuous at the floor, monotone in between
    CHECK(cdf_b1(ctx, 0.0) == doctest::Approx(gam).epsilon(1e-14));
    double prev = cdf_b1(ctx, -0.06);
    for (double x = -0.05; x <= 0.0601; x += 0.005) {
        const double v = cdf_b1(ctx, x);
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
    // density head: positive, below the origin value, rising toward it
    const double f0 = density_b1(ctx, 0.0);
    const double f_head = density_b1(ctx, 0.03);
    CHECK(f_head > 0.8 * c * 0.9001477231540105);
    CHECK(f_head < f0);
}

TEST_CASE("slope-length means") {
    CHECK(slope_length_mean(ctx_of(1.5), SlopeKind::Upward) ==
          doctest::Approx(1.7724538509055160).epsilon(1e-14));
    CHECK(slope_length_mean(ctx_of(1.5), SlopeKind::Downward) ==
          doctest::Approx(0.48430448328550912).epsilon(1e-14));
    CHECK(slope_length_mean(ctx_of(2.0), SlopeKind::Upward) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(slope_length_mean(ctx_of(2.0), SlopeKind::Downward) ==
          doctest::Approx(0.5).epsilon(1e-14));
    for (double a : {1.2, 1.5, 1.8, 2.0}) {
        const auto ctx = ctx_of(a);
        const double total = slope_length_mean(ctx, SlopeKind::Upward) +
                             slope_length_mean(ctx, SlopeKind::Downward);
        CHECK(total ==
              doctest::Approx(1.0 / ((a - 1.0) * std::tgamma(a))).epsilon(1e-13));
    }
}

TEST_CASE("negative-side mass gamma(a) and its exponent g(a)") {
    CHECK(bias_gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bias_gamma(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bias_gamma(1.5) == doctest::Approx(0.78539816339744831).epsilon(1e-14)); // pi/4
    CHECK(bias_gamma(1.2) == doctest::Approx(0.95015013898843674).epsilon(1e-14));
    CHECK(g_closed(1.5) == doctest::Approx(0.24156447527049044).epsilon(1e-13));
    CHECK(g_closed(1.1) == doctest::Approx(0.014370792516363599).epsilon(1e-12));
    CHECK(g_closed(1.0) == doctest::Approx(0.0));
    // gamma = e^{-g}
    for (double a : {1.1, 1.5, 1.9})
        CHECK(bias_gamma(a) == doctest::Approx(std::exp(-g_closed(a))).epsilon(1e-14));
    // the integral representation agrees with the closed form
    CHECK(g_integral(1.5) == doctest::Approx(g_closed(1.5)).epsilon(1e-9));
    CHECK(g_integral(2.0) == doctest::Approx(g_closed(2.0)).epsilon(1e-9));
    CHECK(g_integral(1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)bias_gamma(0.9), DomainError);
    CHECK_THROWS_AS((void)bias_gamma(2.1), DomainError);
    CHECK_THROWS_AS((void)g_integral(0.5), DomainError);
}

TEST_CASE("limit-position density at a = 2, frozen residue-series values") {
    const auto ctx = ctx_of(2.0);
    CHECK(density_b1(ctx, 0.0) == doctest::Approx(1.0).epsilon(1e-14)); // (a-1)Gamma(a)
    // numeric-inversion absolute accuracy at the default order is ~5e-5 here
    CHECK(density_b1(ctx, 0.25) == doctest::Approx(0.68544576689035199).epsilon(2e-4).scale(1.0));
    CHECK(density_b1(ctx, 0.5) == doctest::Approx(0.37077742979952391).epsilon(2e-4).scale(1.0));
    CHECK(density_b1(ctx, 1.0) == doctest::Approx(0.10797704444410901).epsilon(2e-4).scale(1.0));
    CHECK(density_b1(ctx, 2.0) == doctest::Approx(0.0091569902897607558).epsilon(2e-4).scale(1.0));
    // a = 2 is symmetric: up and down slope laws coincide up to inversion noise
    for (double x : {0.25, 0.5, 1.0})
        CHECK(density_b1(ctx, -x) ==
              doctest::Approx(density_b1(ctx, x)).epsilon(2e-4).scale(1.0));
    // density at the origin is (a-1)Gamma(a) for every a
    CHECK(density_b1(ctx_of(1.5), 0.0) ==
          doctest::Approx(0.5 * std::tgamma(1.5)).epsilon(1e-14));
}

TEST_CASE("limit-position CDF at a = 2, frozen values") {
    const auto ctx = ctx_of(2.0);
    CHECK(cdf_b1(ctx, 0.0) == doctest::Approx(0.5).epsilon(1e-8));
    struct P {
        double x, val;
    };
    const P pts[] = {{0.25, 0.72160591827840804}, {-0.25, 0.27839408172159196},
                     {0.5, 0.84972726478693713},  {-0.5, 0.15027273521306287},
                     {1.0, 0.95623855216819752},  {-1.0, 0.043761447831802480},
                     {2.0, 0.99628881162096019},  {-2.0, 0.0037111883790398132}};
    for (const auto& p : pts)
        CHECK(cdf_b1(ctx, p.x) == doctest::Approx(p.val).epsilon(5e-5).scale(1.0));
    // CDF at -infinity-ish / +infinity-ish pins to [0,1]
    CHECK(cdf_b1(ctx, -40.0) == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));
    CHECK(cdf_b1(ctx, 40.0) == doctest::Approx(1.0).epsilon(1e-5).scale(1.0));
    // left mass at 0 equals gamma(a) for fractional a too
    CHECK(cdf_b1(ctx_of(1.5), 0.0) == doctest::Approx(bias_gamma(1.5)).epsilon(1e-8));
}

TEST_CASE("validation") {
    const auto ctx = ctx_of(1.5);
    CHECK_THROWS_AS((void)lt_down_excursion(ctx, {-1.0, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS((void)lt_down_excursion(ctx, {1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS((void)lt_down_excursion(ctx, {1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS((void)lt_up_run(ctx, 1.0, -0.5, 1.0), DomainError);
    CHECK_THROWS_AS((void)slope_length_lt(ctx, SlopeKind::Upward, -1.0), DomainError);
    InversionConfig bad;
    bad.n_terms = 7;
    CHECK_THROWS_AS((void)density_b1(ctx, 0.5, bad), DomainError);
}
