#include <cmath>
#include <vector>

#include "doctest.h"
#include "stenv/environment.hpp"
#include "stenv/extrema.hpp"
#include "stenv/stats.hpp"

using namespace stenv;

namespace {
// side series as generated: right side of the two-sided window, starting at 0
std::vector<double> right_side(const EnvironmentPath& p) {
    return {p.values.begin() + long(p.origin), p.values.end()};
}
// the left side, unfolded back into generation order (origin outward)
std::vector<double> left_side(const EnvironmentPath& p) {
    std::vector<double> out;
    for (std::size_t j = p.origin + 1; j-- > 0;) out.push_back(-p.values[j]);
    return out;
}
double max_drawdown(const std::vector<double>& w) {
    double peak = w[0], worst = 0.0;
    for (double v : w) {
        peak = std::max(peak, v);
        worst = std::max(worst, peak - v);
    }
    return worst;
}
double max_drawup(const std::vector<double>& w) {
    double trough = w[0], best = 0.0;
    for (double v : w) {
        trough = std::min(trough, v);
        best = std::max(best, v - trough);
    }
    return best;
}
} // namespace

TEST_CASE("config validation") {
    SimConfig ok;
    CHECK_NOTHROW(validate(ok));
    SimConfig bad = ok;
    bad.a = 1.0;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = ok;
    bad.a = 2.0001;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = ok;
    bad.h = 0.0;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = ok;
    bad.h = -1e-3;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = ok;
    bad.max_side_points = 1;
    CHECK_THROWS_AS(validate(bad), DomainError);
}

TEST_CASE("unit increments: sign law and exponential moments") {
    // E e^{lambda xi} = e^{lambda^a}; P(xi >= 0) = 1/a.  Frozen targets:
    // e^{0.25^1.5} = 1.1331484530668263, e^{0.5^1.5} = 1.4241190194809816.
    const std::size_t n = 200'000;
    {
        StableIncrementSampler sampler(1.5, 1.0);
        Rng rng(0x5eed, 1);
        std::vector<double> e25(n), e50(n);
        std::size_t nonneg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = sampler.unit(rng);
            e25[i] = std::exp(0.25 * xi);
            e50[i] = std::exp(0.5 * xi);
            if (xi >= 0.0) ++nonneg;
        }
        const auto m25 = mean_se(e25);
        CHECK(std::fabs(m25.mean - 1.1331484530668263) <= 4.0 * m25.se);
        const auto m50 = mean_se(e50);
        CHECK(std::fabs(m50.mean - 1.4241190194809816) <= 4.0 * m50.se);
        const auto sign = proportion(nonneg, n);
        CHECK(std::fabs(sign.mean - 2.0 / 3.0) <= 4.0 * sign.se);
    }
    {
        // a = 2: Normal with variance 2, so P(xi >= 0) = 1/2
        StableIncrementSampler sampler(2.0, 1.0);
        Rng rng(0x5eed, 2);
        std::vector<double> xs(n);
        std::size_t nonneg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = sampler.unit(rng);
            if (xs[i] >= 0.0) ++nonneg;
        }
        const auto m = mean_se(xs);
        CHECK(std::fabs(m.mean) <= 4.0 * m.se);
        double var = 0.0;
        for (double x : xs) var += (x - m.mean) * (x - m.mean);
        var /= double(n - 1);
        const double se_var = var * std::sqrt(2.0 / double(n - 1));
        CHECK(std::fabs(var - 2.0) <= 4.0 * se_var);
        const auto sign = proportion(nonneg, n);
        CHECK(std::fabs(sign.mean - 0.5) <= 4.0 * sign.se);
    }
}

TEST_CASE("step increments scale as h^{1/a}") {
    // E e^{lambda w_h} = e^{lambda^a h}; frozen: e^{0.0625} = 1.0644944589178594
    // at (lambda, h) = (0.25, 0.5) and e^{0.25} = 1.2840254166877415 at (0.25, 2).
    const std::size_t n = 200'000;
    struct Case {
        double h, target;
    };
    for (const auto& c : {Case{0.5, 1.0644944589178594}, Case{2.0, 1.2840254166877415}}) {
        StableIncrementSampler sampler(1.5, c.h);
        Rng rng(0x5eed, 3);
        std::vector<double> es(n);
        for (std::size_t i = 0; i < n; ++i) es[i] = std::exp(0.25 * sampler(rng));
        const auto m = mean_se(es);
        CHECK(std::fabs(m.mean - c.target) <= 4.0 * m.se);
    }
}

TEST_CASE("two-sided generation is deterministic in (seed, stream)") {
    SimConfig cfg;
    cfg.a = 1.5;
    cfg.h = 0.01;
    const StopRule stop{1.0, 2, true};
    const auto p1 = generate_two_sided(cfg, stop, 11);
    const auto p2 = generate_two_sided(cfg, stop, 11);
    CHECK(p1.origin == p2.origin);
    REQUIRE(p1.values.size() == p2.values.size());
    CHECK(p1.values == p2.values); // bit-identical
    const auto p3 = generate_two_sided(cfg, stop, 12);
    CHECK(p1.values != p3.values);

    CHECK(p1.h == cfg.h);
    CHECK(p1.values[p1.origin] == 0.0);
    CHECK(p1.position(p1.origin) == 0.0);
}

TEST_CASE("stop rule richness: threshold events and extrema counts") {
    SimConfig cfg;
    cfg.a = 1.5;
    cfg.h = 0.01;
    const double level = 0.5;
    const StopRule stop{level, 6, true};
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
        const auto p = generate_two_sided(cfg, stop, stream);
        for (const auto& side : {right_side(p), left_side(p)}) {
            REQUIRE(side.size() >= 2);
            CHECK(side.front() == 0.0);
            CHECK(max_drawdown(side) >= level);
            CHECK(max_drawup(side) >= level);
            CHECK(find_x_extrema(side, level).size() >= 6);
        }
    }
}

TEST_CASE("degenerate stop rule gives one increment per side") {
    SimConfig cfg;
    cfg.a = 1.5;
    cfg.h = 0.01;
    const auto p = generate_two_sided(cfg, StopRule{0.0, 0, false}, 5);
    CHECK(p.values.size() == 3);
    CHECK(p.origin == 1);
    CHECK(p.values[1] == 0.0);
}

TEST_CASE("window cap raises CapExceeded") {
    SimConfig cfg;
    cfg.a = 1.5;
    cfg.h = 1e-3;
    cfg.max_side_points = 100;
    CHECK_THROWS_AS((void)generate_two_sided(cfg, StopRule{5.0, 1, true}, 0), CapExceeded);
}

TEST_CASE("spectrally positive flips every increment") {
    SimConfig neg;
    neg.a = 1.5;
    neg.h = 0.01;
    SimConfig pos = neg;
    pos.spectrally_positive = true;
    const StopRule stop{0.8, 3, true};
    const auto pn = generate_two_sided(neg, stop, 21);
    const auto pp = generate_two_sided(pos, stop, 21);
    REQUIRE(pn.values.size() == pp.values.size());
    CHECK(pn.origin == pp.origin);
    for (std::size_t i = 0; i < pn.values.size(); ++i)
        CHECK(pp.values[i] == doctest::Approx(-pn.values[i]).epsilon(1e-15));
}

TEST_CASE("path reversal") {
    EnvironmentPath p;
    p.h = 0.5;
    p.origin = 1;
    p.values = {4.0, 0.0, -1.0, 3.0};
    const auto r = reverse_path(p);
    CHECK(r.h == 0.5);
    CHECK(r.origin == 2);
    REQUIRE(r.values.size() == 4);
    CHECK(r.values[0] == 3.0);
    CHECK(r.values[1] == -1.0);
    CHECK(r.values[2] == 0.0);
    CHECK(r.values[3] == 4.0);
    const auto rr = reverse_path(r);
    CHECK(rr.origin == p.origin);
    CHECK(rr.values == p.values);
}
