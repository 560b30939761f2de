#pragma once
#include <cstdint>
#include <vector>

#include "stenv/errors.hpp"
#include "stenv/rng.hpp"

namespace stenv {

// Two-sided environment sampled on a uniform grid.  values[i] is the
// environment at position (i - origin) * h; values[origin] = 0.  Between grid
// points the path is read as piecewise-constant (right-continuous).
struct EnvironmentPath {
    double h = 0.0;
    std::size_t origin = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double position(std::size_t i) const {
        return (double(i) - double(origin)) * h;
    }
};

struct SimConfig {
    double a = 1.5;   // stability index, (1,2]
    double h = 1e-3;  // grid step, > 0
    std::uint64_t seed = 0x5eedULL;
    std::size_t max_side_points = 50'000'000; // per side; exceeded -> CapExceeded
    bool spectrally_positive = false;         // negate jump signs of the increments
};

void validate(const SimConfig& cfg);

// How far each side of the path is extended:
//  - level > 0: until the side has seen both a drawdown and a drawup of that
//    size (this pins down the extrema adjacent to the origin), and
//  - min_extrema: until a streaming level-`level` extrema sweep over the side
//    has emitted at least this many extrema (gives complete interior slopes);
//  - require_threshold_events = false drops the drawdown/drawup condition.
// level == 0 degenerates to one increment per side.
struct StopRule {
    double level = 1.0;
    int min_extrema = 1;
    bool require_threshold_events = true;
};

// Spectrally negative stable increment over one grid cell: h^{1/a} xi with
// E exp(lambda xi) = exp(lambda^a) for lambda >= 0.  xi is drawn by the
// Chambers-Mallows-Stuck transform for the totally skewed (beta = -1) stable
// law in the unit-scale parametrization, rescaled by
// sigma(a) = |cos(pi a/2)|^{1/a}.  At a = 2 this is Normal(0, 2h).
class StableIncrementSampler {
  public:
    StableIncrementSampler(double a, double h);
    double unit(Rng& rng) const;                    // xi
    double operator()(Rng& rng) const { return hscale_ * unit(rng); }
    static double sigma(double a);                  // CMS rescaling constant
  private:
    double a_, shift_, prefac_, inv_a_, exp_a_, hscale_;
};

// Two-sided path grown per StopRule.  `stream` selects the deterministic RNG
// substream pair (right side 2*stream, left side 2*stream+1) under cfg.seed.
EnvironmentPath generate_two_sided(const SimConfig& cfg, const StopRule& stop = {},
                                   std::uint64_t stream = 0);

// Time reversal with left limits; maps a spectrally positive path to a
// spectrally negative one.  The localization point satisfies b(w) = -b(reversed w).
EnvironmentPath reverse_path(const EnvironmentPath& path);

} // namespace stenv
