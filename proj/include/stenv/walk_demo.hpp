#pragma once
#include <cstdint>
#include <vector>

#include "stenv/environment.hpp"
#include "stenv/rng.hpp"

namespace stenv {

// Nearest-neighbour walk on the environment grid with odds matched to the
// potential: q_i / p_i = exp{w((i+1)h) - w(ih)}, so the cumulative odds
// product telescopes to e^{w(kh) - w(0)} exactly and the walk drifts downhill
// of w.  One step represents h^2 time units; only ordinal behaviour is used.
struct RwreChain {
    double h = 0.0;
    std::size_t origin = 0;
    std::vector<double> p_right; // transition i -> i+1; size = sites - 1

    std::size_t sites() const { return p_right.size() + 1; }
    double position(std::size_t i) const { return (double(i) - double(origin)) * h; }
};

RwreChain build_chain(const EnvironmentPath& path);

struct WalkSummary {
    std::vector<std::size_t> checkpoint_steps; // 1, 2, 4, ..., n_steps
    std::vector<double> checkpoint_positions;
    double final_position = 0.0;
    std::size_t cap_hits = 0; // reflections at the window ends
    std::vector<std::uint32_t> occupancy;
    std::size_t mode_site = 0; // earliest index attaining max occupancy
};

// Seeded walk from the origin with reflecting window ends (hits counted).
WalkSummary run_walk(const RwreChain& chain, std::size_t n_steps, Rng& rng);

struct DemoConfig {
    SimConfig sim;
    std::size_t n_envs = 500;
    std::size_t n_steps = 1'000'000;
    int threads = 0;
    StopRule stop{1.0, 3, true};
};

struct DemoResult {
    std::size_t n_envs = 0, n_steps = 0;
    double left_fraction = 0.0; // walkers ending strictly left of the origin
    double se = 0.0;
    double mean_final_position = 0.0;
    std::size_t cap_hit_walks = 0;
};

// One walk per simulated environment; reports the fraction that end left of
// the origin (the environment's sign bias, qualitatively).
DemoResult left_bias_demo(const DemoConfig& cfg);

} // namespace stenv
