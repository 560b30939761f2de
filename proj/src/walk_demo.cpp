#include "stenv/walk_demo.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stenv/errors.hpp"
#include "stenv/stats.hpp"

namespace stenv {

RwreChain build_chain(const EnvironmentPath& path) {
    if (path.size() < 2)
        throw DomainError("build_chain: path needs at least two grid points");
    RwreChain chain;
    chain.h = path.h;
    chain.origin = path.origin;
    chain.p_right.resize(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double delta = path.values[i + 1] - path.values[i];
        chain.p_right[i] = 1.0 / (1.0 + std::exp(delta));
    }
    return chain;
}

WalkSummary run_walk(const RwreChain& chain, std::size_t n_steps, Rng& rng) {
    const std::size_t last = chain.sites() - 1;
    WalkSummary out;
    out.occupancy.assign(chain.sites(), 0);
    std::size_t pos = chain.origin;
    ++out.occupancy[pos];

    std::size_t next_checkpoint = 1;
    for (std::size_t step = 1; step <= n_steps; ++step) {
        if (pos == 0) {
            ++out.cap_hits;
            pos = 1;
        } else if (pos == last) {
            ++out.cap_hits;
            pos = last - 1;
        } else {
            pos += (rng.uniform() < chain.p_right[pos]) ? 1 : std::size_t(-1);
        }
        ++out.occupancy[pos];
        if (step == next_checkpoint || step == n_steps) {
            out.checkpoint_steps.push_back(step);
            out.checkpoint_positions.push_back(chain.position(pos));
            if (step == next_checkpoint)
                next_checkpoint *= 2;
        }
    }
    out.final_position = chain.position(pos);
    out.mode_site = std::size_t(
        std::max_element(out.occupancy.begin(), out.occupancy.end()) -
        out.occupancy.begin());
    return out;
}

DemoResult left_bias_demo(const DemoConfig& cfg) {
    validate(cfg.sim);
    if (cfg.n_envs == 0 || cfg.n_steps == 0)
        throw DomainError("left_bias_demo: n_envs and n_steps must be positive");

    // Environments and walks draw from disjoint substream spaces.
    constexpr std::uint64_t kEnvSpace = 1ULL << 51;
    constexpr std::uint64_t kWalkSpace = 1ULL << 52;

    std::vector<double> finals(cfg.n_envs);
    std::vector<std::uint8_t> capped(cfg.n_envs, 0);
#ifdef _OPENMP
    const int threads =
        cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (long long j = 0; j < (long long)cfg.n_envs; ++j) {
        const EnvironmentPath path =
            generate_two_sided(cfg.sim, cfg.stop, kEnvSpace + std::uint64_t(j));
        const RwreChain chain = build_chain(path);
        Rng rng(cfg.sim.seed, kWalkSpace + std::uint64_t(j));
        const WalkSummary walk = run_walk(chain, cfg.n_steps, rng);
        finals[std::size_t(j)] = walk.final_position;
        capped[std::size_t(j)] = walk.cap_hits > 0;
    }

    DemoResult res;
    res.n_envs = cfg.n_envs;
    res.n_steps = cfg.n_steps;
    std::size_t left = 0;
    for (std::size_t j = 0; j < cfg.n_envs; ++j) {
        if (finals[j] < 0.0)
            ++left;
        if (capped[j])
            ++res.cap_hit_walks;
    }
    const MeanSe p = proportion(left, cfg.n_envs);
    res.left_fraction = p.mean;
    res.se = p.se;
    res.mean_final_position = mean_se(finals).mean;
    return res;
}

} // namespace stenv
