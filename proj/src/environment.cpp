#include "stenv/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stenv/extrema.hpp"

namespace stenv {

void validate(const SimConfig& cfg) {
    if (!(cfg.a > 1.0) || !(cfg.a <= 2.0))
        throw DomainError("SimConfig: stability index must lie in (1, 2]");
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h))
        throw DomainError("SimConfig: grid step must be positive");
    if (cfg.max_side_points < 2)
        throw DomainError("SimConfig: max_side_points must be at least 2");
}

double StableIncrementSampler::sigma(double a) {
    // |cos(pi a/2)| written to stay positive for a slightly above 1.
    return std::pow(-std::cos(std::numbers::pi * a / 2.0), 1.0 / a);
}

StableIncrementSampler::StableIncrementSampler(double a, double h) {
    if (!(a > 1.0) || !(a <= 2.0))
        throw DomainError("StableIncrementSampler: stability index must lie in (1, 2]");
    if (!(h > 0.0) || !std::isfinite(h))
        throw DomainError("StableIncrementSampler: grid step must be positive");
    const double c = -std::cos(std::numbers::pi * a / 2.0); // > 0 on (1, 2]
    a_ = a;
    shift_ = std::numbers::pi / a - std::numbers::pi / 2.0; // CMS shift for beta = -1
    prefac_ = sigma(a) * std::pow(c, -1.0 / a);             // = 1 up to rounding
    inv_a_ = 1.0 / a;
    exp_a_ = (1.0 - a) / a;
    hscale_ = std::pow(h, 1.0 / a);
}

double StableIncrementSampler::unit(Rng& rng) const {
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    const double av = a_ * (v + shift_);
    return prefac_ * std::sin(av) / std::pow(std::cos(v), inv_a_) *
           std::pow(std::cos(v - av) / w, exp_a_);
}

namespace {

// Grows one side until the stop rule is met.  Returns the cumulative values
// at positions h, 2h, ... (the origin value 0 is not stored).
std::vector<double> generate_side(const SimConfig& cfg, const StopRule& stop, Rng& rng) {
    StableIncrementSampler sample(cfg.a, cfg.h);
    std::vector<double> vals;
    if (stop.level == 0.0) { // degenerate rule: a single increment
        double inc = sample(rng);
        vals.push_back(cfg.spectrally_positive ? -inc : inc);
        return vals;
    }

    ExtremaSweep sweep(stop.level);
    sweep.push(0.0); // the origin anchors the side's drawdown/drawup bookkeeping
    double v = 0.0, run_max = 0.0, run_min = 0.0;
    bool seen_drawdown = false, seen_drawup = false;
    for (;;) {
        double inc = sample(rng);
        v += cfg.spectrally_positive ? -inc : inc;
        vals.push_back(v);
        run_max = std::max(run_max, v);
        run_min = std::min(run_min, v);
        seen_drawdown = seen_drawdown || (run_max - v >= stop.level);
        seen_drawup = seen_drawup || (v - run_min >= stop.level);
        sweep.push(v);

        const bool events_ok =
            !stop.require_threshold_events || (seen_drawdown && seen_drawup);
        if (events_ok && sweep.emitted() >= std::size_t(std::max(stop.min_extrema, 0)))
            return vals;
        if (vals.size() >= cfg.max_side_points)
            throw CapExceeded("generate_side: side exceeded max_side_points");
    }
}

} // namespace

EnvironmentPath generate_two_sided(const SimConfig& cfg, const StopRule& stop,
                                   std::uint64_t stream) {
    validate(cfg);
    Rng right_rng(cfg.seed, 2 * stream);
    Rng left_rng(cfg.seed, 2 * stream + 1);
    std::vector<double> right = generate_side(cfg, stop, right_rng);
    std::vector<double> left = generate_side(cfg, stop, left_rng);

    // The left half is an independent copy run outward from the origin and
    // mirrored: value at position -k h is minus the copy's value at k h.
    EnvironmentPath path;
    path.h = cfg.h;
    path.origin = left.size();
    path.values.reserve(left.size() + 1 + right.size());
    for (std::size_t k = left.size(); k-- > 0;)
        path.values.push_back(-left[k]);
    path.values.push_back(0.0);
    path.values.insert(path.values.end(), right.begin(), right.end());
    return path;
}

EnvironmentPath reverse_path(const EnvironmentPath& path) {
    EnvironmentPath out;
    out.h = path.h;
    out.values.assign(path.values.rbegin(), path.values.rend());
    out.origin = path.values.size() - 1 - path.origin;
    return out;
}

} // namespace stenv
