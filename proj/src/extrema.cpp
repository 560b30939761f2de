#include "stenv/extrema.hpp"

#include <cmath>

#include "stenv/errors.hpp"

namespace stenv {

ExtremaSweep::ExtremaSweep(double x) : x_(x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("ExtremaSweep: level must be positive");
}

std::optional<ExtremaRecord> ExtremaSweep::push(double value) {
    const std::size_t i = next_++;
    if (i == 0) {
        min_v_ = max_v_ = value;
        min_i_ = max_i_ = 0;
        return std::nullopt;
    }
    switch (state_) {
    case State::Unknown: {
        // Track both candidates; whichever flank completes first decides the
        // phase.  Strict comparisons keep the earliest index on ties.
        if (value < min_v_) { min_v_ = value; min_i_ = i; }
        if (value > max_v_) { max_v_ = value; max_i_ = i; }
        if (value >= min_v_ + x_) {
            ExtremaRecord rec{min_i_, ExtremumKind::Minimum};
            state_ = State::Up;
            max_v_ = value;
            max_i_ = i;
            ++emitted_;
            return rec;
        }
        if (value <= max_v_ - x_) {
            ExtremaRecord rec{max_i_, ExtremumKind::Maximum};
            state_ = State::Down;
            min_v_ = value;
            min_i_ = i;
            ++emitted_;
            return rec;
        }
        return std::nullopt;
    }
    case State::Up: {
        if (value > max_v_) { max_v_ = value; max_i_ = i; }
        if (value <= max_v_ - x_) {
            ExtremaRecord rec{max_i_, ExtremumKind::Maximum};
            state_ = State::Down;
            min_v_ = value;
            min_i_ = i;
            ++emitted_;
            return rec;
        }
        return std::nullopt;
    }
    case State::Down: {
        if (value < min_v_) { min_v_ = value; min_i_ = i; }
        if (value >= min_v_ + x_) {
            ExtremaRecord rec{min_i_, ExtremumKind::Minimum};
            state_ = State::Up;
            max_v_ = value;
            max_i_ = i;
            ++emitted_;
            return rec;
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

std::vector<ExtremaRecord> find_x_extrema(std::span<const double> values, double x) {
    ExtremaSweep sweep(x);
    std::vector<ExtremaRecord> out;
    for (double v : values)
        if (auto rec = sweep.push(v))
            out.push_back(*rec);
    return out;
}

double compute_b(const EnvironmentPath& path, double x) {
    const auto extrema = find_x_extrema(path.values, x);

    // x0: last extremum at position <= 0; x1: first at position > 0.
    std::size_t i0 = extrema.size(), i1 = extrema.size();
    for (std::size_t j = 0; j < extrema.size(); ++j) {
        if (extrema[j].index <= path.origin)
            i0 = j;
        else {
            i1 = j;
            break;
        }
    }
    if (i0 == extrema.size() || i1 == extrema.size())
        throw InsufficientPath("compute_b: window lacks an extremum on one side of 0");
    // The first emission's outer flank is unverified, so x0 would not be
    // trustworthy as "the last extremum left of 0" of the full path.
    if (i0 == 0)
        throw InsufficientPath("compute_b: left pinning extremum is the first emission");

    const ExtremaRecord& x0 = extrema[i0];
    const ExtremaRecord& x1 = extrema[i1];
    return x0.kind == ExtremumKind::Minimum ? path.position(x0.index)
                                            : path.position(x1.index);
}

std::vector<SlopeRecord> slope_decomposition(const EnvironmentPath& path, double x) {
    const auto extrema = find_x_extrema(path.values, x);
    std::vector<SlopeRecord> out;
    if (extrema.empty())
        return out;

    const std::size_t last = path.values.size() - 1;
    auto central = [&](std::size_t s, std::size_t e) {
        return s <= path.origin && path.origin < e;
    };
    auto make = [&](std::size_t s, std::size_t e, SlopeKind kind, bool partial,
                    bool edge) {
        SlopeRecord rec;
        rec.start_index = s;
        rec.end_index = e;
        rec.length = (double(e) - double(s)) * path.h;
        rec.kind = kind;
        rec.is_central = central(s, e);
        rec.is_boundary_partial = partial;
        rec.edge_adjacent = edge;
        return rec;
    };

    // Leading clipped segment: falls into the first extremum if that is a
    // minimum, rises into it if a maximum.
    if (extrema.front().index > 0)
        out.push_back(make(0, extrema.front().index,
                           extrema.front().kind == ExtremumKind::Minimum
                               ? SlopeKind::Downward
                               : SlopeKind::Upward,
                           true, true));
    for (std::size_t j = 0; j + 1 < extrema.size(); ++j) {
        const SlopeKind kind = extrema[j].kind == ExtremumKind::Minimum
                                   ? SlopeKind::Upward
                                   : SlopeKind::Downward;
        out.push_back(
            make(extrema[j].index, extrema[j + 1].index, kind, false, j == 0));
    }
    if (extrema.back().index < last)
        out.push_back(make(extrema.back().index, last,
                           extrema.back().kind == ExtremumKind::Minimum
                               ? SlopeKind::Upward
                               : SlopeKind::Downward,
                           true, extrema.size() == 1));
    return out;
}

} // namespace stenv
