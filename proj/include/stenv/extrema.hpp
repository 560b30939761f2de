#pragma once
#include <optional>
#include <span>
#include <vector>

#include "stenv/environment.hpp"
#include "stenv/fluctuation.hpp"

namespace stenv {

enum class ExtremumKind { Minimum, Maximum };

struct ExtremaRecord {
    std::size_t index;
    ExtremumKind kind;
};

// Streaming x-extrema sweep.  A point is an x-minimum when the path reaches
// it from above and later rises by at least x before dropping below it (the
// mirror image for maxima); emitted extrema strictly alternate.  Ties keep
// the earliest index attaining the running extreme.  The first emission may
// rest on one-sided evidence only (its outer flank lies before the window).
class ExtremaSweep {
  public:
    explicit ExtremaSweep(double x);
    std::optional<ExtremaRecord> push(double value);
    std::size_t emitted() const { return emitted_; }

  private:
    double x_;
    std::size_t next_ = 0;
    enum class State { Unknown, Up, Down } state_ = State::Unknown;
    double min_v_ = 0.0, max_v_ = 0.0;
    std::size_t min_i_ = 0, max_i_ = 0;
    std::size_t emitted_ = 0;
};

std::vector<ExtremaRecord> find_x_extrema(std::span<const double> values, double x);

struct SlopeRecord {
    std::size_t start_index = 0, end_index = 0;
    double length = 0.0; // in position units
    SlopeKind kind = SlopeKind::Upward;
    bool is_central = false;          // contains the origin
    bool is_boundary_partial = false; // clipped by the window edge
    bool edge_adjacent = false;       // touches the first emitted extremum
};

// Position the diffusion localizes at: the last extremum at position <= 0 if
// it is an x-minimum, otherwise the first extremum at position > 0 (which
// alternation then forces to be an x-minimum).  Throws InsufficientPath when
// the window does not pin these extrema down.
double compute_b(const EnvironmentPath& path, double x);

// Monotone segments between consecutive x-extrema, plus the two clipped edge
// segments.  Statistics should use records with none of the three flags set.
std::vector<SlopeRecord> slope_decomposition(const EnvironmentPath& path, double x);

} // namespace stenv
