#pragma once
#include <functional>

#include "stenv/errors.hpp"

namespace stenv {

// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [lo, hi] to absolute
// tolerance abs_tol.  Worst-interval-first bisection; throws NonConvergence
// once max_subdivisions intervals have been split.  Nodes are strictly
// interior, so integrable endpoint singularities are handled by refinement.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol = 1e-10, int max_subdivisions = 10000);

} // namespace stenv
