#include "stenv/stats.hpp"

#include <algorithm>
#include <cmath>

namespace stenv {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_se(std::span<const double> xs) {
    MeanSe r;
    r.n = xs.size();
    if (r.n == 0) return r;
    r.mean = pairwise_sum(xs) / double(r.n);
    if (r.n == 1) return r;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - r.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / double(r.n - 1);
    r.se = std::sqrt(var / double(r.n));
    return r;
}

MeanSe proportion(std::size_t hits, std::size_t n) {
    MeanSe r;
    r.n = n;
    if (n == 0) return r;
    r.mean = double(hits) / double(n);
    r.se = std::sqrt(r.mean * (1.0 - r.mean) / double(n));
    if (r.se == 0.0) {
        // Degenerate counts (0 or n hits): Wald SE collapses to zero, which
        // would make downstream z-scores blow up.  Fall back to the
        // add-half-adjusted estimate, which stays positive for n >= 1.
        const double p = (double(hits) + 0.5) / (double(n) + 1.0);
        r.se = std::sqrt(p * (1.0 - p) / double(n));
    }
    return r;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   std::span<const double> grid) {
    std::sort(samples.begin(), samples.end());
    double worst = 0.0;
    for (double x : grid) {
        const auto it = std::upper_bound(samples.begin(), samples.end(), x);
        const double ecdf = double(it - samples.begin()) / double(samples.size());
        worst = std::max(worst, std::fabs(ecdf - cdf(x)));
    }
    return worst;
}

} // namespace stenv
