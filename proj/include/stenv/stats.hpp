#pragma once
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stenv {

// Pairwise (cascade) summation: deterministic and O(log n) error growth.
double pairwise_sum(std::span<const double> xs);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
    std::size_t n = 0;
};
MeanSe mean_se(std::span<const double> xs);

// Binomial proportion estimate with its standard error.
MeanSe proportion(std::size_t hits, std::size_t n);

// sup_x |ecdf(x) - cdf(x)| over the given grid; samples need not be sorted.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   std::span<const double> grid);

} // namespace stenv
