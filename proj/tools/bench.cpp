#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stenv/montecarlo.hpp"

// Times the path-level Monte Carlo kernel single-threaded against the OpenMP
// build and verifies the two runs are bit-identical.
// usage: stenv-bench [n_paths] [alpha] [threads]
int main(int argc, char** argv) {
    std::size_t n_paths = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
    const double alpha = argc > 2 ? std::strtod(argv[2], nullptr) : 1.5;
    int threads = argc > 3 ? std::atoi(argv[3]) : 0;
#ifdef _OPENMP
    if (threads <= 0)
        threads = omp_get_max_threads();
#else
    threads = 1;
    std::puts("built without OpenMP; comparing serial against itself");
#endif
    if (n_paths < 100)
        n_paths = 100;

    stenv::McConfig cfg;
    cfg.sim.a = alpha;
    cfg.n_paths = n_paths;

    auto run = [&cfg](int t, std::vector<double>& samples) {
        cfg.threads = t;
        const auto start = std::chrono::steady_clock::now();
        const stenv::McReport rep = stenv::estimate_b1_law(cfg, &samples);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("threads=%-2d  %8.3fs  %.2e paths/s  (n=%zu, failed=%zu)\n",
                    rep.threads_used, secs, double(cfg.n_paths) / secs, samples.size(),
                    rep.failed_paths);
        return secs;
    };

    std::printf("limit-position sampler: alpha=%g h=%g n_paths=%zu\n", alpha, cfg.sim.h,
                n_paths);
    std::vector<double> serial, parallel;
    const double t1 = run(1, serial);
    const double tp = run(threads, parallel);

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
        identical = std::bit_cast<std::uint64_t>(serial[i]) ==
                    std::bit_cast<std::uint64_t>(parallel[i]);
    std::printf("speedup x%.2f, results %s\n", t1 / tp,
                identical ? "bit-identical" : "DIFFER (BUG)");
    return identical ? 0 : 1;
}
