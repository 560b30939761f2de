#pragma once
#include <cstdint>
#include <iosfwd>

namespace stenv {

struct AcceptanceOptions {
    bool fast = false; // smaller Monte Carlo sizes, widened noise-bound thresholds
    int threads = 0;
};

// Runs the ten verification suites, printing one PASS/FAIL line per suite.
// Returns the number of failed suites.  All tolerances are pinned inside.
int run_acceptance(const AcceptanceOptions& opt, std::ostream& os);

} // namespace stenv
