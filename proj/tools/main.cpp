#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stenv/acceptance.hpp"
#include "stenv/environment.hpp"
#include "stenv/errors.hpp"
#include "stenv/extrema.hpp"
#include "stenv/fluctuation.hpp"
#include "stenv/montecarlo.hpp"
#include "stenv/special_functions.hpp"
#include "stenv/walk_demo.hpp"

namespace {

// exit codes: 0 ok, 2 usage, 3 numerical domain, 4 acceptance failure
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAcceptance = 4;

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// alpha ranges: simulation and limit-law commands need (1,2]; the special
// function itself is defined down to a = 1.
const CLI::Validator AlphaOpen(
    [](std::string& s) {
        const double v = std::stod(s);
        return v > 1.0 && v <= 2.0 ? std::string{}
                                   : std::string("alpha must lie in (1,2]");
    },
    "FLOAT in (1,2]");
const CLI::Validator AlphaClosed(
    [](std::string& s) {
        const double v = std::stod(s);
        return v >= 1.0 && v <= 2.0 ? std::string{}
                                    : std::string("alpha must lie in [1,2]");
    },
    "FLOAT in [1,2]");

nlohmann::json report_json(const stenv::McReport& rep) {
    return nlohmann::json::parse(rep.to_json());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit law of diffusion in a stable random environment: "
                 "analytic transforms, density inversion, and Monte Carlo checks"};
    app.require_subcommand(1);

    // ---- ml ----
    double ml_alpha = 2.0, ml_z = 0.0;
    int ml_order = 0;
    auto* ml = app.add_subcommand("ml", "Evaluate the Mittag-Leffler function or a derivative");
    ml->add_option("--alpha", ml_alpha, "index in [1,2]")->required()->check(AlphaClosed);
    ml->add_option("--z", ml_z, "argument")->required();
    ml->add_option("--order", ml_order, "derivative order")->check(CLI::Range(0, 2));

    // ---- density ----
    double de_alpha = 1.5, de_xmin = -4.0, de_xmax = 4.0;
    int de_points = 101;
    auto* de = app.add_subcommand("density", "Density and CDF of the limit position (CSV)");
    de->add_option("--alpha", de_alpha)->required()->check(AlphaOpen);
    de->add_option("--x-min", de_xmin)->required();
    de->add_option("--x-max", de_xmax)->required();
    de->add_option("--points", de_points)->check(CLI::PositiveNumber);

    // ---- bias ----
    double bi_min = 1.0, bi_max = 2.0;
    int bi_points = 101;
    auto* bi = app.add_subcommand("bias", "Sign bias gamma(a) and its exponent g(a) (CSV)");
    bi->add_option("--alpha-min", bi_min)->required()->check(AlphaClosed);
    bi->add_option("--alpha-max", bi_max)->required()->check(AlphaClosed);
    bi->add_option("--points", bi_points)->check(CLI::PositiveNumber);

    // ---- slope-laws ----
    double sl_alpha = 1.5;
    std::vector<double> sl_us;
    auto* sl = app.add_subcommand("slope-laws",
                                  "Slope-length Laplace transforms and means (CSV)");
    sl->add_option("--alpha", sl_alpha)->required()->check(AlphaOpen);
    sl->add_option("--u", sl_us, "transform arguments")->required();

    // ---- transforms ----
    double tr_alpha = 1.5, tr_u = 1.0, tr_v = 0.0, tr_k = 1.0;
    std::optional<double> tr_x;
    auto* tr = app.add_subcommand("transforms", "Drawdown/drawup hitting transforms (CSV)");
    tr->add_option("--alpha", tr_alpha)->required()->check(AlphaOpen);
    tr->add_option("--u", tr_u, "time weight");
    tr->add_option("--v", tr_v, "overshoot weight");
    tr->add_option("--k", tr_k, "threshold level")->check(CLI::PositiveNumber);
    tr->add_option("--x", tr_x, "height restriction for the rise transform");

    // ---- simulate ----
    stenv::McConfig mc;
    std::string dump_b1, dump_path;
    bool no_correction = false;
    auto* si = app.add_subcommand("simulate",
                                  "Monte Carlo estimates of the limit law and slope laws (JSON)");
    si->add_option("--alpha", mc.sim.a)->required()->check(AlphaOpen);
    si->add_option("--paths", mc.n_paths)->check(CLI::Range(std::size_t(100), std::size_t(1) << 31));
    si->add_option("--step", mc.sim.h)->check(CLI::PositiveNumber);
    si->add_option("--seed", mc.sim.seed)->envname("STENV_SEED");
    si->add_option("--level", mc.level)->check(CLI::PositiveNumber);
    si->add_option("--threads", mc.threads);
    si->add_flag("--spectrally-positive", mc.sim.spectrally_positive,
                 "positive-jump environment via the reversal reduction");
    si->add_flag("--no-level-correction", no_correction,
                 "disable the grid barrier-shift correction");
    si->add_option("--dump-b1", dump_b1, "CSV file for the raw per-path samples");
    si->add_option("--dump-path", dump_path, "CSV dump of the first simulated path");

    // ---- renewal-check ----
    stenv::McConfig rc;
    std::vector<double> rc_xs{0.0};
    bool rc_no_correction = false;
    auto* rn = app.add_subcommand("renewal-check",
                                  "Alternating-renewal overshoot check from slope pools (JSON)");
    rn->add_option("--alpha", rc.sim.a)->required()->check(AlphaOpen);
    rn->add_option("--paths", rc.n_paths)->check(CLI::Range(std::size_t(100), std::size_t(1) << 31));
    rn->add_option("--step", rc.sim.h)->check(CLI::PositiveNumber);
    rn->add_option("--seed", rc.sim.seed)->envname("STENV_SEED");
    rn->add_option("--x", rc_xs, "overshoot levels");
    rn->add_option("--sequences", rc.n_renewal_sequences)->check(CLI::PositiveNumber);
    rn->add_option("--threads", rc.threads);
    rn->add_flag("--no-level-correction", rc_no_correction);

    // ---- walk-demo ----
    stenv::DemoConfig demo;
    std::string demo_checkpoints;
    auto* wd = app.add_subcommand("walk-demo",
                                  "Random walk in the simulated environment (JSON summary)");
    wd->add_option("--alpha", demo.sim.a)->required()->check(AlphaOpen);
    wd->add_option("--steps", demo.n_steps)->check(CLI::PositiveNumber);
    wd->add_option("--envs", demo.n_envs)->check(CLI::PositiveNumber);
    wd->add_option("--seed", demo.sim.seed)->envname("STENV_SEED");
    wd->add_option("--step", demo.sim.h)->check(CLI::PositiveNumber);
    wd->add_option("--threads", demo.threads);
    wd->add_option("--checkpoints", demo_checkpoints,
                   "CSV file for one walk's dyadic checkpoint positions");

    // ---- verify ----
    stenv::AcceptanceOptions acc;
    auto* ve = app.add_subcommand("verify", "Run the full verification suite");
    ve->add_flag("--fast", acc.fast, "smaller Monte Carlo sizes, widened noise bounds");
    ve->add_option("--threads", acc.threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (ml->parsed()) {
            std::cout << num17(stenv::mittag_leffler(ml_alpha, ml_z, ml_order)) << "\n";
        } else if (de->parsed()) {
            stenv::ScaleContext ctx;
            ctx.a = de_alpha;
            std::cout << "x,density,cdf\n";
            for (int i = 0; i < de_points; ++i) {
                const double x = de_points == 1 ? de_xmin
                                                : de_xmin + (de_xmax - de_xmin) * double(i) /
                                                                double(de_points - 1);
                std::cout << num17(x) << ',' << num17(stenv::density_b1(ctx, x)) << ','
                          << num17(stenv::cdf_b1(ctx, x)) << "\n";
            }
        } else if (bi->parsed()) {
            std::cout << "alpha,gamma,g_closed,g_integral\n";
            for (int i = 0; i < bi_points; ++i) {
                const double a = bi_points == 1 ? bi_min
                                                : bi_min + (bi_max - bi_min) * double(i) /
                                                               double(bi_points - 1);
                std::cout << num17(a) << ',' << num17(stenv::bias_gamma(a)) << ','
                          << num17(stenv::g_closed(a)) << ',' << num17(stenv::g_integral(a))
                          << "\n";
            }
        } else if (sl->parsed()) {
            stenv::ScaleContext ctx;
            ctx.a = sl_alpha;
            const double mu = stenv::slope_length_mean(ctx, stenv::SlopeKind::Upward);
            const double md = stenv::slope_length_mean(ctx, stenv::SlopeKind::Downward);
            std::cout << "u,up_lt,down_lt,up_mean,down_mean\n";
            for (double u : sl_us)
                std::cout << num17(u) << ','
                          << num17(stenv::slope_length_lt(ctx, stenv::SlopeKind::Upward, u))
                          << ','
                          << num17(stenv::slope_length_lt(ctx, stenv::SlopeKind::Downward, u))
                          << ',' << num17(mu) << ',' << num17(md) << "\n";
        } else if (tr->parsed()) {
            stenv::ScaleContext ctx;
            ctx.a = tr_alpha;
            const stenv::HittingParams hp{tr_u, tr_v, tr_k};
            std::cout << "name,value\n";
            std::cout << "down_excursion," << num17(stenv::lt_down_excursion(ctx, hp)) << "\n";
            std::cout << "up_run," << num17(stenv::lt_up_run(ctx, tr_u, tr_x, tr_k)) << "\n";
            std::cout << "up_excursion," << num17(stenv::lt_up_excursion(ctx, tr_u, tr_k))
                      << "\n";
            std::cout << "down_run," << num17(stenv::lt_down_run(ctx, tr_u, tr_k)) << "\n";
            std::cout << "undershoot," << num17(stenv::lt_undershoot(ctx, tr_u, tr_k)) << "\n";
        } else if (si->parsed()) {
            mc.level_correction = !no_correction;
            std::vector<double> samples;
            const stenv::McReport b1 = stenv::estimate_b1_law(mc, &samples);
            const stenv::McReport slopes = stenv::estimate_slope_stats(mc);
            if (!dump_b1.empty()) {
                std::ofstream f(dump_b1);
                f << "b1\n";
                for (double b : samples)
                    f << num17(b) << "\n";
            }
            if (!dump_path.empty()) {
                const stenv::EnvironmentPath path = stenv::generate_two_sided(
                    mc.sim, stenv::StopRule{b1.effective_level, mc.b_min_extrema, true}, 0);
                std::ofstream f(dump_path);
                f << "index,position,value\n";
                for (std::size_t i = 0; i < path.size(); ++i)
                    f << i << ',' << num17(path.position(i)) << ',' << num17(path.values[i])
                      << "\n";
            }
            nlohmann::json out;
            out["b1_law"] = report_json(b1);
            out["slope_stats"] = report_json(slopes);
            std::cout << out.dump(2) << "\n";
        } else if (rn->parsed()) {
            rc.level_correction = !rc_no_correction;
            std::cout << stenv::renewal_overshoot_check(rc, rc_xs).to_json() << "\n";
        } else if (wd->parsed()) {
            const stenv::DemoResult res = stenv::left_bias_demo(demo);
            if (!demo_checkpoints.empty()) {
                const stenv::EnvironmentPath path =
                    stenv::generate_two_sided(demo.sim, demo.stop, 0);
                stenv::Rng rng(demo.sim.seed, 1);
                const stenv::WalkSummary walk =
                    stenv::run_walk(stenv::build_chain(path), demo.n_steps, rng);
                std::ofstream f(demo_checkpoints);
                f << "step,position\n";
                for (std::size_t i = 0; i < walk.checkpoint_steps.size(); ++i)
                    f << walk.checkpoint_steps[i] << ','
                      << num17(walk.checkpoint_positions[i]) << "\n";
            }
            nlohmann::json out{{"n_envs", res.n_envs},
                               {"n_steps", res.n_steps},
                               {"left_fraction", res.left_fraction},
                               {"se", res.se},
                               {"mean_final_position", res.mean_final_position},
                               {"cap_hit_walks", res.cap_hit_walks}};
            std::cout << out.dump(2) << "\n";
        } else if (ve->parsed()) {
            const int failures = stenv::run_acceptance(acc, std::cout);
            if (failures > 0) {
                std::cerr << failures << " verification suite(s) failed\n";
                return kExitAcceptance;
            }
        }
    } catch (const stenv::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const stenv::NonConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kExitDomain;
    } catch (const stenv::CapExceeded& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitDomain;
    } catch (const stenv::InsufficientPath& e) {
        std::cerr << "insufficient path: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
