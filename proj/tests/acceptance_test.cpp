// Acceptance suite: runs every gating criterion at its stated tolerance and
// prints one pass/fail line each. Exits nonzero if any gating criterion
// fails; the final informational check never gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gmfg/estimation.hpp"
#include "gmfg/evaluation.hpp"
#include "gmfg/experiment.hpp"
#include "gmfg/game.hpp"
#include "gmfg/solver.hpp"
#include "simplex_oracle.hpp"
#include "test_support.hpp"

using namespace gmfg;
using namespace gmfg_test;

namespace {

struct Criterion {
    std::string name;
    bool gating = true;
    double time_limit = 0.0;  // seconds; 0 means unbounded
    std::function<bool(std::string&)> run;
};

bool check(bool condition, const std::string& label, std::string& detail) {
    if (!condition) detail += " [FAILED: " + label + "]";
    return condition;
}

// 1. eval_policy_exact vs forward trajectory enumeration, 1e-12.
bool criterion_brute_force(std::string& detail) {
    const GameSpec game = random_game(2, 2, 3, 1.0, 424242);
    const PolicyProfile pi = random_policy(2, 3, 2, 2, 424243, 0.05);
    const AggregateField z(2, 3, 2);
    const EvalResult result = eval_policy_exact(game, pi, z);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const PathEnumerator oracle{game, pi, z, i};
        for (int h = 0; h < 3; ++h)
            for (int s = 0; s < 2; ++s)
                for (int a = 0; a < 2; ++a)
                    worst = std::max(worst,
                                     std::abs(result.q.at(i, h, s, a) - oracle.q(h, s, a)));
        worst = std::max(worst, std::abs(result.v.cumulative[i] - oracle.cumulative()));
    }
    detail = "max |Q - enumeration| = " + std::to_string(worst);
    return check(worst <= 1e-12, "tolerance 1e-12", detail);
}

// 2. pmd_step vs independently solved KL-regularized argmax, 100 draws, 1e-8.
bool criterion_step_equivalence(std::string& detail) {
    Rng rng(777);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const int n_actions = 2 + static_cast<int>(rng.next_u64() % 4);
        std::vector<double> pi_row(n_actions), q_row(n_actions);
        rng.sample_simplex(pi_row);
        for (auto& v : pi_row) v = 0.9 * v + 0.1 / n_actions;
        for (auto& v : q_row) v = 6.0 * rng.next_double() - 3.0;
        const double lambda = draw % 4 == 0 ? 0.0 : 2.0 * rng.next_double();
        double eta = 0.05 + 0.6 * rng.next_double();
        if (lambda > 0.0) eta = std::min(eta, 0.9 / lambda);

        PolicyProfile pi(1, 1, 1, n_actions);
        QProfile q(1, 1, 1, n_actions);
        for (int a = 0; a < n_actions; ++a) {
            pi.at(0, 0, 0, a) = pi_row[a];
            q.at(0, 0, 0, a) = q_row[a];
        }
        const PolicyProfile stepped = pmd_step(pi, q, eta, 0.0, lambda);
        const std::vector<double> solved =
            argmax_kl_regularized_dual(q_row, pi_row, eta, lambda);
        for (int a = 0; a < n_actions; ++a)
            worst = std::max(worst, std::abs(stepped.at(0, 0, 0, a) - solved[a]));
    }
    detail = "max |step - argmax| over 100 draws = " + std::to_string(worst);
    return check(worst <= 1e-8, "tolerance 1e-8", detail);
}

// 3. Oracle convergence on the Beach Bar defaults.
bool criterion_oracle_convergence(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const DiscreteGraphon graphon = discretize(sbm_spec(), 10, game.horizon);
    PMDConfig config;
    config.iterations = 200;
    config.lambda = 1.0;  // eta = 1/sqrt(T), beta = 1/T by default
    const PMDResult result = pmd_run(game, graphon, config);

    const double first = result.trace.front().exploitability_avg;
    const double last = result.trace.back().exploitability_avg;
    detail = "exploit(avg): t=1 " + std::to_string(first) + ", t=200 " +
             std::to_string(last);
    bool ok = check(last <= 0.1 * first, "final <= 10% of initial", detail);
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
        if (result.trace[k].exploitability_avg >
            1.05 * result.trace[k - 1].exploitability_avg + 1e-12) {
            ok = check(false,
                       "non-increasing within 5% at t=" +
                           std::to_string(result.trace[k].t),
                       detail);
            break;
        }
    }
    return ok;
}

// 4. Rate scaling of the KL metric against a long-run reference.
bool criterion_rate_scaling(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const DiscreteGraphon graphon = discretize(sbm_spec(), 10, game.horizon);

    // Reference: 1e4-iteration oracle run; beta = 0 keeps the fixed point at
    // the equilibrium so the last iterate converges to machine precision.
    PMDConfig ref_config;
    ref_config.iterations = 10000;
    ref_config.lambda = 1.0;
    ref_config.eta = 1.0 / std::sqrt(10000.0);
    ref_config.beta = 0.0;
    ref_config.exploit_stride = 10000;
    const PMDResult reference = pmd_run(game, graphon, ref_config);
    const double ref_exploit = exploitability(game, graphon, reference.last_policy);
    detail = "reference exploit = " + std::to_string(ref_exploit);
    if (!check(ref_exploit < 1e-4, "reference exploitability < 1e-4", detail)) return false;
    const DistributionFlow mu_ref = induce_flow(game, reference.last_policy);

    // The schedule orders are fixed (eta ~ T^-1/2, beta ~ T^-1); the free
    // constant follows the bound-balancing choice for this instance, where
    // the averaged iterate exhibits the theoretical halving cleanly.
    const auto metric_at = [&](int iterations) {
        PMDConfig config;
        config.iterations = iterations;
        config.lambda = 1.0;
        config.c_eta = 0.25;
        config.exploit_stride = iterations;
        const PMDResult run = pmd_run(game, graphon, config);
        return kl_metric(run.avg_policy, reference.last_policy, mu_ref);
    };
    const double d_100 = metric_at(100);
    const double d_400 = metric_at(400);
    const double ratio = d_400 / d_100;
    detail += ", D(100) = " + std::to_string(d_100) + ", D(400) = " + std::to_string(d_400) +
              ", ratio = " + std::to_string(ratio);
    return check(ratio >= 0.3 && ratio <= 0.8, "ratio in [0.3, 0.8]", detail);
}

// 5. Fitted-Q RMSE scaling in the episode count.
bool criterion_estimation_scaling(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const int n = 10;
    const DiscreteGraphon graphon = discretize(sbm_spec(), n, game.horizon);
    const PolicyProfile pi =
        PolicyProfile::uniform(n, game.horizon, game.n_states, game.n_actions());
    const AggregateField z = compute_aggregates(induce_flow(game, pi), graphon);
    const EvalResult exact = eval_policy_exact(game, pi, z);
    const TabularFunctionClass fclass = TabularFunctionClass::from_game(game);

    const auto rmse = [&](int episodes, std::uint64_t seed) {
        const EpisodeBatch batch =
            sample_episodes(game, pi, BehaviorPolicySpec{}, z, n, episodes, seed);
        const FittedQ fitted = fitted_q_evaluation(batch, pi, game.lambda, fclass);
        double acc = 0.0;
        long count = 0;
        for (int i = 0; i < n; ++i)
            for (int h = 0; h < game.horizon; ++h)
                for (int s = 0; s < game.n_states; ++s)
                    for (int a = 0; a < game.n_actions(); ++a) {
                        if (!fitted.was_visited(i, h, s, a)) continue;
                        const double d = fitted.q.at(i, h, s, a) - exact.q.at(i, h, s, a);
                        acc += d * d;
                        ++count;
                    }
        return std::sqrt(acc / count);
    };
    double rmse_250 = 0.0, rmse_1000 = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        rmse_250 += rmse(250, 31000 + seed);
        rmse_1000 += rmse(1000, 62000 + seed);
    }
    const double ratio = (rmse_1000 / 10.0) / (rmse_250 / 10.0);
    detail = "RMSE(K=1000)/RMSE(K=250) = " + std::to_string(ratio);
    return check(ratio >= 0.35 && ratio <= 0.72, "ratio in [0.35, 0.72]", detail);
}

// 6. Q-assignment error shrinks when sampling more agents (exp-graphon).
bool criterion_agent_sampling(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const int n = 10;
    const DiscreteGraphon graphon =
        discretize(GraphonSpec{ExpGraphon{3.0}}, n, game.horizon);
    const PolicyProfile pi =
        PolicyProfile::uniform(n, game.horizon, game.n_states, game.n_actions());
    const AggregateField z = compute_aggregates(induce_flow(game, pi), graphon);
    const EvalResult exact = eval_policy_exact(game, pi, z);
    const TabularFunctionClass fclass = TabularFunctionClass::from_game(game);

    const auto assignment_error = [&](int n_sampled, std::uint64_t seed) {
        const EpisodeBatch batch =
            sample_episodes(game, pi, BehaviorPolicySpec{}, z, n_sampled, 10000, seed);
        const QProfile assigned =
            assign_estimates(fitted_q_evaluation(batch, pi, game.lambda, fclass).q, n);
        double worst = 0.0;
        const double cells = game.horizon * game.n_states * game.n_actions();
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int h = 0; h < game.horizon; ++h)
                for (int s = 0; s < game.n_states; ++s)
                    for (int a = 0; a < game.n_actions(); ++a) {
                        const double d = assigned.at(j, h, s, a) - exact.q.at(j, h, s, a);
                        acc += d * d;
                    }
            worst = std::max(worst, std::sqrt(acc / cells));
        }
        return worst;
    };
    double err_5 = 0.0, err_10 = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        err_5 += assignment_error(5, 510 + seed);
        err_10 += assignment_error(10, 1020 + seed);
    }
    err_5 /= 5.0;
    err_10 /= 5.0;
    detail = "max-agent error: N_s=5 " + std::to_string(err_5) + ", N_s=10 " +
             std::to_string(err_10);
    return check(err_10 < err_5, "error(N_s=10) < error(N_s=5)", detail);
}

// 7. Experiment-shape reproduction through compare_runs.
bool criterion_experiment_shape(std::string& detail) {
    const std::string base_text = R"({
  "n_agents": 10,
  "replications": 5,
  "base_seed": 90,
  "game": {"beach_bar": {}},
  "graphon": {"kind": "sbm", "boundaries": [0.7, 1.0], "rates": [[0.9, 0.3], [0.3, 0.9]]},
  "solver": {"iterations": 300, "q_source": "estimated", "n_sampled": 10, "episodes": 300,
             "exploit_stride": 300},
  "output": {"dir": "/tmp/gmfg-acceptance/estimation", "format": "csv"}
})";
    ExperimentConfig config = parse_config_text(base_text);
    const std::vector<Variant> variants = {
        {"n10_k100", R"({"solver": {"episodes": 100}})"},
        {"n5_k300", R"({"solver": {"n_sampled": 5}})"},
    };
    const CompareTable estimation = compare_runs(config, variants, 2);
    const double final_10_300 = estimation[0].table.summary.back().mean;
    const double final_10_100 = estimation[1].table.summary.back().mean;
    const double final_5_300 = estimation[2].table.summary.back().mean;
    detail = "final mean exploit: (10,300) " + std::to_string(final_10_300) + ", (10,100) " +
             std::to_string(final_10_100) + ", (5,300) " + std::to_string(final_5_300);
    bool ok = check(final_10_300 <= final_10_100 && final_10_300 <= final_5_300,
                    "(10,300) is best", detail);

    // Constant-graphon approximations measured against the true SBM game.
    const std::string oracle_text = R"({
  "n_agents": 10,
  "replications": 1,
  "base_seed": 90,
  "game": {"beach_bar": {}},
  "graphon": {"kind": "sbm", "boundaries": [0.7, 1.0], "rates": [[0.9, 0.3], [0.3, 0.9]]},
  "solver": {"iterations": 300, "q_source": "oracle", "exploit_stride": 300},
  "output": {"dir": "/tmp/gmfg-acceptance/graphon", "format": "csv"}
})";
    ExperimentConfig oracle_config = parse_config_text(oracle_text);
    const std::vector<Variant> graphon_variants = {
        {"p0", R"({"graphon": {"kind": "constant", "p": 0.0}})"},
        {"p05", R"({"graphon": {"kind": "constant", "p": 0.5}})"},
        {"p1", R"({"graphon": {"kind": "constant", "p": 1.0}})"},
    };
    const CompareTable mismatch = compare_runs(oracle_config, graphon_variants, 2);
    const double sbm_final = mismatch[0].table.summary.back().mean;
    detail += "; sbm-aware " + std::to_string(sbm_final);
    for (std::size_t k = 1; k < mismatch.size(); ++k) {
        const double constant_final = mismatch[k].table.summary.back().mean;
        detail += ", " + mismatch[k].variant + " " + std::to_string(constant_final);
        ok = check(constant_final >= 2.0 * sbm_final,
                   mismatch[k].variant + " >= 2x sbm-aware", detail) &&
             ok;
    }
    return ok;
}

// 8. Monotonicity probe on the as-written and sign-flipped rewards.
bool criterion_monotone_probe(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const DiscreteGraphon graphon = discretize(sbm_spec(), 10, game.horizon);
    const ProbeReport report = monotonicity_probe(game, graphon, 1000, 4242);
    detail = "as-written max_lhs = " + std::to_string(report.max_lhs) +
             ", violations = " + std::to_string(report.violations);
    bool ok = check(report.violations == 0 && report.max_lhs <= 1e-10,
                    "no violations on the as-written reward", detail);

    BeachBarConfig flipped;
    flipped.crowd_coeff = -8.0;
    const ProbeReport flipped_report =
        monotonicity_probe(build_beach_bar(flipped), graphon, 1000, 4242);
    detail += "; flipped violations = " + std::to_string(flipped_report.violations);
    return check(flipped_report.violations >= 1, "sign flip violates", detail) && ok;
}

// 9. Informational: the unregularized baseline dips and then climbs.
bool criterion_unregularized_baseline(std::string& detail) {
    const GameSpec game = build_beach_bar(BeachBarConfig{});
    const DiscreteGraphon graphon = discretize(sbm_spec(), 10, game.horizon);
    PMDConfig config;
    config.iterations = 200;
    config.lambda = 1.0;
    config.baseline = Baseline::unregularized;
    const PMDResult result = pmd_run(game, graphon, config);
    double minimum = result.trace.front().exploitability_last;
    int arg_min = result.trace.front().t;
    for (const IterationRecord& rec : result.trace)
        if (rec.exploitability_last < minimum) {
            minimum = rec.exploitability_last;
            arg_min = rec.t;
        }
    const double final_value = result.trace.back().exploitability_last;
    detail = "min exploit(last) " + std::to_string(minimum) + " at t=" +
             std::to_string(arg_min) + ", final " + std::to_string(final_value);
    bool ok = check(arg_min < config.iterations, "minimum strictly before T", detail);
    ok = check(final_value >= 1.2 * minimum, "final >= 1.2x minimum", detail) && ok;
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"brute-force equivalence", true, 1.0, criterion_brute_force},
        {"step equivalence", true, 5.0, criterion_step_equivalence},
        {"oracle convergence", true, 60.0, criterion_oracle_convergence},
        {"rate scaling", true, 600.0, criterion_rate_scaling},
        {"estimation scaling", true, 60.0, criterion_estimation_scaling},
        {"agent-sampling scaling", true, 120.0, criterion_agent_sampling},
        {"experiment-shape reproduction", true, 600.0, criterion_experiment_shape},
        {"monotonicity probe", true, 10.0, criterion_monotone_probe},
        {"unregularized baseline (informational)", false, 0.0,
         criterion_unregularized_baseline},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const Criterion& criterion = criteria[k];
        const auto started = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (criterion.time_limit > 0.0 && seconds > criterion.time_limit) {
            passed = false;
            detail += " [FAILED: over the " + std::to_string(criterion.time_limit) +
                      "s budget]";
        }
        const char* verdict = passed ? "PASS" : (criterion.gating ? "FAIL" : "INFO-FAIL");
        std::printf("[%zu/%zu] %-9s %s (%.1fs) %s\n", k + 1, criteria.size(), verdict,
                    criterion.name.c_str(), seconds, detail.c_str());
        std::fflush(stdout);
        if (!passed && criterion.gating) ++failures;
    }
    if (failures > 0) {
        std::printf("%d gating criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all gating criteria passed\n");
    return 0;
}
