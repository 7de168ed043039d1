#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmfg/estimation.hpp"
#include "gmfg/evaluation.hpp"
#include "gmfg/game.hpp"
#include "gmfg/graphon.hpp"
#include "gmfg/meanfield.hpp"

namespace gmfg {

enum class QSource { oracle, estimated };
enum class Baseline { regularized, unregularized };

/// Mirror-descent run parameters. Unset eta/beta resolve to the default
/// schedules c_eta / sqrt(T) and c_beta / T. The run requires
/// lambda * eta < 1 and beta in [0, 1).
struct PMDConfig {
    int iterations = 100;  // T
    std::optional<double> eta;
    std::optional<double> beta;
    double c_eta = 1.0;
    double c_beta = 1.0;
    double lambda = 1.0;
    QSource q_source = QSource::oracle;
    Baseline baseline = Baseline::regularized;
    int n_sampled = 10;                // estimated mode only
    int episodes_per_iteration = 100;  // estimated mode only (K)
    BehaviorPolicySpec behavior;
    std::uint64_t rng_seed = 0;
    int exploit_stride = 1;  // record exploitability every this many iterations

    double resolved_eta() const;
    double resolved_beta() const;
    /// Throws ConfigError on invalid combinations (lambda*eta >= 1, ...).
    void validate() const;
};

struct IterationRecord {
    int t = 0;
    double exploitability_last = 0.0;
    double exploitability_avg = 0.0;
    double wall_time = 0.0;  // seconds spent on this iteration
};

/// One mirror step at every (agent, step, state):
///   pi_hat(a) ~ pi_t(a)^(1 - lambda*eta) * exp(eta * q_hat(a)),  normalized,
///   output     = (1 - beta) * pi_hat + beta / |A|.
/// Every output entry is >= beta / |A| by construction.
PolicyProfile pmd_step(const PolicyProfile& pi_t, const QProfile& q_hat, double eta,
                       double beta, double lambda);

struct PMDResult {
    std::vector<IterationRecord> trace;
    PolicyProfile avg_policy;   // pointwise mean of the produced iterates
    PolicyProfile last_policy;  // final iterate
};

/// Runs mirror descent from the uniform profile. Each iteration evaluates the
/// current policy on its own induced aggregates (exactly, or through the
/// episode-sampling estimator), applies the mirror step, and records the
/// exploitability of the new iterate and of the running mean policy.
/// The unregularized baseline keeps the previous policy undiscounted
/// (exponent 1 instead of 1 - lambda*eta) while evaluation stays regularized.
/// When eval_graphon is non-null, recorded exploitabilities are measured
/// against it instead of the graphon driving the dynamics (model-mismatch
/// comparisons).
PMDResult pmd_run(const GameSpec& game, const DiscreteGraphon& graphon, const PMDConfig& config,
                  const DiscreteGraphon* eval_graphon = nullptr);

/// Pointwise arithmetic mean over a nonempty, shape-consistent history.
PolicyProfile average_policies(const std::vector<PolicyProfile>& history);

}  // namespace gmfg
