#include "gmfg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gmfg/rng.hpp"

namespace gmfg {

double PMDConfig::resolved_eta() const {
    return eta ? *eta : c_eta / std::sqrt(static_cast<double>(iterations));
}

double PMDConfig::resolved_beta() const {
    return beta ? *beta : c_beta / static_cast<double>(iterations);
}

void PMDConfig::validate() const {
    if (iterations < 1) throw ConfigError("solver: iterations must be >= 1");
    if (lambda < 0.0) throw ConfigError("solver: lambda must be nonnegative");
    const double eta_v = resolved_eta();
    const double beta_v = resolved_beta();
    if (eta_v < 0.0) throw ConfigError("solver: eta must be nonnegative");
    if (lambda * eta_v >= 1.0) throw ConfigError("solver: lambda * eta must be < 1");
    if (!(beta_v >= 0.0 && beta_v < 1.0)) throw ConfigError("solver: beta must lie in [0, 1)");
    if (exploit_stride < 1) throw ConfigError("solver: exploit_stride must be >= 1");
    if (q_source == QSource::estimated) {
        if (n_sampled < 1) throw ConfigError("solver: n_sampled must be >= 1");
        if (episodes_per_iteration < 1)
            throw ConfigError("solver: episodes_per_iteration must be >= 1");
        behavior.validate();
    }
}

PolicyProfile pmd_step(const PolicyProfile& pi_t, const QProfile& q_hat, double eta,
                       double beta, double lambda) {
    if (lambda * eta >= 1.0) throw ConfigError("pmd_step: lambda * eta must be < 1");
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("pmd_step: beta must lie in [0, 1)");
    if (pi_t.n_agents != q_hat.n_agents || pi_t.horizon != q_hat.horizon ||
        pi_t.n_states != q_hat.n_states || pi_t.n_actions != q_hat.n_actions)
        throw ValidationError("pmd_step: policy and Q dimensions differ");

    const double keep = 1.0 - lambda * eta;
    const int n_actions = pi_t.n_actions;
    PolicyProfile out(pi_t.n_agents, pi_t.horizon, pi_t.n_states, n_actions);
    std::vector<double> logits(n_actions);
    for (int i = 0; i < pi_t.n_agents; ++i) {
        for (int h = 0; h < pi_t.horizon; ++h) {
            for (int s = 0; s < pi_t.n_states; ++s) {
                double top = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < n_actions; ++a) {
                    const double p = pi_t.at(i, h, s, a);
                    if (p <= 0.0) {
                        if (lambda > 0.0)
                            throw SolverError(
                                "pmd_step: zero policy entry with lambda > 0");
                        logits[a] = -std::numeric_limits<double>::infinity();
                        continue;
                    }
                    logits[a] = keep * std::log(p) + eta * q_hat.at(i, h, s, a);
                    top = std::max(top, logits[a]);
                }
                double norm = 0.0;
                for (int a = 0; a < n_actions; ++a) {
                    const double w =
                        std::isinf(logits[a]) ? 0.0 : std::exp(logits[a] - top);
                    out.at(i, h, s, a) = w;
                    norm += w;
                }
                for (int a = 0; a < n_actions; ++a) {
                    const double mixed =
                        (1.0 - beta) * (out.at(i, h, s, a) / norm) + beta / n_actions;
                    out.at(i, h, s, a) = mixed;
                }
            }
        }
    }
    return out;
}

PMDResult pmd_run(const GameSpec& game, const DiscreteGraphon& graphon, const PMDConfig& config,
                  const DiscreteGraphon* eval_graphon) {
    config.validate();
    game.validate();
    if (graphon.horizon != game.horizon)
        throw ValidationError("pmd_run: graphon horizon does not match game");
    if (eval_graphon &&
        (eval_graphon->n_agents != graphon.n_agents || eval_graphon->horizon != graphon.horizon))
        throw ValidationError("pmd_run: evaluation graphon dimensions differ");
    const int n_agents = graphon.n_agents;
    if (config.q_source == QSource::estimated && n_agents % config.n_sampled != 0)
        throw ConfigError("pmd_run: n_sampled must divide the grid agent count");

    const double eta = config.resolved_eta();
    const double beta = config.resolved_beta();
    // The unregularized baseline keeps pi_t undiscounted in the mirror step.
    const double step_lambda = config.baseline == Baseline::regularized ? config.lambda : 0.0;
    const TabularFunctionClass fclass = TabularFunctionClass::from_game(game);
    const DiscreteGraphon& measure = eval_graphon ? *eval_graphon : graphon;

    PMDResult result;
    PolicyProfile pi = PolicyProfile::uniform(n_agents, game.horizon, game.n_states,
                                              game.n_actions());
    PolicyProfile sum = pi;  // reused as the running sum of produced iterates
    std::fill(sum.pi.begin(), sum.pi.end(), 0.0);
    PolicyProfile avg = sum;

    for (int t = 1; t <= config.iterations; ++t) {
        const auto started = std::chrono::steady_clock::now();
        const DistributionFlow flow = induce_flow(game, pi);
        const AggregateField z = compute_aggregates(flow, graphon);

        QProfile q_hat;
        if (config.q_source == QSource::oracle) {
            q_hat = eval_policy_exact(game, pi, z).q;
        } else {
            const EpisodeBatch batch = sample_episodes(
                game, pi, config.behavior, z, config.n_sampled,
                config.episodes_per_iteration,
                substream_seed(config.rng_seed, static_cast<std::uint64_t>(t), 0, 0));
            q_hat = assign_estimates(
                fitted_q_evaluation(batch, pi, game.lambda, fclass).q, n_agents);
        }

        pi = pmd_step(pi, q_hat, eta, beta, step_lambda);
        for (double v : pi.pi)
            if (std::isnan(v))
                throw SolverError("pmd_run: NaN policy entry at iteration " +
                                  std::to_string(t));
        for (std::size_t k = 0; k < sum.pi.size(); ++k) sum.pi[k] += pi.pi[k];

        if (t % config.exploit_stride == 0 || t == config.iterations) {
            for (std::size_t k = 0; k < avg.pi.size(); ++k) avg.pi[k] = sum.pi[k] / t;
            IterationRecord rec;
            rec.t = t;
            rec.exploitability_last = exploitability(game, measure, pi);
            rec.exploitability_avg = exploitability(game, measure, avg);
            if (rec.exploitability_last < -1e-9 || rec.exploitability_avg < -1e-9)
                throw SolverError("pmd_run: exploitability below -1e-9 at iteration " +
                                  std::to_string(t));
            rec.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                    .count();
            result.trace.push_back(rec);
        }
    }
    for (std::size_t k = 0; k < avg.pi.size(); ++k)
        avg.pi[k] = sum.pi[k] / config.iterations;
    result.avg_policy = std::move(avg);
    result.last_policy = std::move(pi);
    return result;
}

PolicyProfile average_policies(const std::vector<PolicyProfile>& history) {
    if (history.empty()) throw ValidationError("average_policies: empty history");
    const PolicyProfile& first = history.front();
    for (const auto& p : history)
        if (!p.same_shape(first))
            throw ValidationError("average_policies: inconsistent shapes in history");
    PolicyProfile out(first.n_agents, first.horizon, first.n_states, first.n_actions);
    for (const auto& p : history)
        for (std::size_t k = 0; k < out.pi.size(); ++k) out.pi[k] += p.pi[k];
    const double scale = 1.0 / static_cast<double>(history.size());
    for (auto& v : out.pi) v *= scale;
    return out;
}

}  // namespace gmfg
