#pragma once

#include <span>
#include <vector>

#include "gmfg/game.hpp"
#include "gmfg/graphon.hpp"

namespace gmfg {

/// Per-agent, per-step stochastic policies pi[i][h][s][a].
struct PolicyProfile {
    int n_agents = 0;
    int horizon = 0;
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> pi;

    PolicyProfile() = default;
    PolicyProfile(int agents, int steps, int states, int acts)
        : n_agents(agents), horizon(steps), n_states(states), n_actions(acts),
          pi(static_cast<std::size_t>(agents) * steps * states * acts, 0.0) {}

    /// Uniform policy over actions at every (agent, step, state).
    static PolicyProfile uniform(int agents, int steps, int states, int acts);

    double at(int i, int h, int s, int a) const {
        return pi[((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions + a];
    }
    double& at(int i, int h, int s, int a) {
        return pi[((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions + a];
    }
    std::span<const double> row(int i, int h, int s) const {
        return {pi.data() +
                    ((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions,
                static_cast<std::size_t>(n_actions)};
    }
    std::span<double> row(int i, int h, int s) {
        return {pi.data() +
                    ((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions,
                static_cast<std::size_t>(n_actions)};
    }

    bool same_shape(const PolicyProfile& other) const {
        return n_agents == other.n_agents && horizon == other.horizon &&
               n_states == other.n_states && n_actions == other.n_actions;
    }

    /// Checks every row is a probability vector within 1e-12.
    void validate() const;
};

/// Per-agent, per-step state marginals mu[i][h][s].
struct DistributionFlow {
    int n_agents = 0;
    int horizon = 0;
    int n_states = 0;
    std::vector<double> mu;

    DistributionFlow() = default;
    DistributionFlow(int agents, int steps, int states)
        : n_agents(agents), horizon(steps), n_states(states),
          mu(static_cast<std::size_t>(agents) * steps * states, 0.0) {}

    double at(int i, int h, int s) const {
        return mu[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
    double& at(int i, int h, int s) {
        return mu[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
    std::span<const double> row(int i, int h) const {
        return {mu.data() + (static_cast<std::size_t>(i) * horizon + h) * n_states,
                static_cast<std::size_t>(n_states)};
    }
};

/// Propagates each agent's state marginals forward under its policy. The
/// transitions are aggregate-independent, so agents evolve independently:
///   mu[i][1] = mu1,  mu[i][h+1][s'] = sum_{s,a} mu[i][h][s] pi[i][h][s][a] P_h(s'|s,a).
DistributionFlow induce_flow(const GameSpec& game, const PolicyProfile& pi);

/// Riemann-sum discretization of the graphon aggregate:
///   z[i][h][s] = (1/N) sum_j weights[h][i][j] * mu[j][h][s].
/// Summation order over j is fixed, so equal graphon rows with equal flows
/// produce bitwise-equal aggregates.
AggregateField compute_aggregates(const DistributionFlow& mu, const DiscreteGraphon& graphon);

}  // namespace gmfg
