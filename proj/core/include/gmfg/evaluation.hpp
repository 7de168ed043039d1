#pragma once

#include <span>
#include <vector>

#include "gmfg/game.hpp"
#include "gmfg/meanfield.hpp"

namespace gmfg {

/// Per-agent regularized action-value tables q[i][h][s][a].
struct QProfile {
    int n_agents = 0;
    int horizon = 0;
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> q;

    QProfile() = default;
    QProfile(int agents, int steps, int states, int acts)
        : n_agents(agents), horizon(steps), n_states(states), n_actions(acts),
          q(static_cast<std::size_t>(agents) * steps * states * acts, 0.0) {}

    double at(int i, int h, int s, int a) const {
        return q[((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions + a];
    }
    double& at(int i, int h, int s, int a) {
        return q[((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions + a];
    }
    std::span<const double> row(int i, int h, int s) const {
        return {q.data() +
                    ((static_cast<std::size_t>(i) * horizon + h) * n_states + s) * n_actions,
                static_cast<std::size_t>(n_actions)};
    }
};

/// Per-agent regularized value tables v[i][h][s] plus the cumulative reward
/// J[i] = sum_s mu1(s) v[i][1][s].
struct VProfile {
    int n_agents = 0;
    int horizon = 0;
    int n_states = 0;
    std::vector<double> v;
    std::vector<double> cumulative;

    VProfile() = default;
    VProfile(int agents, int steps, int states)
        : n_agents(agents), horizon(steps), n_states(states),
          v(static_cast<std::size_t>(agents) * steps * states, 0.0),
          cumulative(agents, 0.0) {}

    double at(int i, int h, int s) const {
        return v[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
    double& at(int i, int h, int s) {
        return v[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
};

struct EvalResult {
    QProfile q;
    VProfile v;
};

/// Exact regularized policy evaluation by backward recursion per agent:
///   Q_h(s,a) = r_h(s,a,z[i][h]) + sum_{s'} P_h(s'|s,a) V_{h+1}(s'),
///   V_h(s)   = sum_a pi(a|s) [Q_h(s,a) - lambda log pi(a|s)],  V_{H+1} = 0.
/// Throws EvaluationError when lambda > 0 and some reachable state carries a
/// zero action probability.
EvalResult eval_policy_exact(const GameSpec& game, const PolicyProfile& pi,
                             const AggregateField& z);

struct BestResponse {
    PolicyProfile policy;
    VProfile value;
};

/// Optimal regularized response against fixed aggregates. For lambda > 0 the
/// backward step is the soft Bellman update
///   V*_h(s) = lambda log sum_a exp(b_a / lambda),
///   b_a = r_h(s,a,z) + sum_{s'} P_h(s'|s,a) V*_{h+1}(s'),
/// with the softmax of b at temperature lambda as the maximizing policy.
/// For lambda = 0 it is the hard max with uniform tie-breaking (1e-12 tol).
BestResponse soft_best_response(const GameSpec& game, const AggregateField& z);

/// Average best-response gain against the profile's own induced aggregates:
///   (1/N) sum_i [ max_pi~ J^i(pi~, mu) - J^i(pi^i, mu) ].
/// Zero exactly at a Nash equilibrium; never below -1e-9 numerically.
double exploitability(const GameSpec& game, const DiscreteGraphon& graphon,
                      const PolicyProfile& pi);

/// Flow-weighted KL divergence from a reference profile:
///   (1/N) sum_i sum_h sum_s mu_ref[i][h][s] * KL(pi_ref[i][h][s] || pi[i][h][s]).
/// Throws MetricError when pi_ref puts mass where pi does not.
double kl_metric(const PolicyProfile& pi, const PolicyProfile& pi_ref,
                 const DistributionFlow& mu_ref);

}  // namespace gmfg
