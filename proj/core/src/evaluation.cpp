#include "gmfg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmfg {

namespace {

constexpr double kTieTol = 1e-12;

void check_dims(const GameSpec& game, const AggregateField& z) {
    if (z.horizon != game.horizon || z.n_states != game.n_states)
        throw ValidationError("evaluation: aggregate dimensions do not match game");
}

// Forward support propagation; reach[h*S + s] marks states an agent can
// occupy with positive probability under pi.
std::vector<char> reachable_states(const GameSpec& game, const PolicyProfile& pi, int agent) {
    const int n_states = game.n_states;
    std::vector<char> reach(static_cast<std::size_t>(game.horizon) * n_states, 0);
    for (int s = 0; s < n_states; ++s)
        if (game.mu1[s] > 0.0) reach[s] = 1;
    for (int h = 0; h + 1 < game.horizon; ++h) {
        for (int s = 0; s < n_states; ++s) {
            if (!reach[static_cast<std::size_t>(h) * n_states + s]) continue;
            for (int a = 0; a < game.n_actions(); ++a) {
                if (pi.at(agent, h, s, a) <= 0.0) continue;
                const auto row = game.transition_row(h, s, a);
                for (int s2 = 0; s2 < n_states; ++s2)
                    if (row[s2] > 0.0)
                        reach[static_cast<std::size_t>(h + 1) * n_states + s2] = 1;
            }
        }
    }
    return reach;
}

}  // namespace

EvalResult eval_policy_exact(const GameSpec& game, const PolicyProfile& pi,
                             const AggregateField& z) {
    game.validate();
    check_dims(game, z);
    if (pi.horizon != game.horizon || pi.n_states != game.n_states ||
        pi.n_actions != game.n_actions() || pi.n_agents != z.n_agents)
        throw ValidationError("eval_policy_exact: policy dimensions do not match inputs");

    const int n_agents = pi.n_agents;
    const int n_states = game.n_states;
    const int n_actions = game.n_actions();
    const double lambda = game.lambda;

    EvalResult out;
    out.q = QProfile(n_agents, game.horizon, n_states, n_actions);
    out.v = VProfile(n_agents, game.horizon, n_states);

    std::vector<double> v_next(n_states);
    for (int i = 0; i < n_agents; ++i) {
        if (lambda > 0.0) {
            const auto reach = reachable_states(game, pi, i);
            for (int h = 0; h < game.horizon; ++h)
                for (int s = 0; s < n_states; ++s) {
                    if (!reach[static_cast<std::size_t>(h) * n_states + s]) continue;
                    for (int a = 0; a < n_actions; ++a)
                        if (pi.at(i, h, s, a) <= 0.0)
                            throw EvaluationError(
                                "eval_policy_exact: zero action probability at a reachable "
                                "state with lambda > 0 (mix with the uniform policy upstream)");
                }
        }
        std::fill(v_next.begin(), v_next.end(), 0.0);
        for (int h = game.horizon - 1; h >= 0; --h) {
            const auto z_row = z.row(i, h);
            for (int s = 0; s < n_states; ++s) {
                double v = 0.0;
                for (int a = 0; a < n_actions; ++a) {
                    double cont = 0.0;
                    const auto row = game.transition_row(h, s, a);
                    for (int s2 = 0; s2 < n_states; ++s2) cont += row[s2] * v_next[s2];
                    const double q = game.reward(h + 1, s, a, z_row) + cont;
                    out.q.at(i, h, s, a) = q;
                    const double p = pi.at(i, h, s, a);
                    if (p > 0.0) v += p * (q - lambda * std::log(p));
                }
                out.v.at(i, h, s) = v;
            }
            for (int s = 0; s < n_states; ++s) v_next[s] = out.v.at(i, h, s);
        }
        double cum = 0.0;
        for (int s = 0; s < n_states; ++s) cum += game.mu1[s] * out.v.at(i, 0, s);
        out.v.cumulative[i] = cum;
    }
    return out;
}

BestResponse soft_best_response(const GameSpec& game, const AggregateField& z) {
    game.validate();
    check_dims(game, z);
    const int n_agents = z.n_agents;
    const int n_states = game.n_states;
    const int n_actions = game.n_actions();
    const double lambda = game.lambda;

    BestResponse out;
    out.policy = PolicyProfile(n_agents, game.horizon, n_states, n_actions);
    out.value = VProfile(n_agents, game.horizon, n_states);

    std::vector<double> v_next(n_states);
    std::vector<double> b(n_actions);
    for (int i = 0; i < n_agents; ++i) {
        std::fill(v_next.begin(), v_next.end(), 0.0);
        for (int h = game.horizon - 1; h >= 0; --h) {
            const auto z_row = z.row(i, h);
            for (int s = 0; s < n_states; ++s) {
                double best = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < n_actions; ++a) {
                    double cont = 0.0;
                    const auto row = game.transition_row(h, s, a);
                    for (int s2 = 0; s2 < n_states; ++s2) cont += row[s2] * v_next[s2];
                    b[a] = game.reward(h + 1, s, a, z_row) + cont;
                    best = std::max(best, b[a]);
                }
                if (lambda > 0.0) {
                    // Max-subtracted log-sum-exp; stable down to small lambda.
                    double norm = 0.0;
                    for (int a = 0; a < n_actions; ++a) {
                        const double w = std::exp((b[a] - best) / lambda);
                        out.policy.at(i, h, s, a) = w;
                        norm += w;
                    }
                    for (int a = 0; a < n_actions; ++a) out.policy.at(i, h, s, a) /= norm;
                    out.value.at(i, h, s) = best + lambda * std::log(norm);
                } else {
                    int ties = 0;
                    for (int a = 0; a < n_actions; ++a)
                        if (b[a] >= best - kTieTol) ++ties;
                    for (int a = 0; a < n_actions; ++a)
                        out.policy.at(i, h, s, a) = b[a] >= best - kTieTol ? 1.0 / ties : 0.0;
                    out.value.at(i, h, s) = best;
                }
            }
            for (int s = 0; s < n_states; ++s) v_next[s] = out.value.at(i, h, s);
        }
        double cum = 0.0;
        for (int s = 0; s < n_states; ++s) cum += game.mu1[s] * out.value.at(i, 0, s);
        out.value.cumulative[i] = cum;
    }
    return out;
}

double exploitability(const GameSpec& game, const DiscreteGraphon& graphon,
                      const PolicyProfile& pi) {
    if (pi.n_agents != graphon.n_agents)
        throw ValidationError("exploitability: policy and graphon agent counts differ");
    const DistributionFlow flow = induce_flow(game, pi);
    const AggregateField z = compute_aggregates(flow, graphon);
    const BestResponse br = soft_best_response(game, z);
    const EvalResult ev = eval_policy_exact(game, pi, z);
    double acc = 0.0;
    for (int i = 0; i < pi.n_agents; ++i)
        acc += br.value.cumulative[i] - ev.v.cumulative[i];
    return acc / pi.n_agents;
}

double kl_metric(const PolicyProfile& pi, const PolicyProfile& pi_ref,
                 const DistributionFlow& mu_ref) {
    if (!pi.same_shape(pi_ref))
        throw ValidationError("kl_metric: policy shapes differ");
    if (mu_ref.n_agents != pi.n_agents || mu_ref.horizon != pi.horizon ||
        mu_ref.n_states != pi.n_states)
        throw ValidationError("kl_metric: reference flow dimensions do not match policies");

    double acc = 0.0;
    for (int i = 0; i < pi.n_agents; ++i) {
        for (int h = 0; h < pi.horizon; ++h) {
            for (int s = 0; s < pi.n_states; ++s) {
                double kl = 0.0;
                for (int a = 0; a < pi.n_actions; ++a) {
                    const double p = pi_ref.at(i, h, s, a);
                    if (p <= 0.0) continue;
                    const double q = pi.at(i, h, s, a);
                    if (q <= 0.0)
                        throw MetricError(
                            "kl_metric: reference policy puts mass where the policy does not");
                    kl += p * std::log(p / q);
                }
                acc += mu_ref.at(i, h, s) * kl;
            }
        }
    }
    return acc / pi.n_agents;
}

}  // namespace gmfg
