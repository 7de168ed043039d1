#include "gmfg/meanfield.hpp"

#include <cmath>

namespace gmfg {

namespace {
constexpr double kRowTol = 1e-12;
}

PolicyProfile PolicyProfile::uniform(int agents, int steps, int states, int acts) {
    PolicyProfile out(agents, steps, states, acts);
    const double u = 1.0 / acts;
    for (auto& v : out.pi) v = u;
    return out;
}

void PolicyProfile::validate() const {
    for (int i = 0; i < n_agents; ++i) {
        for (int h = 0; h < horizon; ++h) {
            for (int s = 0; s < n_states; ++s) {
                double sum = 0.0;
                for (int a = 0; a < n_actions; ++a) {
                    const double v = at(i, h, s, a);
                    if (v < 0.0 || std::isnan(v))
                        throw ValidationError("policy: negative or NaN probability");
                    sum += v;
                }
                if (std::abs(sum - 1.0) > kRowTol)
                    throw ValidationError("policy: row does not sum to 1");
            }
        }
    }
}

DistributionFlow induce_flow(const GameSpec& game, const PolicyProfile& pi) {
    if (pi.horizon != game.horizon || pi.n_states != game.n_states ||
        pi.n_actions != game.n_actions())
        throw ValidationError("induce_flow: policy dimensions do not match game");
    const int n_agents = pi.n_agents;
    const int n_states = game.n_states;
    const int n_actions = game.n_actions();

    DistributionFlow flow(n_agents, game.horizon, n_states);
    for (int i = 0; i < n_agents; ++i) {
        for (int s = 0; s < n_states; ++s) flow.at(i, 0, s) = game.mu1[s];
        for (int h = 0; h + 1 < game.horizon; ++h) {
            for (int s = 0; s < n_states; ++s) {
                const double mass = flow.at(i, h, s);
                if (mass == 0.0) continue;
                for (int a = 0; a < n_actions; ++a) {
                    const double w = mass * pi.at(i, h, s, a);
                    if (w == 0.0) continue;
                    const auto row = game.transition_row(h, s, a);
                    for (int s2 = 0; s2 < n_states; ++s2)
                        flow.at(i, h + 1, s2) += w * row[s2];
                }
            }
        }
    }
    return flow;
}

AggregateField compute_aggregates(const DistributionFlow& mu, const DiscreteGraphon& graphon) {
    if (mu.n_agents != graphon.n_agents || mu.horizon != graphon.horizon)
        throw ValidationError("compute_aggregates: flow and graphon dimensions do not match");
    const int n_agents = mu.n_agents;
    const int n_states = mu.n_states;

    AggregateField field(n_agents, mu.horizon, n_states);
    for (int i = 0; i < n_agents; ++i) {
        for (int h = 0; h < mu.horizon; ++h) {
            for (int s = 0; s < n_states; ++s) {
                double acc = 0.0;
                for (int j = 0; j < n_agents; ++j)
                    acc += graphon.at(h, i, j) * mu.at(j, h, s);
                field.at(i, h, s) = acc / n_agents;
            }
        }
    }
    return field;
}

}  // namespace gmfg
