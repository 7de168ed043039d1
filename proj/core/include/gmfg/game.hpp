#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gmfg/errors.hpp"
#include "gmfg/graphon.hpp"

namespace gmfg {

/// Reward contract: (h, s, a, z) -> real, with h 1-based, s and a 0-based
/// indices and z the caller's sub-probability aggregate over states.
using RewardFn = std::function<double(int h, int s, int a, std::span<const double> z)>;

/// A finite-horizon regularized game model with aggregate-independent
/// transitions. Transition rows are stochastic over the successor state.
struct GameSpec {
    int n_states = 0;
    std::vector<int> actions;     // ordered numeric labels, e.g. {-1, 0, 1}
    int horizon = 0;
    std::vector<double> transition;  // [h][s][a][s']
    RewardFn reward;
    double lambda = 0.0;
    std::vector<double> mu1;
    double r_max = 0.0;

    int n_actions() const { return static_cast<int>(actions.size()); }

    double p(int h, int s, int a, int s_next) const {
        return transition[((static_cast<std::size_t>(h) * n_states + s) * actions.size() + a) *
                              n_states +
                          s_next];
    }
    double& p(int h, int s, int a, int s_next) {
        return transition[((static_cast<std::size_t>(h) * n_states + s) * actions.size() + a) *
                              n_states +
                          s_next];
    }
    std::span<const double> transition_row(int h, int s, int a) const {
        const std::size_t base =
            ((static_cast<std::size_t>(h) * n_states + s) * actions.size() + a) * n_states;
        return {transition.data() + base, static_cast<std::size_t>(n_states)};
    }

    /// Structural checks: row-stochastic transitions and probability mu1,
    /// both within 1e-12. Throws ValidationError.
    void validate() const;
};

/// Per-agent, per-step sub-probability measures over states (the graphon
/// aggregates z_h seen by each agent).
struct AggregateField {
    int n_agents = 0;
    int horizon = 0;
    int n_states = 0;
    std::vector<double> z;  // [i][h][s]

    AggregateField() = default;
    AggregateField(int agents, int steps, int states)
        : n_agents(agents), horizon(steps), n_states(states),
          z(static_cast<std::size_t>(agents) * steps * states, 0.0) {}

    double at(int i, int h, int s) const {
        return z[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
    double& at(int i, int h, int s) {
        return z[(static_cast<std::size_t>(i) * horizon + h) * n_states + s];
    }
    std::span<const double> row(int i, int h) const {
        return {z.data() + (static_cast<std::size_t>(i) * horizon + h) * n_states,
                static_cast<std::size_t>(n_states)};
    }
};

enum class BoundaryMode { clamp, reflect };
enum class RewardSignMode { as_written, negated_distance };

/// Beach Bar instance parameters. Movements are {-1, 0, +1}; the per-step
/// noise is +1 with probability noise_prob and -1 otherwise. crowd_coeff may
/// be negative to support sign-flip probes of the monotone condition.
struct BeachBarConfig {
    int n_states = 10;
    int bar_position = 5;        // 1-based state index of the bar
    double dist_coeff = 0.2;     // 2/|S|
    double action_coeff = 0.2;   // 2/|S|
    double crowd_coeff = 8.0;
    int horizon = 10;
    double lambda = 1.0;
    double noise_prob = 0.5;
    BoundaryMode boundary_mode = BoundaryMode::clamp;
    RewardSignMode reward_sign_mode = RewardSignMode::as_written;

    void validate() const;
};

/// Builds the Beach Bar game: dynamics s' = boundary(s + a + eps) and reward
/// dist_coeff*|B-s| + action_coeff*|a| - crowd_coeff*z[s] (as-written mode;
/// the negated-distance mode flips the sign of the first two terms). The
/// initial distribution is uniform over states.
GameSpec build_beach_bar(const BeachBarConfig& config);

/// One state-action distribution per agent (a point of Delta(S x A)^N).
struct OccupancyProfile {
    int n_agents = 0;
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> rho;  // [i][s][a]

    OccupancyProfile() = default;
    OccupancyProfile(int agents, int states, int acts)
        : n_agents(agents), n_states(states), n_actions(acts),
          rho(static_cast<std::size_t>(agents) * states * acts, 0.0) {}

    double at(int i, int s, int a) const {
        return rho[(static_cast<std::size_t>(i) * n_states + s) * n_actions + a];
    }
    double& at(int i, int s, int a) {
        return rho[(static_cast<std::size_t>(i) * n_states + s) * n_actions + a];
    }
};

/// The discretized weakly-monotone left-hand side, one value per step h:
///   (1/N) sum_i sum_{s,a} (rho^i - rho~^i)(s,a)
///                         * [r_h(s,a,z_h^i(mu)) - r_h(s,a,z_h^i(mu~))]
/// where mu, mu~ are the state marginals of the two occupancy profiles.
std::vector<double> monotone_lhs(const GameSpec& game, const DiscreteGraphon& graphon,
                                 const OccupancyProfile& rho,
                                 const OccupancyProfile& rho_tilde);

struct ProbeReport {
    double max_lhs = 0.0;
    long violations = 0;  // count of per-(trial, step) values above tolerance
    int trials = 0;
};

/// Samples n_trials random occupancy-profile pairs and reports the largest
/// monotone LHS seen and the number of values exceeding 1e-10.
ProbeReport monotonicity_probe(const GameSpec& game, const DiscreteGraphon& graphon,
                               int n_trials, std::uint64_t rng_seed);

/// Spot-checks |reward| <= r_max on random (h, s, a, z) samples.
/// Returns the largest |reward| observed; throws ValidationError on a breach.
double spot_check_reward_bound(const GameSpec& game, int n_samples, std::uint64_t rng_seed);

}  // namespace gmfg
