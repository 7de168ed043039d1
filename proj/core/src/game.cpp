#include "gmfg/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmfg/rng.hpp"

namespace gmfg {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kProbeTol = 1e-10;

}  // namespace

void GameSpec::validate() const {
    if (n_states < 1) throw ValidationError("game: n_states must be >= 1");
    if (actions.empty()) throw ValidationError("game: empty action set");
    if (horizon < 1) throw ValidationError("game: horizon must be >= 1");
    if (lambda < 0.0) throw ValidationError("game: lambda must be nonnegative");
    if (!(r_max > 0.0)) throw ValidationError("game: r_max must be positive");
    if (!reward) throw ValidationError("game: missing reward function");
    const std::size_t expected =
        static_cast<std::size_t>(horizon) * n_states * actions.size() * n_states;
    if (transition.size() != expected)
        throw ValidationError("game: transition tensor has wrong size");
    for (int h = 0; h < horizon; ++h) {
        for (int s = 0; s < n_states; ++s) {
            for (int a = 0; a < n_actions(); ++a) {
                double row_sum = 0.0;
                for (int s2 = 0; s2 < n_states; ++s2) {
                    const double v = p(h, s, a, s2);
                    if (v < 0.0) throw ValidationError("game: negative transition probability");
                    row_sum += v;
                }
                if (std::abs(row_sum - 1.0) > kStochasticTol)
                    throw ValidationError("game: transition row does not sum to 1");
            }
        }
    }
    if (mu1.size() != static_cast<std::size_t>(n_states))
        throw ValidationError("game: mu1 has wrong size");
    double mass = 0.0;
    for (double v : mu1) {
        if (v < 0.0) throw ValidationError("game: mu1 has negative entry");
        mass += v;
    }
    if (std::abs(mass - 1.0) > kStochasticTol)
        throw ValidationError("game: mu1 does not sum to 1");
}

void BeachBarConfig::validate() const {
    if (n_states < 1) throw ValidationError("beach bar: n_states must be >= 1");
    if (bar_position < 1 || bar_position > n_states)
        throw ValidationError("beach bar: bar_position must lie in [1, n_states]");
    if (dist_coeff < 0.0 || action_coeff < 0.0)
        throw ValidationError("beach bar: dist_coeff and action_coeff must be nonnegative");
    if (horizon < 1) throw ValidationError("beach bar: horizon must be >= 1");
    if (lambda < 0.0) throw ValidationError("beach bar: lambda must be nonnegative");
    if (!(noise_prob >= 0.0 && noise_prob <= 1.0))
        throw ValidationError("beach bar: noise_prob must lie in [0,1]");
}

GameSpec build_beach_bar(const BeachBarConfig& config) {
    config.validate();
    const int n = config.n_states;

    // Maps an off-grid position (1-based) back into [1, n].
    const auto boundary = [&config, n](int pos) {
        if (n == 1 || config.boundary_mode == BoundaryMode::clamp) {
            if (pos < 1) return 1;
            if (pos > n) return n;
            return pos;
        }
        while (pos < 1 || pos > n) {
            if (pos < 1) pos = 2 - pos;
            if (pos > n) pos = 2 * n - pos;
        }
        return pos;
    };

    GameSpec game;
    game.n_states = n;
    game.actions = {-1, 0, 1};
    game.horizon = config.horizon;
    game.lambda = config.lambda;
    game.mu1.assign(n, 1.0 / n);
    game.transition.assign(
        static_cast<std::size_t>(config.horizon) * n * game.actions.size() * n, 0.0);
    for (int h = 0; h < config.horizon; ++h) {
        for (int s = 0; s < n; ++s) {
            for (int a = 0; a < game.n_actions(); ++a) {
                const int move = s + 1 + game.actions[a];
                game.p(h, s, a, boundary(move + 1) - 1) += config.noise_prob;
                game.p(h, s, a, boundary(move - 1) - 1) += 1.0 - config.noise_prob;
            }
        }
    }

    const double sign = config.reward_sign_mode == RewardSignMode::as_written ? 1.0 : -1.0;
    const int bar = config.bar_position;
    const double dist_coeff = config.dist_coeff;
    const double action_coeff = config.action_coeff;
    const double crowd_coeff = config.crowd_coeff;
    const std::vector<int> labels = game.actions;
    game.reward = [sign, bar, dist_coeff, action_coeff, crowd_coeff, labels](
                      int /*h*/, int s, int a, std::span<const double> z) {
        return sign * (dist_coeff * std::abs(bar - (s + 1)) +
                       action_coeff * std::abs(labels[a])) -
               crowd_coeff * z[s];
    };
    game.r_max =
        dist_coeff * (n - 1) + action_coeff + std::abs(crowd_coeff);
    game.validate();
    return game;
}

std::vector<double> monotone_lhs(const GameSpec& game, const DiscreteGraphon& graphon,
                                 const OccupancyProfile& rho,
                                 const OccupancyProfile& rho_tilde) {
    const int n_agents = graphon.n_agents;
    const int n_states = game.n_states;
    const int n_actions = game.n_actions();
    if (rho.n_agents != n_agents || rho_tilde.n_agents != n_agents ||
        rho.n_states != n_states || rho_tilde.n_states != n_states ||
        rho.n_actions != n_actions || rho_tilde.n_actions != n_actions)
        throw ValidationError("monotone_lhs: profile dimensions do not match game/graphon");
    if (graphon.horizon != game.horizon)
        throw ValidationError("monotone_lhs: graphon horizon does not match game");

    // State marginals of the two profiles.
    std::vector<double> mu(static_cast<std::size_t>(n_agents) * n_states, 0.0);
    std::vector<double> mu_tilde(mu.size(), 0.0);
    for (int i = 0; i < n_agents; ++i) {
        for (int s = 0; s < n_states; ++s) {
            double m = 0.0, mt = 0.0;
            for (int a = 0; a < n_actions; ++a) {
                m += rho.at(i, s, a);
                mt += rho_tilde.at(i, s, a);
            }
            mu[static_cast<std::size_t>(i) * n_states + s] = m;
            mu_tilde[static_cast<std::size_t>(i) * n_states + s] = mt;
        }
    }

    std::vector<double> lhs(game.horizon, 0.0);
    std::vector<double> z(n_states), z_tilde(n_states);
    for (int h = 0; h < game.horizon; ++h) {
        double acc = 0.0;
        for (int i = 0; i < n_agents; ++i) {
            for (int s = 0; s < n_states; ++s) {
                double zs = 0.0, zts = 0.0;
                for (int j = 0; j < n_agents; ++j) {
                    const double w = graphon.at(h, i, j);
                    zs += w * mu[static_cast<std::size_t>(j) * n_states + s];
                    zts += w * mu_tilde[static_cast<std::size_t>(j) * n_states + s];
                }
                z[s] = zs / n_agents;
                z_tilde[s] = zts / n_agents;
            }
            for (int s = 0; s < n_states; ++s) {
                for (int a = 0; a < n_actions; ++a) {
                    const double d = rho.at(i, s, a) - rho_tilde.at(i, s, a);
                    if (d == 0.0) continue;
                    acc += d * (game.reward(h + 1, s, a, z) - game.reward(h + 1, s, a, z_tilde));
                }
            }
        }
        lhs[h] = acc / n_agents;
    }
    return lhs;
}

ProbeReport monotonicity_probe(const GameSpec& game, const DiscreteGraphon& graphon,
                               int n_trials, std::uint64_t rng_seed) {
    if (n_trials < 1) throw ValidationError("monotonicity_probe: n_trials must be >= 1");
    game.validate();
    const int n_agents = graphon.n_agents;
    const int n_states = game.n_states;
    const int n_actions = game.n_actions();

    ProbeReport report;
    report.trials = n_trials;
    report.max_lhs = -std::numeric_limits<double>::infinity();
    OccupancyProfile rho(n_agents, n_states, n_actions);
    OccupancyProfile rho_tilde(n_agents, n_states, n_actions);
    const std::size_t cell = static_cast<std::size_t>(n_states) * n_actions;
    for (int trial = 0; trial < n_trials; ++trial) {
        Rng rng(substream_seed(rng_seed, static_cast<std::uint64_t>(trial), 0, 0));
        for (int i = 0; i < n_agents; ++i) {
            rng.sample_simplex({rho.rho.data() + i * cell, cell});
            rng.sample_simplex({rho_tilde.rho.data() + i * cell, cell});
        }
        for (double v : monotone_lhs(game, graphon, rho, rho_tilde)) {
            if (v > report.max_lhs) report.max_lhs = v;
            if (v > kProbeTol) ++report.violations;
        }
    }
    return report;
}

double spot_check_reward_bound(const GameSpec& game, int n_samples, std::uint64_t rng_seed) {
    game.validate();
    Rng rng(rng_seed);
    std::vector<double> z(game.n_states);
    double worst = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const int h = 1 + static_cast<int>(rng.next_u64() % game.horizon);
        const int s = static_cast<int>(rng.next_u64() % game.n_states);
        const int a = static_cast<int>(rng.next_u64() % game.n_actions());
        // Non-uniform total mass in [0, 1] exercises sub-probability aggregates.
        rng.sample_simplex(z);
        const double scale = rng.next_double();
        for (auto& v : z) v *= scale;
        const double r = game.reward(h, s, a, z);
        worst = std::max(worst, std::abs(r));
        if (std::abs(r) > game.r_max)
            throw ValidationError("reward bound breached: |r| > r_max at a sampled input");
    }
    return worst;
}

}  // namespace gmfg
