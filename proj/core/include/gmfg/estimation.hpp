#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmfg/evaluation.hpp"
#include "gmfg/game.hpp"
#include "gmfg/meanfield.hpp"

namespace gmfg {

/// Exploration policy executed by sampled agents during data collection.
/// epsilon_mix plays (1 - epsilon) * pi_t + epsilon * Unif, so every action
/// keeps probability at least epsilon / |A| (uniform: 1 / |A|).
struct BehaviorPolicySpec {
    enum class Mode { uniform, epsilon_mix };
    Mode mode = Mode::uniform;
    double epsilon = 1.0;

    void validate() const;
};

struct TransitionRecord {
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
};

/// Transitions collected from K independent episodes per sampled agent,
/// indexed [sampled agent i][episode tau][step h].
struct EpisodeBatch {
    int n_sampled = 0;
    int n_total = 0;  // grid agents in the generating profile
    int episodes = 0;
    int horizon = 0;
    std::uint64_t seed = 0;
    std::string policy_tag;
    std::vector<TransitionRecord> records;

    const TransitionRecord& at(int i, int tau, int h) const {
        return records[(static_cast<std::size_t>(i) * episodes + tau) * horizon + h];
    }
    TransitionRecord& at(int i, int tau, int h) {
        return records[(static_cast<std::size_t>(i) * episodes + tau) * horizon + h];
    }

    /// Grid agent (0-based) whose policy and aggregate sampled agent i uses.
    int grid_agent(int i) const { return (i + 1) * (n_total / n_sampled) - 1; }
};

/// Per-step clip bounds for the tabular action-value class:
/// high_h = (H - h + 1) * (r_max + lambda * log|A|), low_h = -high_h.
struct TabularFunctionClass {
    std::vector<double> high;  // index 0-based by step
    std::vector<double> low;

    static TabularFunctionClass from_game(const GameSpec& game);
    double clip(int h, double value) const;
};

/// Collects K episodes from each of n_sampled grid agents (positions i/N_s,
/// i.e. every (N/N_s)-th grid agent) playing the behavior policy while the
/// aggregates stay those induced by pi_t. Episodes draw from independent
/// counter-based substreams of rng_seed, so episodes 1..K are a prefix of
/// episodes 1..2K under the same seed.
EpisodeBatch sample_episodes(const GameSpec& game, const PolicyProfile& pi_t,
                             const BehaviorPolicySpec& behavior, const AggregateField& z_t,
                             int n_sampled, int episodes, std::uint64_t rng_seed);

struct FittedQ {
    QProfile q;                 // over the sampled agents
    std::vector<char> visited;  // [i][h][s][a]
    long unvisited_count = 0;

    bool was_visited(int i, int h, int s, int a) const {
        return visited[((static_cast<std::size_t>(i) * q.horizon + h) * q.n_states + s) *
                           q.n_actions +
                       a] != 0;
    }
};

/// Backward least-squares fit of the batch (Bellman targets y = r + V_{h+1}(s')).
/// With a tabular class the per-step minimizer is the per-(s,a) mean of the
/// targets, clipped to the class bounds; the value update is
///   V_h(s) = <Q_h(s,.), pi_t(.|s)> - lambda * R(pi_t(.|s)),  R = negative entropy.
/// Unvisited pairs get value 0 and a cleared visit flag.
FittedQ fitted_q_evaluation(const EpisodeBatch& batch, const PolicyProfile& pi_t,
                            double lambda, const TabularFunctionClass& fclass);

/// Spreads sampled-agent estimates onto the full grid: agent alpha = j/N uses
/// the sampled agent whose block ((i-1)/N_s, i/N_s] contains alpha.
QProfile assign_estimates(const QProfile& q_sampled, int n_total);

/// Writes one line per transition: i,tau,h,s,a,r,s_next (1-based indices,
/// numeric action label). See the README for the format contract.
void dump_episode_batch(const EpisodeBatch& batch, const GameSpec& game, std::ostream& out);

}  // namespace gmfg
