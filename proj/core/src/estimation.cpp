#include "gmfg/estimation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "gmfg/rng.hpp"

namespace gmfg {

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void BehaviorPolicySpec::validate() const {
    if (mode == Mode::epsilon_mix && !(epsilon > 0.0 && epsilon <= 1.0))
        throw ValidationError("behavior policy: epsilon must lie in (0,1]");
}

TabularFunctionClass TabularFunctionClass::from_game(const GameSpec& game) {
    TabularFunctionClass fclass;
    const double scale = game.r_max + game.lambda * std::log(game.n_actions());
    fclass.high.resize(game.horizon);
    fclass.low.resize(game.horizon);
    for (int h = 0; h < game.horizon; ++h) {
        fclass.high[h] = (game.horizon - h) * scale;
        fclass.low[h] = -fclass.high[h];
    }
    return fclass;
}

double TabularFunctionClass::clip(int h, double value) const {
    return std::min(high[h], std::max(low[h], value));
}

EpisodeBatch sample_episodes(const GameSpec& game, const PolicyProfile& pi_t,
                             const BehaviorPolicySpec& behavior, const AggregateField& z_t,
                             int n_sampled, int episodes, std::uint64_t rng_seed) {
    game.validate();
    behavior.validate();
    if (pi_t.horizon != game.horizon || pi_t.n_states != game.n_states ||
        pi_t.n_actions != game.n_actions())
        throw ValidationError("sample_episodes: policy dimensions do not match game");
    if (z_t.n_agents != pi_t.n_agents || z_t.horizon != game.horizon ||
        z_t.n_states != game.n_states)
        throw ValidationError("sample_episodes: aggregate dimensions do not match inputs");
    if (n_sampled < 1 || n_sampled > pi_t.n_agents)
        throw ValidationError("sample_episodes: n_sampled must lie in [1, n_agents]");
    if (pi_t.n_agents % n_sampled != 0)
        throw ValidationError("sample_episodes: n_sampled must divide the grid agent count");
    if (episodes < 1) throw ValidationError("sample_episodes: episodes must be >= 1");

    const int n_actions = game.n_actions();
    EpisodeBatch batch;
    batch.n_sampled = n_sampled;
    batch.n_total = pi_t.n_agents;
    batch.episodes = episodes;
    batch.horizon = game.horizon;
    batch.seed = rng_seed;
    batch.records.resize(static_cast<std::size_t>(n_sampled) * episodes * game.horizon);

    std::vector<double> action_probs(n_actions);
    for (int i = 0; i < n_sampled; ++i) {
        const int grid = batch.grid_agent(i);
        for (int tau = 0; tau < episodes; ++tau) {
            Rng rng(substream_seed(rng_seed, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(tau), 0));
            int s = rng.sample_index(game.mu1);
            for (int h = 0; h < game.horizon; ++h) {
                if (behavior.mode == BehaviorPolicySpec::Mode::uniform) {
                    std::fill(action_probs.begin(), action_probs.end(), 1.0 / n_actions);
                } else {
                    for (int a = 0; a < n_actions; ++a)
                        action_probs[a] = (1.0 - behavior.epsilon) * pi_t.at(grid, h, s, a) +
                                          behavior.epsilon / n_actions;
                }
                const int a = rng.sample_index(action_probs);
                const int s_next = rng.sample_index(game.transition_row(h, s, a));
                TransitionRecord& rec = batch.at(i, tau, h);
                rec.s = s;
                rec.a = a;
                rec.r = game.reward(h + 1, s, a, z_t.row(grid, h));
                rec.s_next = s_next;
                s = s_next;
            }
        }
    }
    return batch;
}

FittedQ fitted_q_evaluation(const EpisodeBatch& batch, const PolicyProfile& pi_t,
                            double lambda, const TabularFunctionClass& fclass) {
    if (batch.n_total != pi_t.n_agents)
        throw ValidationError("fitted_q_evaluation: batch and policy agent counts differ");
    if (static_cast<std::size_t>(batch.horizon) != fclass.high.size() ||
        batch.horizon != pi_t.horizon)
        throw ValidationError("fitted_q_evaluation: horizon mismatch");
    if (lambda < 0.0) throw ValidationError("fitted_q_evaluation: lambda must be nonnegative");

    const int n_states = pi_t.n_states;
    const int n_actions = pi_t.n_actions;
    const int horizon = batch.horizon;

    FittedQ out;
    out.q = QProfile(batch.n_sampled, horizon, n_states, n_actions);
    out.visited.assign(out.q.q.size(), 0);

    std::vector<double> mean(static_cast<std::size_t>(n_states) * n_actions);
    std::vector<long> count(mean.size());
    std::vector<double> v_next(n_states);
    for (int i = 0; i < batch.n_sampled; ++i) {
        const int grid = batch.grid_agent(i);
        std::fill(v_next.begin(), v_next.end(), 0.0);
        for (int h = horizon - 1; h >= 0; --h) {
            std::fill(mean.begin(), mean.end(), 0.0);
            std::fill(count.begin(), count.end(), 0L);
            // Running (Welford) means recover constant targets exactly, which
            // the zero-noise recovery contract depends on.
            for (int tau = 0; tau < batch.episodes; ++tau) {
                const TransitionRecord& rec = batch.at(i, tau, h);
                const double target = rec.r + v_next[rec.s_next];
                const std::size_t cell =
                    static_cast<std::size_t>(rec.s) * n_actions + rec.a;
                mean[cell] += (target - mean[cell]) / static_cast<double>(++count[cell]);
            }
            for (int s = 0; s < n_states; ++s) {
                double v = 0.0;
                for (int a = 0; a < n_actions; ++a) {
                    const std::size_t cell = static_cast<std::size_t>(s) * n_actions + a;
                    double q = 0.0;
                    if (count[cell] > 0) {
                        q = fclass.clip(h, mean[cell]);
                        out.visited[((static_cast<std::size_t>(i) * horizon + h) * n_states +
                                     s) * n_actions +
                                    a] = 1;
                    } else {
                        ++out.unvisited_count;
                    }
                    out.q.at(i, h, s, a) = q;
                    const double p = pi_t.at(grid, h, s, a);
                    if (p > 0.0) v += p * (q - lambda * std::log(p));
                }
                v_next[s] = v;  // safe: v_next[s] is not read again at this h
            }
        }
    }
    return out;
}

QProfile assign_estimates(const QProfile& q_sampled, int n_total) {
    const int n_sampled = q_sampled.n_agents;
    if (n_total < n_sampled) throw ValidationError("assign_estimates: n_total < n_sampled");
    if (n_total % n_sampled != 0)
        throw ValidationError("assign_estimates: n_sampled must divide n_total");
    if (n_total == n_sampled) return q_sampled;

    QProfile out(n_total, q_sampled.horizon, q_sampled.n_states, q_sampled.n_actions);
    const std::size_t stride =
        static_cast<std::size_t>(q_sampled.horizon) * q_sampled.n_states * q_sampled.n_actions;
    for (int j = 0; j < n_total; ++j) {
        // Grid agent alpha = (j+1)/n_total belongs to sampled block
        // ceil((j+1) * n_sampled / n_total), computed in exact integers.
        const int block = static_cast<int>(
            (static_cast<long long>(j + 1) * n_sampled + n_total - 1) / n_total);
        std::copy_n(q_sampled.q.data() + static_cast<std::size_t>(block - 1) * stride, stride,
                    out.q.data() + static_cast<std::size_t>(j) * stride);
    }
    return out;
}

void dump_episode_batch(const EpisodeBatch& batch, const GameSpec& game, std::ostream& out) {
    std::string line = "i,tau,h,s,a,r,s_next\n";
    out << line;
    for (int i = 0; i < batch.n_sampled; ++i) {
        for (int tau = 0; tau < batch.episodes; ++tau) {
            for (int h = 0; h < batch.horizon; ++h) {
                const TransitionRecord& rec = batch.at(i, tau, h);
                line.clear();
                line += std::to_string(i + 1);
                line += ',';
                line += std::to_string(tau + 1);
                line += ',';
                line += std::to_string(h + 1);
                line += ',';
                line += std::to_string(rec.s + 1);
                line += ',';
                line += std::to_string(game.actions[rec.a]);
                line += ',';
                append_double(line, rec.r);
                line += ',';
                line += std::to_string(rec.s_next + 1);
                line += '\n';
                out << line;
            }
        }
    }
}

}  // namespace gmfg
