#include "gmfg/graphon.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace gmfg {

namespace {

constexpr double kBoundaryTol = 1e-12;

void validate_step(const StepGraphon& step) {
    if (const auto* c = std::get_if<ConstantGraphon>(&step)) {
        if (!(c->p >= 0.0 && c->p <= 1.0))
            throw ValidationError("constant graphon: p must lie in [0,1]");
        return;
    }
    if (const auto* e = std::get_if<ExpGraphon>(&step)) {
        if (!(e->theta > 0.0))
            throw ValidationError("exp graphon: theta must be positive");
        return;
    }
    if (const auto* s = std::get_if<SbmGraphon>(&step)) {
        const std::size_t k = s->boundaries.size();
        if (k == 0) throw ValidationError("sbm graphon: no boundaries");
        double prev = 0.0;
        for (double b : s->boundaries) {
            if (!(b > prev)) throw ValidationError("sbm graphon: boundaries must be strictly increasing");
            prev = b;
        }
        if (std::abs(s->boundaries.back() - 1.0) > kBoundaryTol)
            throw ValidationError("sbm graphon: last boundary must equal 1");
        if (s->rates.size() != k)
            throw ValidationError("sbm graphon: rate matrix size must match boundary count");
        for (std::size_t i = 0; i < k; ++i) {
            if (s->rates[i].size() != k)
                throw ValidationError("sbm graphon: rate matrix must be square");
            for (std::size_t j = 0; j < k; ++j) {
                const double r = s->rates[i][j];
                if (!(r >= 0.0 && r <= 1.0))
                    throw ValidationError("sbm graphon: rates must lie in [0,1]");
                if (r != s->rates[j][i])
                    throw ValidationError("sbm graphon: rate matrix must be symmetric");
            }
        }
        return;
    }
    const auto& g = std::get<CustomGridGraphon>(step);
    const std::size_t m = g.values.size();
    if (m == 0) throw ValidationError("custom graphon: empty grid");
    for (std::size_t i = 0; i < m; ++i) {
        if (g.values[i].size() != m)
            throw ValidationError("custom graphon: grid must be square");
        for (std::size_t j = 0; j < m; ++j) {
            const double v = g.values[i][j];
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("custom graphon: entries must lie in [0,1]");
            if (v != g.values[j][i])
                throw ValidationError("custom graphon: grid must be symmetric");
        }
    }
}

// Block index for alpha under cumulative boundaries: block k iff
// alpha in (b_{k-1}, b_k], first interval closed at 0.
std::size_t block_index(double alpha, const std::vector<double>& boundaries) {
    for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
        if (alpha <= boundaries[k]) return k;
    }
    return boundaries.size() - 1;
}

double evaluate_step(const StepGraphon& step, double alpha, double beta) {
    if (const auto* c = std::get_if<ConstantGraphon>(&step)) return c->p;
    if (const auto* e = std::get_if<ExpGraphon>(&step)) {
        const double x = std::exp(e->theta * alpha * beta);
        return 2.0 * x / (1.0 + x) - 1.0;
    }
    if (const auto* s = std::get_if<SbmGraphon>(&step)) {
        return s->rates[block_index(alpha, s->boundaries)][block_index(beta, s->boundaries)];
    }
    const auto& g = std::get<CustomGridGraphon>(step);
    const auto m = static_cast<double>(g.values.size());
    const auto cell = [m](double a) {
        const double k = std::ceil(a * m - kBoundaryTol);
        if (k < 1.0) return std::size_t{0};
        return static_cast<std::size_t>(k) - 1;
    };
    return g.values[cell(alpha)][cell(beta)];
}

}  // namespace

const StepGraphon& GraphonSpec::step(int h) const {
    if (steps.empty()) throw ValidationError("graphon spec: no steps");
    if (h < 1) throw ValidationError("graphon spec: step index must be >= 1");
    if (steps.size() == 1) return steps[0];
    if (static_cast<std::size_t>(h) > steps.size())
        throw ValidationError("graphon spec: step index exceeds spec horizon");
    return steps[static_cast<std::size_t>(h) - 1];
}

void GraphonSpec::validate() const {
    if (steps.empty()) throw ValidationError("graphon spec: no steps");
    for (const auto& s : steps) validate_step(s);
}

double evaluate(const GraphonSpec& spec, int h, double alpha, double beta) {
    spec.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
        throw ValidationError("graphon evaluate: alpha and beta must lie in [0,1]");
    return evaluate_step(spec.step(h), alpha, beta);
}

DiscreteGraphon discretize(const GraphonSpec& spec, int n_agents, int horizon) {
    spec.validate();
    if (n_agents < 1) throw ValidationError("discretize: n_agents must be >= 1");
    if (horizon < 1) throw ValidationError("discretize: horizon must be >= 1");
    if (spec.steps.size() != 1 && spec.steps.size() != static_cast<std::size_t>(horizon))
        throw ValidationError("discretize: step-dependent spec must have one entry per step");

    DiscreteGraphon out;
    out.n_agents = n_agents;
    out.horizon = horizon;
    out.weights.assign(static_cast<std::size_t>(horizon) * n_agents * n_agents, 0.0);
    for (int h = 0; h < horizon; ++h) {
        const StepGraphon& step = spec.step(h + 1);
        for (int i = 0; i < n_agents; ++i) {
            const double ai = static_cast<double>(i + 1) / n_agents;
            for (int j = i; j < n_agents; ++j) {
                const double aj = static_cast<double>(j + 1) / n_agents;
                const double w = evaluate_step(step, ai, aj);
                out.at(h, i, j) = w;
                out.at(h, j, i) = w;
            }
        }
    }
    return out;
}

}  // namespace gmfg
