#pragma once

#include <variant>
#include <vector>

#include "gmfg/errors.hpp"

namespace gmfg {

/// W(alpha, beta) = p for all pairs.
struct ConstantGraphon {
    double p = 0.5;
};

/// Stochastic block model over cumulative population fractions.
/// boundaries must be strictly increasing and end at 1; rates is a symmetric
/// block matrix with entries in [0, 1]. Agent alpha belongs to block k iff
/// alpha in (boundary_{k-1}, boundary_k], with the first interval closed at 0.
struct SbmGraphon {
    std::vector<double> boundaries;
    std::vector<std::vector<double>> rates;
};

/// W_theta(alpha, beta) = 2 exp(theta * alpha * beta) / (1 + exp(theta * alpha * beta)) - 1.
struct ExpGraphon {
    double theta = 3.0;
};

/// Piecewise-constant graphon given by a symmetric M x M grid matrix; cell
/// membership follows the same left-open/right-closed rule as SBM blocks.
struct CustomGridGraphon {
    std::vector<std::vector<double>> values;
};

using StepGraphon = std::variant<ConstantGraphon, SbmGraphon, ExpGraphon, CustomGridGraphon>;

/// A graphon specification, optionally step-dependent. One entry in `steps`
/// means the same graphon at every step h; otherwise one entry per h.
struct GraphonSpec {
    std::vector<StepGraphon> steps;

    GraphonSpec() = default;
    explicit GraphonSpec(StepGraphon step) : steps{std::move(step)} {}

    const StepGraphon& step(int h) const;  // h is 1-based

    /// Throws ValidationError on malformed parameters.
    void validate() const;
};

/// Per-step symmetric N x N interaction weights on the grid alpha_i = i/N.
struct DiscreteGraphon {
    int n_agents = 0;
    int horizon = 0;
    std::vector<double> weights;  // [h][i][j], all indices 0-based

    double at(int h, int i, int j) const {
        return weights[(static_cast<std::size_t>(h) * n_agents + i) * n_agents + j];
    }
    double& at(int h, int i, int j) {
        return weights[(static_cast<std::size_t>(h) * n_agents + i) * n_agents + j];
    }
    /// Grid position of 0-based agent index i.
    double alpha(int i) const { return static_cast<double>(i + 1) / n_agents; }
};

/// W_h(alpha, beta). h is 1-based; alpha, beta must lie in [0, 1].
double evaluate(const GraphonSpec& spec, int h, double alpha, double beta);

/// Realizes the spec on the N-agent grid {i/N}. The result is exactly
/// symmetric: each pair is evaluated once and mirrored.
DiscreteGraphon discretize(const GraphonSpec& spec, int n_agents, int horizon);

}  // namespace gmfg
