#pragma once

// Markov chains read off stochastic metric weights, their diffusion form,
// tropical lengths λ = −ln p and Lawvere shortest paths.

#include "qgeom/graph_calculus.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qgeom::markov {

using RealFunction = VertexFunction<double>;
using Weights = MetricWeights<double>;

struct StochasticViolation {
    enum class Kind { NegativeWeight, ExcessOutflow };
    Kind kind;
    std::size_t index;  // arrow for NegativeWeight, vertex for ExcessOutflow
    double value;
    std::string where;
};

struct StochasticReport {
    bool passed = true;
    std::vector<StochasticViolation> violations;
};

/// All weights ≥ 0 and p(x) = Σ_{y: x→y} p_{x→y} ≤ 1 (to within eps).
StochasticReport validate_stochastic(const GraphCalculus& calc, const Weights& w, double eps = kDefaultEps);

/// Right-stochastic matrix P with P_{x,y} = p_{x→y} on arrows and
/// P_{x,x} = 1 − p(x).
class MarkovChain {
public:
    MarkovChain() = default;
    explicit MarkovChain(std::size_t n) : n_(n), p_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t x, std::size_t y) { return p_[x * n_ + y]; }
    double operator()(std::size_t x, std::size_t y) const { return p_[x * n_ + y]; }
    double row_sum(std::size_t x) const;

    MarkovChain operator*(const MarkovChain& o) const;
    MarkovChain power(unsigned n) const;
    static MarkovChain identity(std::size_t n);

private:
    std::size_t n_ = 0;
    std::vector<double> p_;
};

MarkovChain to_transition_matrix(const GraphCalculus& calc, const Weights& w, double eps = kDefaultEps);

/// f_{i+1}(x) = Σ_y f_i(y) P_{y,x}.
RealFunction markov_step(const MarkovChain& chain, const RealFunction& f);

/// f + (−Δ_θ f + (q − p) f).
RealFunction diffusion_step(const GraphCalculus& calc, const Weights& w, const RealFunction& f);

/// p(x) = Σ_{y: x→y} p_{x→y}, q(x) = Σ_{y: x→y} p_{y→x}.
std::pair<RealFunction, RealFunction> p_q(const GraphCalculus& calc, const Weights& w);

struct TropicalLengths {
    std::vector<double> arrow;  // −ln p_{x→y}, +∞ for zero weight
    std::vector<double> self;   // −ln(1 − p(x))
};

TropicalLengths tropicalize(const GraphCalculus& calc, const Weights& w);
Weights detropicalize(const GraphCalculus& calc, const TropicalLengths& lengths);

/// Σ_{y: x→y} e^{−λ_{x→y}} ≤ 1 at every vertex.
bool satisfies_restriction(const GraphCalculus& calc, const TropicalLengths& lengths, double eps = kDefaultEps);

/// Σ over n-step paths x → ... → y of the extended graph (self-steps
/// allowed) of e^{−λ(γ)}, by explicit path enumeration.
double n_step_path_sum(const GraphCalculus& calc, const TropicalLengths& lengths, std::size_t x, std::size_t y,
                       unsigned n);

struct ShortestPath {
    double distance = 0.0;
    std::vector<std::size_t> path;  // empty when unreachable
};

/// Minimum of λ(γ) over paths from x to y. Among optimal paths the one with
/// fewest arrows is chosen, then the lexicographically smallest vertex
/// sequence.
ShortestPath lawvere_shortest(const GraphCalculus& calc, const TropicalLengths& lengths, std::size_t x,
                              std::size_t y);

}  // namespace qgeom::markov
