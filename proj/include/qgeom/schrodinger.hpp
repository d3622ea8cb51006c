#pragma once

// Discrete-time Schrödinger steps ψ ↦ ψ + i(−Δ + V)ψ on a weighted graph,
// either with the canonical Laplacian Δ_θ or with the Laplacian of a given
// bimodule connection, together with probability currents and the solved
// 2-point unitary circle.

#include "qgeom/graph_calculus.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace qgeom::schrodinger {

using Wave = VertexFunction<Complex>;
using RealFunction = VertexFunction<double>;
using Connection = GraphConnection<Complex>;

/// Linear step ψ_new = U ψ.
class StepOperator {
public:
    StepOperator() = default;
    explicit StepOperator(std::size_t n) : n_(n), u_(n * n) {}

    std::size_t size() const { return n_; }
    Complex& operator()(std::size_t r, std::size_t c) { return u_[r * n_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return u_[r * n_ + c]; }

    Wave apply(const Wave& psi) const;
    /// max |(U†U − I)_{ij}|.
    double unitarity_residual() const;
    bool unitary(double eps = kDefaultEps) const { return unitarity_residual() <= eps; }

private:
    std::size_t n_ = 0;
    std::vector<Complex> u_;
};

/// Δψ for the canonical connection (conn == nullptr) or for conn.
Wave laplacian(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn, const Wave& psi);

/// ψ + i(−Δψ + Vψ).
Wave schrodinger_step(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                      const RealFunction& potential, const Wave& psi);

/// Columns are the steps of the delta functions.
StepOperator step_matrix(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                         const RealFunction& potential);

inline bool is_unitary(const StepOperator& u, double eps = kDefaultEps) { return u.unitary(eps); }

/// ψ̃(x) = Σ_{y: x→y} ψ(y) p_{y→x}.
Wave tilde(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi);

struct Currents {
    OneForm<Complex> j;
    OneForm<Complex> j_v;
};

/// J = i((dψ)ψ̄ − (dψ̄)ψ) − ½((dψ)Δ_θψ̄ + (dψ̄)Δ_θψ) and
/// J_V = i((dψ)ψ̄ − (dψ̄)ψ) + (dψ)(−½Δ_θ + V)ψ̄ + (dψ̄)(−½Δ_θ + V)ψ,
/// assembled from the module operations (right actions by functions).
Currents currents(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                  const RealFunction& potential);

/// Per-arrow closed forms for the same currents. The closed forms are written
/// with every function evaluated at the tail of the arrow; the compositional
/// currents satisfy J_{x→y} = −P(y, x) where P(x, y) is the tail-evaluated
/// expression, and that relabelling is applied here.
Currents currents_explicit(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                           const RealFunction& potential);

/// The tail-evaluated expression P(x, y) for every arrow x→y, unreconciled.
Currents currents_tail_formula(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                               const RealFunction& potential);

/// (dψ̄, dψ) by its closed form
/// −Σ f(y)p_{y→x} − f(x)q(x) + Σ (ψ(x)ψ̄(y) + ψ̄(x)ψ(y)) p_{y→x}.
Wave dpsibar_dpsi_explicit(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi);

struct DecompositionResiduals {
    double j_form = 0.0;   // ∂₊f − [V(−Δ_θ+V)f + V(dψ̄,dψ) − ∇_θ·J]
    double jv_form = 0.0;  // ∂₊f − [V²f − ∇_θ·J_V]
    double between = 0.0;  // difference of the two right-hand sides
};

DecompositionResiduals decompose_step_check(const GraphCalculus& calc, const MetricWeights<double>& w,
                                            const RealFunction& potential, const Wave& psi);

/// Σ_X((V−q)²f + (V−q)(ψ̄ψ̃ + ψψ̃̄) + |ψ̃|² + i(ψ̄ψ̃ − ψψ̃̄)).
Complex norm_drift(const GraphCalculus& calc, const MetricWeights<double>& w, const RealFunction& potential,
                   const Wave& psi);

/// Σ_X(|ψ_new|² − |ψ|²) for one step (canonical Laplacian if conn is null).
Complex norm_drift_direct(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                          const RealFunction& potential, const Wave& psi);

/// max |ḟ + ∇_θ·J| for ψ̇ = i(−Δ_θ+V)ψ and J = i((dψ)ψ̄ − (dψ̄)ψ).
double continuous_current_identity(const GraphCalculus& calc, const MetricWeights<double>& w,
                                   const RealFunction& potential, const Wave& psi);

struct TwoStateFamily {
    Complex s;
    Complex t;
    Complex z;  // (1 − e^{iφ})/2
    RealFunction potential;
    Connection connection;
    StepOperator step;  // built from the connection and the weights
};

/// The circle of unitary connections on the 2-point graph, with
/// α = p_{1→0}, β = p_{0→1}.
TwoStateFamily two_state_unitary_family(double alpha, double beta, double phi);

/// e^{iφ/2} [[cos(φ/2), −i sin(φ/2)], [−i sin(φ/2), cos(φ/2)]].
StepOperator two_state_closed_form(double phi);

/// Weights on GraphCalculus::two_point() for α = p_{1→0}, β = p_{0→1}.
MetricWeights<double> two_state_weights(double alpha, double beta);

/// Coefficient c in the source term c·sin(φ)·det(ψ̄⊗ψ)·(1, −1), fixed by
/// expanding |Uψ|².
inline const Complex kSourceCoefficient{0.0, -0.5};

struct FStep {
    std::array<double, 2> markov_part{};
    std::array<double, 2> source_part{};
};

/// Splits |Uψ|² on the unitary circle into a doubly stochastic step of f and
/// the source term.
FStep two_state_f_step(const std::array<Complex, 2>& psi, double phi);

/// max | |Uψ|² − (markov + source) |.
double two_state_f_step_residual(const std::array<Complex, 2>& psi, double phi);

/// Checks ∂₊f = (1/2i)(1 − e^{−iφ})Δf − ∇·J on the circle connection with
/// J = κ det(ψ̄⊗ψ)(ω₀₁ − ω₁₀), κ = −(1/2i)(1 + e^{−iφ}) under the source
/// sign of kSourceCoefficient. Returns max residual.
double two_state_current_residual(double alpha, double beta, double phi, const std::array<Complex, 2>& psi);

/// Indices of grid points whose connection gives a unitary step.
std::vector<std::size_t> unitary_scan(const GraphCalculus& calc, const MetricWeights<double>& w,
                                      const std::function<Connection(std::span<const double>)>& family,
                                      const std::vector<std::vector<double>>& grid, const RealFunction& potential,
                                      double eps = 1e-10);

}  // namespace qgeom::schrodinger
