#pragma once

// First-order differential calculus on a directed graph over a scalar field:
// functions on vertices, one-forms on arrows, Ω¹⊗_A Ω¹ on composable pairs,
// the metric inner product given by per-arrow weights and bimodule
// connections given by their values on the basis one-forms.

#include "qgeom/errors.hpp"
#include "qgeom/graph.hpp"
#include "qgeom/linear_solve.hpp"
#include "qgeom/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace qgeom {

namespace detail {

template <class T>
void check_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw GraphError(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                         std::to_string(want));
    }
}

}  // namespace detail

template <class T>
struct VertexFunction {
    std::vector<T> values;

    VertexFunction() = default;
    explicit VertexFunction(std::size_t n, T fill = Field<T>::zero()) : values(n, fill) {}
    explicit VertexFunction(std::vector<T> v) : values(std::move(v)) {}

    static VertexFunction delta(std::size_t n, std::size_t x) {
        VertexFunction f(n);
        f.values[x] = Field<T>::one();
        return f;
    }

    std::size_t size() const { return values.size(); }
    T& operator[](std::size_t x) { return values[x]; }
    const T& operator[](std::size_t x) const { return values[x]; }

    friend VertexFunction operator+(VertexFunction a, const VertexFunction& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += b.values[i];
        return a;
    }
    friend VertexFunction operator-(VertexFunction a, const VertexFunction& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= b.values[i];
        return a;
    }
    /// Pointwise product.
    friend VertexFunction operator*(VertexFunction a, const VertexFunction& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.values[i] = a.values[i] * b.values[i];
        return a;
    }
    friend VertexFunction operator*(const T& c, VertexFunction a) {
        for (auto& v : a.values) v = c * v;
        return a;
    }
};

template <class T>
struct OneForm {
    std::vector<T> coeffs;

    OneForm() = default;
    explicit OneForm(std::size_t m, T fill = Field<T>::zero()) : coeffs(m, fill) {}
    explicit OneForm(std::vector<T> c) : coeffs(std::move(c)) {}

    static OneForm basis(std::size_t m, std::size_t a) {
        OneForm w(m);
        w.coeffs[a] = Field<T>::one();
        return w;
    }

    std::size_t size() const { return coeffs.size(); }
    T& operator[](std::size_t a) { return coeffs[a]; }
    const T& operator[](std::size_t a) const { return coeffs[a]; }

    friend OneForm operator+(OneForm a, const OneForm& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] += b.coeffs[i];
        return a;
    }
    friend OneForm operator-(OneForm a, const OneForm& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] -= b.coeffs[i];
        return a;
    }
    friend OneForm operator*(const T& c, OneForm a) {
        for (auto& v : a.coeffs) v = c * v;
        return a;
    }
};

/// Element of Ω¹⊗_A Ω¹, one coefficient per composable pair of the graph.
template <class T>
struct TensorSquare {
    std::vector<T> coeffs;

    TensorSquare() = default;
    explicit TensorSquare(std::size_t pairs) : coeffs(pairs, Field<T>::zero()) {}

    std::size_t size() const { return coeffs.size(); }
    T& operator[](std::size_t p) { return coeffs[p]; }
    const T& operator[](std::size_t p) const { return coeffs[p]; }

    friend TensorSquare operator+(TensorSquare a, const TensorSquare& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] += b.coeffs[i];
        return a;
    }
    friend TensorSquare operator-(TensorSquare a, const TensorSquare& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] -= b.coeffs[i];
        return a;
    }
    friend TensorSquare operator*(const T& c, TensorSquare a) {
        for (auto& v : a.coeffs) v = c * v;
        return a;
    }
};

/// Element of Ω¹⊗_A Ω¹⊗_A Ω¹ keyed by composable arrow triples; only nonzero
/// entries are stored.
template <class T>
using TripleTensor = std::map<std::array<std::size_t, 3>, T>;

/// Per-arrow weights p_{x→y} of the metric inner product
/// (ω_{x→y}, ω_{y→x}) = p_{y→x} δ_x. Zero weights are allowed.
template <class T>
struct MetricWeights {
    std::vector<T> weight;
    bool stochastic = false;

    MetricWeights() = default;
    explicit MetricWeights(std::vector<T> w, bool is_stochastic = false)
        : weight(std::move(w)), stochastic(is_stochastic) {}

    const T& operator[](std::size_t a) const { return weight[a]; }
    std::size_t size() const { return weight.size(); }
};

template <class To, class From>
MetricWeights<To> convert_weights(const MetricWeights<From>& w) {
    MetricWeights<To> out;
    out.stochastic = w.stochastic;
    out.weight.reserve(w.size());
    for (const auto& v : w.weight) out.weight.push_back(To(v));
    return out;
}

/// Values ∇ω_a of a left connection on the basis one-forms.
template <class T>
struct GraphConnection {
    std::vector<TensorSquare<T>> basis_values;
};

/// Generalized braiding on composable pairs. Row p lists (target pair,
/// coefficient); every target has the same endpoints as p.
template <class T>
struct SigmaMap {
    std::vector<std::vector<std::pair<std::size_t, T>>> rows;
};

template <class T>
struct SigmaOutcome {
    SolveStatus status = SolveStatus::Inconsistent;
    SigmaMap<T> sigma;
    bool ok() const { return status == SolveStatus::Unique; }
};

/// Largest coefficient magnitude and whether every coefficient vanishes
/// (exactly for exact fields, within eps otherwise).
struct Residual {
    double max_abs = 0.0;
    bool vanishes = true;
};

template <class T, class Range>
Residual residual_of(const Range& values, double eps) {
    Residual r;
    for (const T& v : values) {
        r.max_abs = std::max(r.max_abs, Field<T>::magnitude(v));
        if (!Field<T>::is_zero(v, eps)) r.vanishes = false;
    }
    return r;
}

template <class T>
Residual residual_of(const TripleTensor<T>& t, double eps) {
    Residual r;
    for (const auto& [key, v] : t) {
        r.max_abs = std::max(r.max_abs, Field<T>::magnitude(v));
        if (!Field<T>::is_zero(v, eps)) r.vanishes = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Functions and one-forms

/// df = Σ_{x→y} (f(y) − f(x)) ω_{x→y}.
template <class T>
OneForm<T> differential(const GraphCalculus& calc, const VertexFunction<T>& f) {
    detail::check_size<T>(f.size(), calc.vertex_count(), "vertex function");
    OneForm<T> df(calc.arrow_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& e = calc.arrow(a);
        df[a] = f[e.head] - f[e.tail];
    }
    return df;
}

/// θ = Σ ω_{x→y}.
template <class T>
OneForm<T> theta(const GraphCalculus& calc) {
    return OneForm<T>(calc.arrow_count(), Field<T>::one());
}

enum class Side { Left, Right };

/// f.ω multiplies each coefficient by f(tail); ω.f by f(head).
template <class T>
OneForm<T> module_action(const GraphCalculus& calc, Side side, const VertexFunction<T>& f,
                         OneForm<T> w) {
    detail::check_size<T>(w.size(), calc.arrow_count(), "one-form");
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& e = calc.arrow(a);
        w[a] = (side == Side::Left) ? f[e.tail] * w[a] : w[a] * f[e.head];
    }
    return w;
}

template <class T>
OneForm<T> left_action(const GraphCalculus& calc, const VertexFunction<T>& f, const OneForm<T>& w) {
    return module_action(calc, Side::Left, f, w);
}

template <class T>
OneForm<T> right_action(const GraphCalculus& calc, const OneForm<T>& w, const VertexFunction<T>& f) {
    return module_action(calc, Side::Right, f, w);
}

/// (ω, η)(x) = Σ_{y: x→y} c_ω(x→y) c_η(y→x) p_{y→x}.
template <class T>
VertexFunction<T> inner_product(const GraphCalculus& calc, const MetricWeights<T>& w,
                                const OneForm<T>& omega, const OneForm<T>& eta) {
    calc.require_bidirected("inner_product");
    detail::check_size<T>(w.size(), calc.arrow_count(), "metric weights");
    VertexFunction<T> out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t r = calc.reverse(a);
        out[calc.arrow(a).tail] += omega[a] * eta[r] * w[r];
    }
    return out;
}

/// −Δ_θ f = (df, θ), i.e. (−Δ_θ f)(x) = Σ_{y: x→y} (f(y) − f(x)) p_{y→x}.
/// Returns Δ_θ f.
template <class T>
VertexFunction<T> laplacian_theta(const GraphCalculus& calc, const MetricWeights<T>& w,
                                  const VertexFunction<T>& f) {
    calc.require_bidirected("laplacian_theta");
    VertexFunction<T> out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& e = calc.arrow(a);
        out[e.tail] -= (f[e.head] - f[e.tail]) * w[calc.reverse(a)];
    }
    return out;
}

/// ∇_θ·ω = (θ, ω).
template <class T>
VertexFunction<T> divergence_theta(const GraphCalculus& calc, const MetricWeights<T>& w,
                                   const OneForm<T>& omega) {
    calc.require_bidirected("divergence_theta");
    VertexFunction<T> out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t r = calc.reverse(a);
        out[calc.arrow(a).tail] += omega[r] * w[r];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ω¹⊗_A Ω¹

/// ω ⊗_A η; pairs that are not composable vanish.
template <class T>
TensorSquare<T> tensor(const GraphCalculus& calc, const OneForm<T>& omega, const OneForm<T>& eta) {
    TensorSquare<T> out(calc.pair_count());
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        const ArrowPair& ab = calc.pair(p);
        out[p] = omega[ab.first] * eta[ab.second];
    }
    return out;
}

template <class T>
TensorSquare<T> left_action(const GraphCalculus& calc, const VertexFunction<T>& f, TensorSquare<T> x) {
    for (std::size_t p = 0; p < calc.pair_count(); ++p) x[p] = f[calc.pair_tail(p)] * x[p];
    return x;
}

template <class T>
TensorSquare<T> right_action(const GraphCalculus& calc, TensorSquare<T> x, const VertexFunction<T>& f) {
    for (std::size_t p = 0; p < calc.pair_count(); ++p) x[p] = x[p] * f[calc.pair_head(p)];
    return x;
}

/// ( , ) applied to Ω¹⊗_A Ω¹ → A.
template <class T>
VertexFunction<T> contract(const GraphCalculus& calc, const MetricWeights<T>& w, const TensorSquare<T>& x) {
    calc.require_bidirected("contract");
    VertexFunction<T> out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t r = calc.reverse(a);
        const std::size_t p = calc.pair_index(a, r);
        out[calc.arrow(a).tail] += x[p] * w[r];
    }
    return out;
}

/// ((ω, )⊗id) x.
template <class T>
OneForm<T> contract_first(const GraphCalculus& calc, const MetricWeights<T>& w, const OneForm<T>& omega,
                          const TensorSquare<T>& x) {
    OneForm<T> out(calc.arrow_count());
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        const ArrowPair& ab = calc.pair(p);
        const std::size_t b = calc.reverse(ab.first);
        if (b == GraphCalculus::npos) continue;
        out[ab.second] += omega[b] * x[p] * w[ab.first];
    }
    return out;
}

/// (id⊗( , ω)) x.
template <class T>
OneForm<T> contract_second(const GraphCalculus& calc, const MetricWeights<T>& w, const TensorSquare<T>& x,
                           const OneForm<T>& omega) {
    OneForm<T> out(calc.arrow_count());
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        const ArrowPair& ab = calc.pair(p);
        const std::size_t b = calc.reverse(ab.second);
        if (b == GraphCalculus::npos) continue;
        out[ab.first] += x[p] * w[b] * omega[b];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Connections

/// θ ⊗ ω_a, the part of ∇ω_a that the left Leibniz rule forces.
template <class T>
TensorSquare<T> theta_tensor_basis(const GraphCalculus& calc, std::size_t a) {
    TensorSquare<T> out(calc.pair_count());
    for (std::size_t b : calc.in_arrows(calc.arrow(a).tail)) out[calc.pair_index(b, a)] = Field<T>::one();
    return out;
}

/// The canonical connection ∇_θ ω = θ ⊗ ω.
template <class T>
GraphConnection<T> canonical_connection(const GraphCalculus& calc) {
    GraphConnection<T> g;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) g.basis_values.push_back(theta_tensor_basis<T>(calc, a));
    return g;
}

/// Largest deviation of the basis values from the left Leibniz constraint
/// (1 − δ_x)∇ω_a = dδ_x ⊗ ω_a with x = tail(a). Components on pairs starting
/// at x are free; everything else must equal θ ⊗ ω_a.
template <class T>
Residual leibniz_defect(const GraphCalculus& calc, const GraphConnection<T>& conn, double eps = kDefaultEps) {
    detail::check_size<T>(conn.basis_values.size(), calc.arrow_count(), "connection");
    std::vector<T> defects;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const TensorSquare<T> forced = theta_tensor_basis<T>(calc, a);
        const std::size_t x = calc.arrow(a).tail;
        for (std::size_t p = 0; p < calc.pair_count(); ++p) {
            if (calc.pair_tail(p) == x) continue;
            defects.push_back(conn.basis_values[a][p] - forced[p]);
        }
    }
    return residual_of<T>(defects, eps);
}

/// Builds ∇ω_a = θ⊗ω_a + free[a]; free[a] may only involve pairs that start
/// at tail(a).
template <class T>
GraphConnection<T> connection_from_free_part(const GraphCalculus& calc, const std::vector<TensorSquare<T>>& free) {
    detail::check_size<T>(free.size(), calc.arrow_count(), "free part");
    GraphConnection<T> g;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        detail::check_size<T>(free[a].size(), calc.pair_count(), "free tensor");
        for (std::size_t p = 0; p < calc.pair_count(); ++p) {
            if (calc.pair_tail(p) != calc.arrow(a).tail && !Field<T>::is_zero(free[a][p], 0.0)) {
                throw ValidationError("free part of connection on arrow " + std::to_string(a) +
                                      " leaves the tail vertex");
            }
        }
        g.basis_values.push_back(theta_tensor_basis<T>(calc, a) + free[a]);
    }
    return g;
}

/// Accepts explicit basis values after checking the left Leibniz rule.
template <class T>
GraphConnection<T> make_connection(const GraphCalculus& calc, std::vector<TensorSquare<T>> values,
                                   double eps = kDefaultEps) {
    GraphConnection<T> g{std::move(values)};
    if (!leibniz_defect(calc, g, eps).vanishes) {
        throw ValidationError("basis values violate the left Leibniz rule");
    }
    return g;
}

/// The 2-point family ∇θ = (1 − b)θ⊗θ with b(0) = s, b(1) = t:
/// ∇ω_{0→1} = ω_{1→0}⊗ω_{0→1} − s ω_{0→1}⊗ω_{1→0},
/// ∇ω_{1→0} = ω_{0→1}⊗ω_{1→0} − t ω_{1→0}⊗ω_{0→1}.
template <class T>
GraphConnection<T> two_state_connection(const GraphCalculus& calc, const T& s, const T& t) {
    if (calc.vertex_count() != 2 || calc.arrow_count() != 2) {
        throw GraphError("two_state_connection needs the 2-point graph");
    }
    const std::size_t a01 = *calc.find_arrow(0, 1);
    const std::size_t a10 = *calc.find_arrow(1, 0);
    std::vector<TensorSquare<T>> free(2, TensorSquare<T>(calc.pair_count()));
    free[a01][calc.pair_index(a01, a10)] = -s;
    free[a10][calc.pair_index(a10, a01)] = -t;
    return connection_from_free_part(calc, free);
}

/// ∇(Σ c_a ω_a) = Σ c_a ∇ω_a for constant coefficients; function
/// coefficients are already absorbed since ω_a = δ_{tail a} ω_a.
template <class T>
TensorSquare<T> connection_apply(const GraphCalculus& calc, const GraphConnection<T>& conn, const OneForm<T>& w) {
    detail::check_size<T>(w.size(), calc.arrow_count(), "one-form");
    TensorSquare<T> out(calc.pair_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        if (Field<T>::is_zero(w[a], 0.0)) continue;
        const auto& v = conn.basis_values[a];
        for (std::size_t p = 0; p < calc.pair_count(); ++p) out[p] += w[a] * v[p];
    }
    return out;
}

template <class T>
TensorSquare<T> sigma_apply(const GraphCalculus& calc, const SigmaMap<T>& sigma, const TensorSquare<T>& x) {
    TensorSquare<T> out(calc.pair_count());
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        if (Field<T>::is_zero(x[p], 0.0)) continue;
        for (const auto& [q, c] : sigma.rows[p]) out[q] += x[p] * c;
    }
    return out;
}

/// Solves σ(ω_a ⊗ dδ_z) = ∇(ω_a δ_z) − (∇ω_a)δ_z for all arrows a and
/// vertices z. The system splits into one block per arrow a whose unknowns
/// are σ(ω_a⊗ω_b) expanded on pairs sharing endpoints. With shuffle_seed set
/// the equation rows are permuted before elimination.
template <class T>
SigmaOutcome<T> sigma_solve(const GraphCalculus& calc, const GraphConnection<T>& conn, double eps = kDefaultEps,
                            std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
    using F = Field<T>;
    detail::check_size<T>(conn.basis_values.size(), calc.arrow_count(), "connection");
    const std::size_t n = calc.vertex_count();
    SigmaOutcome<T> result;
    result.sigma.rows.assign(calc.pair_count(), {});
    std::mt19937_64 rng(shuffle_seed.value_or(0));

    // Pairs by (tail, head) endpoints.
    std::vector<std::vector<std::size_t>> by_ends(n * n);
    for (std::size_t p = 0; p < calc.pair_count(); ++p) by_ends[calc.pair_tail(p) * n + calc.pair_head(p)].push_back(p);

    bool underdetermined = false;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& ea = calc.arrow(a);
        const TensorSquare<T>& va = conn.basis_values[a];

        // Unknowns: (source pair (a,b), target q) with q sharing endpoints.
        std::vector<std::pair<std::size_t, std::size_t>> unknowns;
        for (std::size_t b : calc.out_arrows(ea.head)) {
            const std::size_t p = calc.pair_index(a, b);
            for (std::size_t q : by_ends[ea.tail * n + calc.arrow(b).head]) unknowns.push_back({p, q});
        }
        // Equations: one per (z, target pair q). Pairs not starting at tail(a)
        // only matter when ∇ω_a touches them.
        std::vector<std::size_t> targets;
        for (std::size_t q = 0; q < calc.pair_count(); ++q)
            if (calc.pair_tail(q) == ea.tail || !F::is_zero(va[q], 0.0)) targets.push_back(q);

        std::vector<std::pair<std::size_t, std::size_t>> rows;
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t q : targets) rows.push_back({z, q});
        if (shuffle_seed) std::shuffle(rows.begin(), rows.end(), rng);

        DenseMatrix<T> m(rows.size(), unknowns.size());
        std::vector<T> rhs(rows.size(), F::zero());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto [z, q] = rows[r];
            // ω_a ⊗ dδ_z = Σ_b (δ_z(head b) − δ_z(tail b)) ω_a⊗ω_b.
            for (std::size_t u = 0; u < unknowns.size(); ++u) {
                const auto [p, target] = unknowns[u];
                if (target != q) continue;
                const Arrow& eb = calc.arrow(calc.pair(p).second);
                T coeff = F::zero();
                if (eb.head == z) coeff += F::one();
                if (eb.tail == z) coeff -= F::one();
                m(r, u) = coeff;
            }
            // ∇(ω_a δ_z) − (∇ω_a) δ_z.
            T value = F::zero();
            if (ea.head == z) value += va[q];
            if (calc.pair_head(q) == z) value -= va[q];
            rhs[r] = value;
        }
        auto sol = solve_linear(std::move(m), std::move(rhs), eps);
        if (sol.status == SolveStatus::Inconsistent) {
            result.status = SolveStatus::Inconsistent;
            return result;
        }
        if (sol.status == SolveStatus::Underdetermined) {
            underdetermined = true;
            continue;
        }
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            if (F::is_zero(sol.x[u], 0.0)) continue;
            result.sigma.rows[unknowns[u].first].push_back({unknowns[u].second, sol.x[u]});
        }
    }
    result.status = underdetermined ? SolveStatus::Underdetermined : SolveStatus::Unique;
    return result;
}

template <class T>
SigmaMap<T> require_sigma(const GraphCalculus& calc, const GraphConnection<T>& conn, double eps) {
    auto outcome = sigma_solve(calc, conn, eps);
    if (!outcome.ok()) throw SigmaError(outcome.status, "graph connection is not a bimodule connection");
    return std::move(outcome.sigma);
}

/// Δf = ( , )∇df.
template <class T>
VertexFunction<T> connection_laplacian(const GraphCalculus& calc, const GraphConnection<T>& conn,
                                       const MetricWeights<T>& w, const VertexFunction<T>& f) {
    return contract(calc, w, connection_apply(calc, conn, differential(calc, f)));
}

/// ∇·ω = ( , )∇ω.
template <class T>
VertexFunction<T> connection_divergence(const GraphCalculus& calc, const GraphConnection<T>& conn,
                                        const MetricWeights<T>& w, const OneForm<T>& omega) {
    return contract(calc, w, connection_apply(calc, conn, omega));
}

/// The metric element g = Σ_a p_a^{-1} ω_a ⊗ ω_ā over the arrows whose weight
/// and reverse weight are both nonzero. An arrow with exactly one of the two
/// weights zero has no inverse pairing and is rejected.
template <class T>
TensorSquare<T> metric_element(const GraphCalculus& calc, const MetricWeights<T>& w) {
    calc.require_bidirected("metric_element");
    TensorSquare<T> g(calc.pair_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t r = calc.reverse(a);
        const bool za = Field<T>::is_zero(w[a], 0.0);
        const bool zr = Field<T>::is_zero(w[r], 0.0);
        if (za && zr) continue;
        if (za || zr) {
            throw ValidationError("zero weight on support arrow " + calc.labels()[calc.arrow(a).tail] + "->" +
                                  calc.labels()[calc.arrow(a).head]);
        }
        g[calc.pair_index(a, r)] = Field<T>::one() / w[a];
    }
    return g;
}

/// ∇(ω⊗η) = ∇ω⊗η + (σ⊗id)(ω⊗∇η), extended linearly over constant
/// coefficients.
template <class T>
TripleTensor<T> nabla_tensor(const GraphCalculus& calc, const GraphConnection<T>& conn, const SigmaMap<T>& sigma,
                             const TensorSquare<T>& x) {
    TripleTensor<T> out;
    auto add = [&out](std::size_t i, std::size_t j, std::size_t k, const T& v) {
        auto [it, inserted] = out.try_emplace({i, j, k}, v);
        if (!inserted) it->second += v;
    };
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        if (Field<T>::is_zero(x[p], 0.0)) continue;
        const auto [a, b] = calc.pair(p);
        const auto& va = conn.basis_values[a];
        for (std::size_t q = 0; q < calc.pair_count(); ++q) {
            if (Field<T>::is_zero(va[q], 0.0)) continue;
            const auto [u, v] = calc.pair(q);
            if (calc.arrow(v).head == calc.arrow(b).tail) add(u, v, b, x[p] * va[q]);
        }
        const auto& vb = conn.basis_values[b];
        for (std::size_t q = 0; q < calc.pair_count(); ++q) {
            if (Field<T>::is_zero(vb[q], 0.0)) continue;
            const auto [u, v] = calc.pair(q);
            const std::size_t au = calc.pair_index(a, u);
            if (au == GraphCalculus::npos) continue;
            for (const auto& [target, c] : sigma.rows[au]) {
                const auto [m1, m2] = calc.pair(target);
                add(m1, m2, v, x[p] * vb[q] * c);
            }
        }
    }
    return out;
}

/// Norm of ∇g for the metric element of the weights.
template <class T>
Residual metric_compat_residual(const GraphCalculus& calc, const GraphConnection<T>& conn, const MetricWeights<T>& w,
                                double eps = kDefaultEps) {
    const TensorSquare<T> g = metric_element(calc, w);
    const SigmaMap<T> sigma = require_sigma(calc, conn, eps);
    return residual_of(nabla_tensor(calc, conn, sigma, g), eps);
}

/// Checks ((ω_b, )⊗id)g = ω_b = (id⊗( , ω_b))g for every arrow b of the
/// support subgraph.
template <class T>
Residual metric_inversion_residual(const GraphCalculus& calc, const MetricWeights<T>& w, double eps = kDefaultEps) {
    const TensorSquare<T> g = metric_element(calc, w);
    std::vector<T> diffs;
    for (std::size_t b = 0; b < calc.arrow_count(); ++b) {
        if (Field<T>::is_zero(w[b], 0.0)) continue;
        const OneForm<T> basis = OneForm<T>::basis(calc.arrow_count(), b);
        const OneForm<T> l = contract_first(calc, w, basis, g) - basis;
        const OneForm<T> r = contract_second(calc, w, g, basis) - basis;
        diffs.insert(diffs.end(), l.coeffs.begin(), l.coeffs.end());
        diffs.insert(diffs.end(), r.coeffs.begin(), r.coeffs.end());
    }
    return residual_of<T>(diffs, eps);
}

/// (ω⊗η)† = η*⊗ω* with ω_{x→y}* = −ω_{y→x}; conjugates coefficients.
template <class T>
TensorSquare<T> dagger(const GraphCalculus& calc, const TensorSquare<T>& x) {
    calc.require_bidirected("dagger");
    TensorSquare<T> out(calc.pair_count());
    for (std::size_t p = 0; p < calc.pair_count(); ++p) {
        const auto [a, b] = calc.pair(p);
        // (−1)(−1) from the two starred basis forms.
        out[calc.pair_index(calc.reverse(b), calc.reverse(a))] += Field<T>::conj(x[p]);
    }
    return out;
}

/// ∇∘* = σ∘†∘∇ on every basis one-form: −∇ω_ā = σ((∇ω_a)†).
template <class T>
bool star_preserving_check(const GraphCalculus& calc, const GraphConnection<T>& conn, double eps = kDefaultEps) {
    const SigmaMap<T> sigma = require_sigma(calc, conn, eps);
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const TensorSquare<T> lhs = Field<T>::from_int(-1) * conn.basis_values[calc.reverse(a)];
        const TensorSquare<T> rhs = sigma_apply(calc, sigma, dagger(calc, conn.basis_values[a]));
        if (!residual_of<T>((lhs - rhs).coeffs, eps).vanishes) return false;
    }
    return true;
}

/// Largest violation of the defining relation of σ, for checking a returned map.
template <class T>
Residual sigma_relation_residual(const GraphCalculus& calc, const GraphConnection<T>& conn, const SigmaMap<T>& sigma,
                                 double eps = kDefaultEps) {
    std::vector<T> diffs;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const OneForm<T> wa = OneForm<T>::basis(calc.arrow_count(), a);
        for (std::size_t z = 0; z < calc.vertex_count(); ++z) {
            const auto dz = VertexFunction<T>::delta(calc.vertex_count(), z);
            const TensorSquare<T> lhs = sigma_apply(calc, sigma, tensor(calc, wa, differential(calc, dz)));
            const TensorSquare<T> rhs = connection_apply(calc, conn, right_action(calc, wa, dz)) -
                                        right_action(calc, conn.basis_values[a], dz);
            const TensorSquare<T> diff = lhs - rhs;
            diffs.insert(diffs.end(), diff.coeffs.begin(), diff.coeffs.end());
        }
    }
    return residual_of<T>(diffs, eps);
}

}  // namespace qgeom
