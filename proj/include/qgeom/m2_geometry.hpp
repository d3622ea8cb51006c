#pragma once

// Quantum Riemannian geometry of the 2×2 matrices over a scalar field: the
// calculus with central basis s, t (da = [E12,a]s + [E21,a]t), the top form
// V = s∧t, connections, braidings, metrics, torsion, curvature and Ricci.

#include "qgeom/errors.hpp"
#include "qgeom/linear_solve.hpp"
#include "qgeom/scalar.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qgeom::m2 {

/// Row-major 2×2 matrix; entry k is (k/2 + 1, k%2 + 1).
template <class F>
struct M2 {
    std::array<F, 4> m{Field<F>::zero(), Field<F>::zero(), Field<F>::zero(), Field<F>::zero()};

    M2() = default;
    M2(F a, F b, F c, F d) : m{a, b, c, d} {}

    static M2 zero() { return {}; }
    static M2 identity() { return {Field<F>::one(), Field<F>::zero(), Field<F>::zero(), Field<F>::one()}; }
    /// Matrix unit E_ij, 1-based.
    static M2 unit(int i, int j) {
        M2 e;
        e.m[static_cast<std::size_t>((i - 1) * 2 + (j - 1))] = Field<F>::one();
        return e;
    }
    static M2 scalar(const F& c) { return {c, Field<F>::zero(), Field<F>::zero(), c}; }

    F& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }
    const F& operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }

    friend M2 operator+(M2 a, const M2& b) {
        for (std::size_t k = 0; k < 4; ++k) a.m[k] += b.m[k];
        return a;
    }
    friend M2 operator-(M2 a, const M2& b) {
        for (std::size_t k = 0; k < 4; ++k) a.m[k] -= b.m[k];
        return a;
    }
    M2 operator-() const { return M2() - *this; }
    friend M2 operator*(const M2& a, const M2& b) {
        M2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        return r;
    }
    friend M2 operator*(const F& c, M2 a) {
        for (auto& v : a.m) v = c * v;
        return a;
    }
    M2& operator+=(const M2& o) { return *this = *this + o; }
    M2& operator-=(const M2& o) { return *this = *this - o; }
    friend bool operator==(const M2& a, const M2& b) { return a.m == b.m; }

    bool is_zero(double eps = 0.0) const {
        for (const auto& v : m)
            if (!Field<F>::is_zero(v, eps)) return false;
        return true;
    }
    double max_abs() const {
        double r = 0.0;
        for (const auto& v : m) r = std::max(r, Field<F>::magnitude(v));
        return r;
    }
    /// Conjugate transpose.
    M2 star() const { return {Field<F>::conj(m[0]), Field<F>::conj(m[2]), Field<F>::conj(m[1]), Field<F>::conj(m[3])}; }
};

template <class F>
M2<F> commutator(const M2<F>& a, const M2<F>& b) {
    return a * b - b * a;
}

template <class F>
std::ostream& operator<<(std::ostream& os, const M2<F>& a) {
    return os << "[[" << a.m[0] << ", " << a.m[1] << "], [" << a.m[2] << ", " << a.m[3] << "]]";
}

/// Central basis one-forms.
enum Gen : std::size_t { S = 0, T = 1 };

/// ω = c_s s + c_t t.
template <class F>
struct OneForm {
    std::array<M2<F>, 2> c{};
    friend OneForm operator+(OneForm a, const OneForm& b) {
        a.c[0] += b.c[0];
        a.c[1] += b.c[1];
        return a;
    }
    friend OneForm operator-(OneForm a, const OneForm& b) {
        a.c[0] -= b.c[0];
        a.c[1] -= b.c[1];
        return a;
    }
    friend bool operator==(const OneForm&, const OneForm&) = default;
    static OneForm basis(std::size_t e) {
        OneForm w;
        w.c[e] = M2<F>::identity();
        return w;
    }
};

/// Coefficients on e_i⊗e_j at index 2i + j.
template <class F>
struct Tensor {
    std::array<M2<F>, 4> c{};

    M2<F>& at(std::size_t i, std::size_t j) { return c[2 * i + j]; }
    const M2<F>& at(std::size_t i, std::size_t j) const { return c[2 * i + j]; }

    friend Tensor operator+(Tensor a, const Tensor& b) {
        for (std::size_t k = 0; k < 4; ++k) a.c[k] += b.c[k];
        return a;
    }
    friend Tensor operator-(Tensor a, const Tensor& b) {
        for (std::size_t k = 0; k < 4; ++k) a.c[k] -= b.c[k];
        return a;
    }
    /// Left multiplication of every coefficient.
    friend Tensor operator*(const M2<F>& a, Tensor x) {
        for (auto& v : x.c) v = a * v;
        return x;
    }
    friend bool operator==(const Tensor&, const Tensor&) = default;

    bool is_zero(double eps = 0.0) const {
        for (const auto& v : c)
            if (!v.is_zero(eps)) return false;
        return true;
    }
    double max_abs() const {
        double r = 0.0;
        for (const auto& v : c) r = std::max(r, v.max_abs());
        return r;
    }
    /// Σ k_ij e_i⊗e_j with scalar coefficients.
    static Tensor from_scalars(const std::array<F, 4>& k) {
        Tensor x;
        for (std::size_t i = 0; i < 4; ++i) x.c[i] = M2<F>::scalar(k[i]);
        return x;
    }
    static Tensor basis(std::size_t i, std::size_t j) {
        Tensor x;
        x.at(i, j) = M2<F>::identity();
        return x;
    }
};

/// a·V with V = s∧t = t∧s.
template <class F>
struct TwoForm {
    M2<F> v{};
    friend TwoForm operator+(TwoForm a, const TwoForm& b) { return {a.v + b.v}; }
    friend TwoForm operator-(TwoForm a, const TwoForm& b) { return {a.v - b.v}; }
    friend bool operator==(const TwoForm&, const TwoForm&) = default;
};

/// Coefficients on e_i⊗e_j⊗e_k at index 4i + 2j + k.
template <class F>
struct Triple {
    std::array<M2<F>, 8> c{};
    M2<F>& at(std::size_t i, std::size_t j, std::size_t k) { return c[4 * i + 2 * j + k]; }
    const M2<F>& at(std::size_t i, std::size_t j, std::size_t k) const { return c[4 * i + 2 * j + k]; }
    bool is_zero(double eps = 0.0) const {
        for (const auto& v : c)
            if (!v.is_zero(eps)) return false;
        return true;
    }
    double max_abs() const {
        double r = 0.0;
        for (const auto& v : c) r = std::max(r, v.max_abs());
        return r;
    }
};

/// (∇s, ∇t).
template <class F>
struct Connection {
    std::array<Tensor<F>, 2> nabla{};
    friend bool operator==(const Connection&, const Connection&) = default;
};

/// σ(e_p) = Σ_q c[p][q] e_q on the tensor basis; central bases force scalar
/// coefficients.
template <class F>
struct Sigma {
    std::array<std::array<F, 4>, 4> c{};

    static Sigma zero() {
        Sigma s;
        for (auto& row : s.c) row.fill(Field<F>::zero());
        return s;
    }
    static Sigma minus_flip() {
        Sigma s = zero();
        s.c[0][0] = -Field<F>::one();
        s.c[1][2] = -Field<F>::one();
        s.c[2][1] = -Field<F>::one();
        s.c[3][3] = -Field<F>::one();
        return s;
    }
    friend bool operator==(const Sigma&, const Sigma&) = default;
};

template <class F>
struct SigmaOutcome {
    SolveStatus status = SolveStatus::Inconsistent;
    Sigma<F> sigma = Sigma<F>::zero();
    bool ok() const { return status == SolveStatus::Unique; }
};

/// Central metric g = Σ g_ij e_i⊗e_j with (e_i, e_j) = (g⁻¹)_ij.
template <class F>
struct Metric {
    std::array<F, 4> g{};
    std::array<F, 4> ginv{};

    Tensor<F> tensor() const { return Tensor<F>::from_scalars(g); }
};

/// Image of V under a splitting Ω² → Ω¹⊗Ω¹, as scalar coefficients.
template <class F>
struct Lift {
    std::array<F, 4> image{};
};

/// R(e) = Σ_n r[e][n] V⊗e_n.
template <class F>
struct Curvature {
    std::array<std::array<M2<F>, 2>, 2> r{};
    bool is_zero(double eps = 0.0) const {
        for (const auto& row : r)
            for (const auto& v : row)
                if (!v.is_zero(eps)) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Calculus

template <class F>
OneForm<F> theta() {
    return {{M2<F>::unit(1, 2), M2<F>::unit(2, 1)}};
}

/// da = [E12, a]s + [E21, a]t.
template <class F>
OneForm<F> d(const M2<F>& a) {
    return {{commutator(M2<F>::unit(1, 2), a), commutator(M2<F>::unit(2, 1), a)}};
}

/// d(a s + b t) = da∧s + a ds + db∧t + b dt with ds = 2E21 V, dt = 2E12 V.
template <class F>
TwoForm<F> d(const OneForm<F>& w) {
    const F two = Field<F>::from_int(2);
    const M2<F> e12 = M2<F>::unit(1, 2), e21 = M2<F>::unit(2, 1);
    const M2<F>& a = w.c[S];
    const M2<F>& b = w.c[T];
    return {commutator(e21, a) + two * (a * e21) + commutator(e12, b) + two * (b * e12)};
}

/// ∧ on Ω¹⊗Ω¹: s⊗s, t⊗t ↦ 0 and s⊗t, t⊗s ↦ V.
template <class F>
TwoForm<F> wedge(const Tensor<F>& x) {
    return {x.at(S, T) + x.at(T, S)};
}

template <class F>
Tensor<F> tensor(const OneForm<F>& w, const OneForm<F>& e) {
    Tensor<F> x;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) x.at(i, j) = w.c[i] * e.c[j];
    return x;
}

template <class F>
TwoForm<F> wedge(const OneForm<F>& w, const OneForm<F>& e) {
    return wedge(tensor(w, e));
}

/// a·X and X·a coefficientwise (the basis is central).
template <class F>
Tensor<F> right_mul(Tensor<F> x, const M2<F>& a) {
    for (auto& v : x.c) v = v * a;
    return x;
}

// ---------------------------------------------------------------------------
// Connections

/// ∇(a s + b t) = da⊗s + a∇s + db⊗t + b∇t.
template <class F>
Tensor<F> apply(const Connection<F>& conn, const OneForm<F>& w) {
    Tensor<F> out;
    for (std::size_t e = 0; e < 2; ++e) {
        const OneForm<F> da = d(w.c[e]);
        for (std::size_t k = 0; k < 2; ++k) out.at(k, e) += da.c[k];
        out = out + w.c[e] * conn.nabla[e];
    }
    return out;
}

/// ∧∇e − de for e = s, t.
template <class F>
std::array<TwoForm<F>, 2> torsion(const Connection<F>& conn) {
    std::array<TwoForm<F>, 2> out;
    for (std::size_t e = 0; e < 2; ++e) out[e] = wedge(conn.nabla[e]) - d(OneForm<F>::basis(e));
    return out;
}

template <class F>
bool torsion_free(const Connection<F>& conn, double eps = 0.0) {
    for (const auto& t : torsion(conn))
        if (!t.v.is_zero(eps)) return false;
    return true;
}

template <class F>
Tensor<F> sigma_apply(const Sigma<F>& sigma, const Tensor<F>& x) {
    Tensor<F> out;
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            if (!Field<F>::is_zero(sigma.c[p][q], 0.0)) out.c[q] += sigma.c[p][q] * x.c[p];
    return out;
}

/// σ(e⊗da) − (∇(ea) − (∇e)a) over e ∈ {s,t}, a ∈ {E_ij}, coefficientwise.
template <class F>
double sigma_relation_residual(const Connection<F>& conn, const Sigma<F>& sigma) {
    double worst = 0.0;
    for (std::size_t e = 0; e < 2; ++e) {
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                const M2<F> a = M2<F>::unit(i, j);
                OneForm<F> ea;
                ea.c[e] = a;
                const Tensor<F> rhs = apply(conn, ea) - right_mul(conn.nabla[e], a);
                const Tensor<F> lhs = sigma_apply(sigma, tensor(OneForm<F>::basis(e), d(a)));
                worst = std::max(worst, (lhs - rhs).max_abs());
            }
        }
    }
    return worst;
}

/// The linear system for σ: 16 scalar unknowns c[p][q] at column 4p + q and
/// 128 scalar equations, one per (e ∈ {s,t}, matrix unit a, target pair,
/// matrix entry), from σ(e⊗da) = ∇(ea) − (∇e)a.
template <class F>
struct SigmaSystem {
    DenseMatrix<F> matrix;
    std::vector<F> rhs;
};

template <class F>
SigmaSystem<F> sigma_system(const Connection<F>& conn) {
    SigmaSystem<F> sys{DenseMatrix<F>(128, 16), std::vector<F>(128, Field<F>::zero())};
    std::size_t row = 0;
    for (std::size_t e = 0; e < 2; ++e) {
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                const M2<F> unit = M2<F>::unit(i, j);
                OneForm<F> eu;
                eu.c[e] = unit;
                const Tensor<F> rhs = apply(conn, eu) - right_mul(conn.nabla[e], unit);
                const OneForm<F> du = d(unit);
                // σ(e⊗du) = Σ_k du_k Σ_q c[(e,k)][q] e_q.
                for (std::size_t q = 0; q < 4; ++q) {
                    for (std::size_t entry = 0; entry < 4; ++entry, ++row) {
                        for (std::size_t k = 0; k < 2; ++k) sys.matrix(row, (2 * e + k) * 4 + q) = du.c[k].m[entry];
                        sys.rhs[row] = rhs.c[q].m[entry];
                    }
                }
            }
        }
    }
    return sys;
}

template <class F>
SigmaOutcome<F> sigma_solve(const Connection<F>& conn, double eps = kDefaultEps) {
    SigmaSystem<F> sys = sigma_system(conn);
    auto sol = solve_linear(std::move(sys.matrix), std::move(sys.rhs), eps);
    SigmaOutcome<F> out;
    out.status = sol.status;
    if (sol.status == SolveStatus::Unique) {
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t q = 0; q < 4; ++q) out.sigma.c[p][q] = sol.x[p * 4 + q];
    }
    return out;
}

template <class F>
Sigma<F> require_sigma(const Connection<F>& conn, double eps = kDefaultEps) {
    auto outcome = sigma_solve(conn, eps);
    if (!outcome.ok()) throw SigmaError(outcome.status, "M2 connection is not a bimodule connection");
    return outcome.sigma;
}

/// ∇(a e_i⊗e_j) = da⊗e_i⊗e_j + a∇e_i⊗e_j + a(σ⊗id)(e_i⊗∇e_j).
template <class F>
Triple<F> nabla_tensor(const Connection<F>& conn, const Sigma<F>& sigma, const Tensor<F>& x) {
    Triple<F> out;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const M2<F>& a = x.at(i, j);
            if (a.is_zero()) continue;
            const OneForm<F> da = d(a);
            for (std::size_t k = 0; k < 2; ++k) out.at(k, i, j) += da.c[k];
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out.at(k, l, j) += a * conn.nabla[i].at(k, l);
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    const M2<F> coeff = a * conn.nabla[j].at(k, l);
                    if (coeff.is_zero()) continue;
                    for (std::size_t q = 0; q < 4; ++q) {
                        const F& c = sigma.c[2 * i + k][q];
                        if (!Field<F>::is_zero(c, 0.0)) out.at(q / 2, q % 2, l) += c * coeff;
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics and lifts

/// Validates invertibility and computes the inverse pairing.
template <class F>
Metric<F> make_metric(const std::array<F, 4>& g) {
    const F det = g[0] * g[3] - g[1] * g[2];
    if (Field<F>::is_zero(det, 0.0)) throw ValidationError("metric coefficients are singular");
    const F inv = Field<F>::one() / det;
    Metric<F> out;
    out.g = g;
    out.ginv = {g[3] * inv, -g[1] * inv, -g[2] * inv, g[0] * inv};
    return out;
}

/// g₁ = s⊗t − t⊗s.
template <class F>
Metric<F> metric_g1() {
    return make_metric<F>({Field<F>::zero(), Field<F>::one(), -Field<F>::one(), Field<F>::zero()});
}

/// g₂ = s⊗s + t⊗t.
template <class F>
Metric<F> metric_g2() {
    return make_metric<F>({Field<F>::one(), Field<F>::zero(), Field<F>::zero(), Field<F>::one()});
}

template <class F>
Triple<F> nabla_metric(const Connection<F>& conn, const Metric<F>& g, double eps = kDefaultEps) {
    return nabla_tensor(conn, require_sigma(conn, eps), g.tensor());
}

/// ∧(g) = 0.
template <class F>
bool quantum_symmetric(const Metric<F>& g) {
    return wedge(g.tensor()).v.is_zero();
}

/// (a ω⊗η)† = a* η*⊗ω* with s* = −t, t* = −s.
template <class F>
Tensor<F> dagger(const Tensor<F>& x) {
    Tensor<F> out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out.at(1 - j, 1 - i) += x.at(i, j).star();
    return out;
}

/// ω* for ω = a s + b t: a* s* + b* t* = −b* s − a* t.
template <class F>
OneForm<F> star(const OneForm<F>& w) {
    return {{-w.c[T].star(), -w.c[S].star()}};
}

template <class F>
bool metric_real(const Metric<F>& g) {
    return dagger(g.tensor()) == g.tensor();
}

/// ∇(e*) = σ((∇e)†) for e = s, t.
template <class F>
bool star_preserving(const Connection<F>& conn, double eps = kDefaultEps) {
    const Sigma<F> sigma = require_sigma(conn, eps);
    for (std::size_t e = 0; e < 2; ++e) {
        const Tensor<F> lhs = apply(conn, star(OneForm<F>::basis(e)));
        const Tensor<F> rhs = sigma_apply(sigma, dagger(conn.nabla[e]));
        if (!(lhs - rhs).is_zero(eps)) return false;
    }
    return true;
}

/// i(V) = ½(s⊗t + t⊗s); needs 2 invertible.
template <class F>
Lift<F> symmetric_lift() {
    const F two = Field<F>::from_int(2);
    if (Field<F>::is_zero(two, 0.0)) throw ValidationError("symmetric lift needs 2 to be invertible");
    const F half = Field<F>::one() / two;
    return {{Field<F>::zero(), half, half, Field<F>::zero()}};
}

/// i₊(V) = s⊗t.
template <class F>
Lift<F> plus_lift() {
    return {{Field<F>::zero(), Field<F>::one(), Field<F>::zero(), Field<F>::zero()}};
}

/// i₋(V) = t⊗s.
template <class F>
Lift<F> minus_lift() {
    return {{Field<F>::zero(), Field<F>::zero(), Field<F>::one(), Field<F>::zero()}};
}

/// ∧∘i applied to V, as the coefficient of V.
template <class F>
F lift_splitting(const Lift<F>& lift) {
    return lift.image[1] + lift.image[2];
}

// ---------------------------------------------------------------------------
// Curvature and Ricci

/// R∇ = (d⊗id − id∧∇)∇ on s and t.
template <class F>
Curvature<F> curvature(const Connection<F>& conn) {
    Curvature<F> out;
    for (std::size_t e = 0; e < 2; ++e) {
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t l = 0; l < 2; ++l) {
                const M2<F>& m = conn.nabla[e].at(k, l);
                if (m.is_zero()) continue;
                OneForm<F> w;
                w.c[k] = m;
                out.r[e][l] += d(w).v;
                // m e_k ∧ ∇e_l: only the e_m with m ≠ k wedge to V.
                for (std::size_t n = 0; n < 2; ++n) out.r[e][n] -= m * conn.nabla[l].at(1 - k, n);
            }
        }
    }
    return out;
}

/// Applies R∇ to the second leg of g, lifts V and contracts the first two
/// legs: Ricci = Σ g_ij (e_i, e_p) L^{pq} R_j^n e_q⊗e_n.
template <class F>
Tensor<F> ricci(const Curvature<F>& r, const Lift<F>& lift, const Metric<F>& g) {
    Tensor<F> out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p) {
                const F w = g.g[2 * i + j] * g.ginv[2 * i + p];
                if (Field<F>::is_zero(w, 0.0)) continue;
                for (std::size_t q = 0; q < 2; ++q) {
                    const F wl = w * lift.image[2 * p + q];
                    if (Field<F>::is_zero(wl, 0.0)) continue;
                    for (std::size_t n = 0; n < 2; ++n) out.at(q, n) += wl * r.r[j][n];
                }
            }
    return out;
}

/// S = ( , )Ricci.
template <class F>
M2<F> ricci_scalar(const Tensor<F>& ric, const Metric<F>& g) {
    M2<F> s;
    for (std::size_t k = 0; k < 4; ++k) s += g.ginv[k] * ric.c[k];
    return s;
}

template <class F>
struct TwoLiftEinstein {
    bool applicable = false;  // S₊ = S₋
    M2<F> s_plus, s_minus;
    Tensor<F> ricci_plus, ricci_minus;
    Tensor<F> two_ricci, two_eins;  // when applicable
    Tensor<F> eins_plus, eins_minus;  // fallback Ricci± + S± g
};

/// ₂Ricci = Ricci₊ + Ricci₋ and ₂Eins = ₂Ricci + gS when S₊ = S₋ = S;
/// otherwise the separate Eins± are returned with applicable = false.
template <class F>
TwoLiftEinstein<F> two_lift_einstein(const Connection<F>& conn, const Metric<F>& g) {
    const Curvature<F> r = curvature(conn);
    TwoLiftEinstein<F> out;
    out.ricci_plus = ricci(r, plus_lift<F>(), g);
    out.ricci_minus = ricci(r, minus_lift<F>(), g);
    out.s_plus = ricci_scalar(out.ricci_plus, g);
    out.s_minus = ricci_scalar(out.ricci_minus, g);
    const Tensor<F> gt = g.tensor();
    out.eins_plus = out.ricci_plus + right_mul(gt, out.s_plus);
    out.eins_minus = out.ricci_minus + right_mul(gt, out.s_minus);
    out.applicable = out.s_plus == out.s_minus;
    if (out.applicable) {
        out.two_ricci = out.ricci_plus + out.ricci_minus;
        out.two_eins = out.two_ricci + right_mul(gt, out.s_plus);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parametrized families

enum class MetricId { G1, G2 };

inline const char* to_string(MetricId id) { return id == MetricId::G1 ? "g1" : "g2"; }

template <class F>
Metric<F> metric_of(MetricId id) {
    return id == MetricId::G1 ? metric_g1<F>() : metric_g2<F>();
}

namespace detail {

template <class F>
M2<F> offdiag(const F& upper, const F& lower) {
    return {Field<F>::zero(), upper, lower, Field<F>::zero()};
}

template <class F>
Tensor<F> g1_tensor() {
    return Tensor<F>::from_scalars({Field<F>::zero(), Field<F>::one(), -Field<F>::one(), Field<F>::zero()});
}

}  // namespace detail

/// QLCs for g₁ with parameters (α, β, μ, ν) or for g₂ with (μ, ν, ρ).
template <class F>
Connection<F> qlc_family(MetricId id, const std::vector<F>& params) {
    using detail::offdiag;
    const F one = Field<F>::one();
    const F two = Field<F>::from_int(2);
    const Tensor<F> ss = Tensor<F>::basis(S, S), st = Tensor<F>::basis(S, T), ts = Tensor<F>::basis(T, S),
                    tt = Tensor<F>::basis(T, T);
    const Tensor<F> g1 = detail::g1_tensor<F>();
    const M2<F> e12 = M2<F>::unit(1, 2), e21 = M2<F>::unit(2, 1);
    Connection<F> c;
    if (id == MetricId::G1) {
        if (params.size() != 4) throw ValidationError("g1 family takes 4 parameters (alpha, beta, mu, nu)");
        const F &al = params[0], &be = params[1], &mu = params[2], &nu = params[3];
        // 2θ⊗s = 2E12 s⊗s + 2E21 t⊗s, and likewise for t.
        c.nabla[S] = (two * e12) * ss + (two * e21) * ts - offdiag(mu * al, be) * ss - offdiag(al, nu * be) * g1 +
                     offdiag(nu * al, nu * nu * be + (mu * nu - one) * al) * tt;
        c.nabla[T] = (two * e12) * st + (two * e21) * tt + offdiag(mu * mu * al + (mu * nu - one) * be, mu * be) * ss +
                     offdiag(mu * al, be) * g1 - offdiag(al, nu * be) * tt;
    } else {
        if (params.size() != 3) throw ValidationError("g2 family takes 3 parameters (mu, nu, rho)");
        const F &mu = params[0], &nu = params[1], &rho = params[2];
        c.nabla[S] = (two * e21) * ts + offdiag(mu * rho, two * mu - rho * (one + mu * (mu + nu))) * ss +
                     offdiag(-rho, mu * rho) * g1 + offdiag(nu * rho, rho) * tt;
        c.nabla[T] = (two * e12) * st + offdiag(-rho, mu * rho) * ss - offdiag(nu * rho, rho) * g1 +
                     offdiag(-two * nu + rho * (one + nu * (mu + nu)), nu * rho) * tt;
    }
    return c;
}

/// ∇e = 2θ⊗e, flat and compatible with every central metric.
template <class F>
Connection<F> theta_connection() {
    const F two = Field<F>::from_int(2);
    const OneForm<F> th = theta<F>();
    Connection<F> c;
    for (std::size_t e = 0; e < 2; ++e) {
        OneForm<F> w;
        w.c[S] = two * th.c[S];
        w.c[T] = two * th.c[T];
        c.nabla[e] = tensor(w, OneForm<F>::basis(e));
    }
    return c;
}

}  // namespace qgeom::m2
