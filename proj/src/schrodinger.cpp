#include "qgeom/schrodinger.hpp"

#include <cmath>

namespace qgeom::schrodinger {

namespace {

const Complex kI{0.0, 1.0};

MetricWeights<Complex> complex_weights(const MetricWeights<double>& w) { return convert_weights<Complex>(w); }

Wave conj(const Wave& psi) {
    Wave out = psi;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

Wave lift(const RealFunction& v) {
    Wave out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

Wave density(const Wave& psi) {
    Wave f(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) f[i] = std::norm(psi[i]);
    return f;
}

double max_abs(const Wave& w) {
    double m = 0.0;
    for (const auto& v : w.values) m = std::max(m, std::abs(v));
    return m;
}

Wave q_function(const GraphCalculus& calc, const MetricWeights<Complex>& cw) {
    const auto th = theta<Complex>(calc);
    return inner_product(calc, cw, th, th);
}

void check_potential(const GraphCalculus& calc, const RealFunction& potential, const Wave& psi) {
    detail::check_size<double>(potential.size(), calc.vertex_count(), "potential");
    detail::check_size<Complex>(psi.size(), calc.vertex_count(), "wave function");
}

}  // namespace

Wave StepOperator::apply(const Wave& psi) const {
    Wave out(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * psi[c];
    return out;
}

double StepOperator::unitarity_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            Complex acc = (i == j) ? Complex(-1.0) : Complex(0.0);
            for (std::size_t k = 0; k < n_; ++k) acc += std::conj((*this)(k, i)) * (*this)(k, j);
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

Wave laplacian(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn, const Wave& psi) {
    const auto cw = complex_weights(w);
    if (conn == nullptr) return laplacian_theta(calc, cw, psi);
    return connection_laplacian(calc, *conn, cw, psi);
}

Wave schrodinger_step(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                      const RealFunction& potential, const Wave& psi) {
    check_potential(calc, potential, psi);
    if (conn != nullptr) require_sigma(calc, *conn, kDefaultEps);
    const Wave lap = laplacian(calc, w, conn, psi);
    Wave out = psi;
    for (std::size_t x = 0; x < psi.size(); ++x) out[x] += kI * (-lap[x] + potential[x] * psi[x]);
    return out;
}

StepOperator step_matrix(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                         const RealFunction& potential) {
    const std::size_t n = calc.vertex_count();
    if (conn != nullptr) require_sigma(calc, *conn, kDefaultEps);
    StepOperator u(n);
    for (std::size_t c = 0; c < n; ++c) {
        const Wave e = Wave::delta(n, c);
        const Wave lap = laplacian(calc, w, conn, e);
        for (std::size_t r = 0; r < n; ++r) u(r, c) = e[r] + kI * (-lap[r] + potential[r] * e[r]);
    }
    return u;
}

Wave tilde(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi) {
    calc.require_bidirected("tilde");
    Wave out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& e = calc.arrow(a);
        out[e.tail] += psi[e.head] * w[calc.reverse(a)];
    }
    return out;
}

Currents currents(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                  const RealFunction& potential) {
    check_potential(calc, potential, psi);
    const auto cw = complex_weights(w);
    const Wave bar = conj(psi);
    const OneForm<Complex> dpsi = differential(calc, psi);
    const OneForm<Complex> dbar = differential(calc, bar);
    const Wave lap = laplacian_theta(calc, cw, psi);
    const Wave lap_bar = laplacian_theta(calc, cw, bar);
    const Wave v = lift(potential);

    const OneForm<Complex> i_term = kI * (right_action(calc, dpsi, bar) - right_action(calc, dbar, psi));
    Currents out;
    out.j = i_term - Complex(0.5) * (right_action(calc, dpsi, lap_bar) + right_action(calc, dbar, lap));
    out.j_v = i_term + right_action(calc, dpsi, Complex(-0.5) * lap_bar + v * bar) +
              right_action(calc, dbar, Complex(-0.5) * lap + v * psi);
    return out;
}

Currents currents_tail_formula(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                               const RealFunction& potential) {
    check_potential(calc, potential, psi);
    const auto cw = complex_weights(w);
    const Wave pt = tilde(calc, w, psi);
    const Wave q = q_function(calc, cw);
    Currents out{OneForm<Complex>(calc.arrow_count()), OneForm<Complex>(calc.arrow_count())};
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t x = calc.arrow(a).tail;
        const std::size_t y = calc.arrow(a).head;
        const Complex px = psi[x], py = psi[y];
        const Complex bx = std::conj(px), by = std::conj(py);
        const Complex tx = pt[x], tbx = std::conj(pt[x]);
        const Complex fx = std::norm(px);
        const Complex cross = py * bx + by * px;
        const Complex i_part = kI * (py * bx - by * px);
        out.j[a] = i_part + 0.5 * (py * tbx + by * tx - px * tbx - bx * tx - cross * q[x]) + fx * q[x];
        out.j_v[a] = out.j[a] + potential[x] * (cross - 2.0 * fx);
    }
    return out;
}

Currents currents_explicit(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi,
                           const RealFunction& potential) {
    const Currents p = currents_tail_formula(calc, w, psi, potential);
    Currents out{OneForm<Complex>(calc.arrow_count()), OneForm<Complex>(calc.arrow_count())};
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t r = calc.reverse(a);
        out.j[a] = -p.j[r];
        out.j_v[a] = -p.j_v[r];
    }
    return out;
}

Wave dpsibar_dpsi_explicit(const GraphCalculus& calc, const MetricWeights<double>& w, const Wave& psi) {
    calc.require_bidirected("dpsibar_dpsi_explicit");
    Wave out(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t x = calc.arrow(a).tail;
        const std::size_t y = calc.arrow(a).head;
        const double p = w[calc.reverse(a)];
        out[x] += (-std::norm(psi[y]) - std::norm(psi[x]) + psi[x] * std::conj(psi[y]) + std::conj(psi[x]) * psi[y]) * p;
    }
    return out;
}

DecompositionResiduals decompose_step_check(const GraphCalculus& calc, const MetricWeights<double>& w,
                                            const RealFunction& potential, const Wave& psi) {
    check_potential(calc, potential, psi);
    const auto cw = complex_weights(w);
    const Wave next = schrodinger_step(calc, w, nullptr, potential, psi);
    const Wave f = density(psi);
    const Wave df_step = density(next) - f;

    const Wave v = lift(potential);
    const Currents c = currents(calc, w, psi, potential);
    const Wave dbd = inner_product(calc, cw, differential(calc, conj(psi)), differential(calc, psi));
    const Wave minus_lap_f = Complex(-1.0) * laplacian_theta(calc, cw, f);

    const Wave rhs_j = v * minus_lap_f + v * v * f + v * dbd - divergence_theta(calc, cw, c.j);
    const Wave rhs_jv = v * v * f - divergence_theta(calc, cw, c.j_v);
    return {max_abs(df_step - rhs_j), max_abs(df_step - rhs_jv), max_abs(rhs_j - rhs_jv)};
}

Complex norm_drift(const GraphCalculus& calc, const MetricWeights<double>& w, const RealFunction& potential,
                   const Wave& psi) {
    check_potential(calc, potential, psi);
    const Wave q = q_function(calc, complex_weights(w));
    const Wave pt = tilde(calc, w, psi);
    Complex total = 0.0;
    for (std::size_t x = 0; x < psi.size(); ++x) {
        const Complex vq = potential[x] - q[x];
        const Complex a = std::conj(psi[x]) * pt[x];
        const Complex b = psi[x] * std::conj(pt[x]);
        total += vq * vq * std::norm(psi[x]) + vq * (a + b) + std::norm(pt[x]) + kI * (a - b);
    }
    return total;
}

Complex norm_drift_direct(const GraphCalculus& calc, const MetricWeights<double>& w, const Connection* conn,
                          const RealFunction& potential, const Wave& psi) {
    const Wave next = schrodinger_step(calc, w, conn, potential, psi);
    Complex total = 0.0;
    for (std::size_t x = 0; x < psi.size(); ++x) total += std::norm(next[x]) - std::norm(psi[x]);
    return total;
}

double continuous_current_identity(const GraphCalculus& calc, const MetricWeights<double>& w,
                                   const RealFunction& potential, const Wave& psi) {
    check_potential(calc, potential, psi);
    const auto cw = complex_weights(w);
    const Wave lap = laplacian_theta(calc, cw, psi);
    Wave dot(psi.size());
    for (std::size_t x = 0; x < psi.size(); ++x) dot[x] = kI * (-lap[x] + potential[x] * psi[x]);
    const Wave bar = conj(psi);
    const Wave fdot = conj(dot) * psi + bar * dot;
    const OneForm<Complex> j =
        kI * (right_action(calc, differential(calc, psi), bar) - right_action(calc, differential(calc, bar), psi));
    return max_abs(fdot + divergence_theta(calc, cw, j));
}

MetricWeights<double> two_state_weights(double alpha, double beta) {
    // Arrow 0 is 0→1 (weight β), arrow 1 is 1→0 (weight α).
    return MetricWeights<double>({beta, alpha}, true);
}

TwoStateFamily two_state_unitary_family(double alpha, double beta, double phi) {
    if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0)) {
        throw ValidationError("two-state weights must lie in (0,1]");
    }
    const GraphCalculus calc = GraphCalculus::two_point();
    const Complex e = std::exp(kI * phi);
    TwoStateFamily fam;
    fam.z = (1.0 - e) / 2.0;
    fam.s = -1.0 - kI * (1.0 - e) / (2.0 * alpha);
    fam.t = -1.0 - kI * (1.0 - e) / (2.0 * beta);
    fam.potential = RealFunction(2);
    fam.connection = two_state_connection<Complex>(calc, fam.s, fam.t);
    fam.step = step_matrix(calc, two_state_weights(alpha, beta), &fam.connection, fam.potential);
    return fam;
}

StepOperator two_state_closed_form(double phi) {
    StepOperator u(2);
    const Complex g = std::exp(kI * (phi / 2.0));
    const double c = std::cos(phi / 2.0), s = std::sin(phi / 2.0);
    u(0, 0) = g * c;
    u(0, 1) = -kI * g * s;
    u(1, 0) = -kI * g * s;
    u(1, 1) = g * c;
    return u;
}

FStep two_state_f_step(const std::array<Complex, 2>& psi, double phi) {
    const double c2 = std::pow(std::cos(phi / 2.0), 2);
    const double s2 = std::pow(std::sin(phi / 2.0), 2);
    const double f0 = std::norm(psi[0]), f1 = std::norm(psi[1]);
    const Complex det = std::conj(psi[0]) * psi[1] - std::conj(psi[1]) * psi[0];
    // det is imaginary, so the source is real.
    const double src = (kSourceCoefficient * std::sin(phi) * det).real();
    FStep out;
    out.markov_part = {c2 * f0 + s2 * f1, s2 * f0 + c2 * f1};
    out.source_part = {src, -src};
    return out;
}

double two_state_f_step_residual(const std::array<Complex, 2>& psi, double phi) {
    const Wave next = two_state_closed_form(phi).apply(Wave(std::vector<Complex>{psi[0], psi[1]}));
    const FStep fs = two_state_f_step(psi, phi);
    double worst = 0.0;
    for (std::size_t x = 0; x < 2; ++x)
        worst = std::max(worst, std::abs(std::norm(next[x]) - fs.markov_part[x] - fs.source_part[x]));
    return worst;
}

double two_state_current_residual(double alpha, double beta, double phi, const std::array<Complex, 2>& psi) {
    const GraphCalculus calc = GraphCalculus::two_point();
    const TwoStateFamily fam = two_state_unitary_family(alpha, beta, phi);
    const auto cw = complex_weights(two_state_weights(alpha, beta));
    const Wave p(std::vector<Complex>{psi[0], psi[1]});
    const Wave f = density(p);
    const Wave df_step = density(fam.step.apply(p)) - f;

    const Complex det = std::conj(psi[0]) * psi[1] - std::conj(psi[1]) * psi[0];
    const Complex kappa = -(1.0 + std::exp(-kI * phi)) / (2.0 * kI);
    OneForm<Complex> j(2);
    j[0] = kappa * det;   // ω_{0→1}
    j[1] = -kappa * det;  // ω_{1→0}

    const Complex pref = (1.0 - std::exp(-kI * phi)) / (2.0 * kI);
    const Wave rhs = pref * connection_laplacian(calc, fam.connection, cw, f) -
                     connection_divergence(calc, fam.connection, cw, j);
    return max_abs(df_step - rhs);
}

std::vector<std::size_t> unitary_scan(const GraphCalculus& calc, const MetricWeights<double>& w,
                                      const std::function<Connection(std::span<const double>)>& family,
                                      const std::vector<std::vector<double>>& grid, const RealFunction& potential,
                                      double eps) {
    std::vector<char> pass(grid.size(), 0);
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            const Connection conn = family(grid[static_cast<std::size_t>(i)]);
            pass[static_cast<std::size_t>(i)] = step_matrix(calc, w, &conn, potential).unitary(eps) ? 1 : 0;
        } catch (const QgeomError&) {
            pass[static_cast<std::size_t>(i)] = 0;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pass.size(); ++i)
        if (pass[i]) out.push_back(i);
    return out;
}

}  // namespace qgeom::schrodinger
