// qgeom command-line workbench.
//
// Exit codes: 0 success, 1 an assertion failed, 2 bad command line,
// 3 input parse error, 4 validation error, 5 I/O error, 6 internal error.

#include "qgeom/demorgan.hpp"
#include "qgeom/io.hpp"
#include "qgeom/m2_enumeration.hpp"
#include "qgeom/m2_geometry.hpp"
#include "qgeom/markov.hpp"
#include "qgeom/parallel.hpp"
#include "qgeom/schrodinger.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using qgeom::Complex;
using qgeom::io::Json;
using qgeom::io::RunReport;

enum ExitCode : int {
    kOk = 0,
    kAssertionFailed = 1,
    kUsage = 2,
    kParseError = 3,
    kValidationError = 4,
    kIoError = 5,
    kInternalError = 6,
};

struct Common {
    std::string input;
    std::string output;
    std::string csv;
    std::uint64_t seed = 1;
    double tolerance = -1.0;  // negative: command default

    double tol(double fallback) const { return tolerance >= 0.0 ? tolerance : fallback; }
};

void add_common(CLI::App* cmd, Common& c, bool wants_input) {
    auto* in = cmd->add_option("--input,-i", c.input, "GraphSpec JSON file");
    if (wants_input) in->required();
    cmd->add_option("--output,-o", c.output, "write the JSON report here instead of stdout");
    cmd->add_option("--seed", c.seed, "seed for randomized parts")->capture_default_str();
    cmd->add_option("--tolerance", c.tolerance, "assertion tolerance (command-specific default)");
}

Json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
    return v;
}

Json real_vector(const std::vector<double>& v) { return Json(v); }

Json complex_vector(const std::vector<Complex>& v) {
    Json out = Json::array();
    for (Complex z : v) out.push_back(qgeom::io::complex_json(z));
    return out;
}

Json step_json(const qgeom::schrodinger::StepOperator& u) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < u.size(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < u.size(); ++c) row.push_back(qgeom::io::complex_json(u(r, c)));
        rows.push_back(row);
    }
    return rows;
}

double total(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

std::vector<double> densities(const qgeom::schrodinger::Wave& psi) {
    std::vector<double> out;
    for (Complex z : psi.values) out.push_back(std::norm(z));
    return out;
}

struct Loaded {
    qgeom::io::GraphSpec spec;
    qgeom::io::LoadedGraph graph;
};

Loaded load(const Common& c, RunReport& report) {
    const std::string text = qgeom::io::read_file(c.input);
    report.set_input_digest(qgeom::io::digest(text));
    Loaded l;
    l.spec = qgeom::io::parse_graph_spec(text, c.input);
    l.graph = qgeom::io::build(l.spec, c.input);
    return l;
}

std::size_t vertex_index(const qgeom::GraphCalculus& calc, const std::string& label, const char* flag) {
    for (std::size_t i = 0; i < calc.labels().size(); ++i)
        if (calc.labels()[i] == label) return i;
    throw qgeom::ValidationError(std::string(flag) + ": unknown vertex '" + label + "'");
}

void write_csv(const std::string& path, const std::vector<std::string>& labels,
               const std::vector<std::vector<double>>& rows) {
    if (path.empty()) return;
    std::ostringstream os;
    qgeom::io::write_trajectory_csv(os, labels, rows);
    qgeom::io::write_file(path, os.str());
}

// ---------------------------------------------------------------------------
// markov

qgeom::markov::RealFunction initial_distribution(const Loaded& l) {
    const std::size_t n = l.graph.calc.vertex_count();
    if (l.spec.initial) return qgeom::markov::RealFunction(*l.spec.initial);
    return qgeom::markov::RealFunction::delta(n, 0);
}

void require_stochastic(const Loaded& l, const Common& c) {
    const auto rep = qgeom::markov::validate_stochastic(l.graph.calc, l.graph.weights);
    if (!rep.passed) throw qgeom::ValidationError(c.input + ": " + rep.violations.front().where);
}

struct MarkovOpts {
    unsigned steps = 10;
    std::string from, to;
};

int markov_step_cmd(const Common& c, const MarkovOpts& o, RunReport& report) {
    const Loaded l = load(c, report);
    require_stochastic(l, c);
    const auto chain = qgeom::markov::to_transition_matrix(l.graph.calc, l.graph.weights);
    auto f = initial_distribution(l);
    std::vector<std::vector<double>> rows{f.values};
    const double mass0 = total(f.values);
    for (unsigned i = 0; i < o.steps; ++i) {
        f = qgeom::markov::markov_step(chain, f);
        rows.push_back(f.values);
    }
    write_csv(c.csv, l.graph.calc.labels(), rows);
    report.results()["steps"] = o.steps;
    report.results()["final"] = real_vector(f.values);
    report.residual("mass_drift", std::abs(total(f.values) - mass0), c.tol(1e-12));
    return kOk;
}

int markov_equiv_cmd(const Common& c, const MarkovOpts& o, RunReport& report) {
    const Loaded l = load(c, report);
    require_stochastic(l, c);
    const auto chain = qgeom::markov::to_transition_matrix(l.graph.calc, l.graph.weights);
    auto f = initial_distribution(l);
    std::vector<std::vector<double>> rows{f.values};
    double worst = 0.0;
    for (unsigned i = 0; i < o.steps; ++i) {
        const auto a = qgeom::markov::markov_step(chain, f);
        const auto b = qgeom::markov::diffusion_step(l.graph.calc, l.graph.weights, f);
        for (std::size_t x = 0; x < a.size(); ++x) worst = std::max(worst, std::abs(a[x] - b[x]));
        f = a;
        rows.push_back(f.values);
    }
    write_csv(c.csv, l.graph.calc.labels(), rows);
    report.results()["steps"] = o.steps;
    report.results()["final"] = real_vector(f.values);
    report.results()["max_residual"] = worst;
    report.residual("markov_vs_diffusion", worst, c.tol(1e-12));
    return kOk;
}

int markov_tropical_cmd(const Common& c, const MarkovOpts& o, RunReport& report) {
    const Loaded l = load(c, report);
    require_stochastic(l, c);
    const auto& calc = l.graph.calc;
    const auto lengths = qgeom::markov::tropicalize(calc, l.graph.weights);
    Json arrows = Json::array();
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        arrows.push_back(Json{{"from", calc.labels()[calc.arrow(a).tail]},
                              {"to", calc.labels()[calc.arrow(a).head]},
                              {"weight", l.graph.weights[a]},
                              {"length", number_or_inf(lengths.arrow[a])}});
    }
    Json self = Json::array();
    for (double v : lengths.self) self.push_back(number_or_inf(v));
    report.results()["arrows"] = arrows;
    report.results()["self_lengths"] = self;

    const auto back = qgeom::markov::detropicalize(calc, lengths);
    double round_trip = 0.0;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a)
        round_trip = std::max(round_trip, std::abs(back[a] - l.graph.weights[a]));

    const auto power = qgeom::markov::to_transition_matrix(calc, l.graph.weights).power(o.steps);
    double path_vs_power = 0.0;
    for (std::size_t x = 0; x < calc.vertex_count(); ++x)
        for (std::size_t y = 0; y < calc.vertex_count(); ++y)
            path_vs_power = std::max(path_vs_power,
                                     std::abs(qgeom::markov::n_step_path_sum(calc, lengths, x, y, o.steps) - power(x, y)));
    report.results()["path_steps"] = o.steps;
    report.assertion("restriction_holds", qgeom::markov::satisfies_restriction(calc, lengths));
    report.residual("round_trip", round_trip, c.tol(1e-12));
    report.residual("path_sum_vs_matrix_power", path_vs_power, c.tol(1e-9));
    return kOk;
}

int markov_shortest_cmd(const Common& c, const MarkovOpts& o, RunReport& report) {
    const Loaded l = load(c, report);
    require_stochastic(l, c);
    const auto& calc = l.graph.calc;
    const std::size_t x = vertex_index(calc, o.from, "--from");
    const std::size_t y = vertex_index(calc, o.to, "--to");
    const auto lengths = qgeom::markov::tropicalize(calc, l.graph.weights);
    const auto sp = qgeom::markov::lawvere_shortest(calc, lengths, x, y);
    Json path = Json::array();
    for (std::size_t v : sp.path) path.push_back(calc.labels()[v]);
    report.results()["from"] = o.from;
    report.results()["to"] = o.to;
    report.results()["distance"] = number_or_inf(sp.distance);
    report.results()["probability"] = std::isinf(sp.distance) ? 0.0 : std::exp(-sp.distance);
    report.results()["path"] = path;
    return kOk;
}

// ---------------------------------------------------------------------------
// schrodinger

namespace sch = qgeom::schrodinger;

struct SchOpts {
    unsigned steps = 100;
    double alpha = 0.5, beta = 0.5, phi = std::numbers::pi;
    bool phi_given = false;
    unsigned phi_steps = 64, alpha_steps = 8, beta_steps = 8;
    unsigned iterations = 0;
};

sch::Wave random_wave(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    sch::Wave psi(n);
    double norm = 0.0;
    for (auto& z : psi.values) {
        z = {nd(rng), nd(rng)};
        norm += std::norm(z);
    }
    for (auto& z : psi.values) z /= std::sqrt(norm);
    return psi;
}

int schrodinger_evolve_cmd(const Common& c, const SchOpts& o, RunReport& report) {
    const Loaded l = load(c, report);
    const auto& calc = l.graph.calc;
    const std::size_t n = calc.vertex_count();
    sch::Wave psi = l.spec.psi ? sch::Wave(*l.spec.psi) : sch::Wave::delta(n, 0);
    sch::RealFunction v = l.spec.potential ? sch::RealFunction(*l.spec.potential) : sch::RealFunction(n);

    sch::StepOperator u;
    if (o.phi_given) {
        // The unitary circle lives on the two-point graph; read α, β off the weights.
        if (n != 2 || calc.arrow_count() != 2) throw qgeom::ValidationError("--phi needs a two-vertex graph with both arrows");
        const auto a01 = calc.find_arrow(0, 1), a10 = calc.find_arrow(1, 0);
        const auto fam = sch::two_state_unitary_family(l.graph.weights[*a10], l.graph.weights[*a01], o.phi);
        u = fam.step;
        report.results()["mode"] = "unitary-circle";
        report.results()["phi"] = o.phi;
    } else {
        u = sch::step_matrix(calc, l.graph.weights, nullptr, v);
        report.results()["mode"] = "canonical";
    }
    std::vector<std::vector<double>> rows{densities(psi)};
    const double norm0 = total(rows.front());
    for (unsigned i = 0; i < o.steps; ++i) {
        psi = u.apply(psi);
        rows.push_back(densities(psi));
    }
    write_csv(c.csv, calc.labels(), rows);
    const double drift = std::abs(total(rows.back()) - norm0);
    report.results()["steps"] = o.steps;
    report.results()["unitarity_residual"] = u.unitarity_residual();
    report.results()["final_psi"] = complex_vector(psi.values);
    report.results()["norm_drift"] = drift;
    if (o.phi_given) report.residual("norm_drift", drift, c.tol(1e-9));
    return kOk;
}

void digest_params(RunReport& report, const Json& params) { report.set_input_digest(qgeom::io::digest(params.dump())); }

int schrodinger_scan_cmd(const Common& c, const SchOpts& o, RunReport& report) {
    digest_params(report, Json{{"phi_steps", o.phi_steps}, {"alpha_steps", o.alpha_steps}, {"beta_steps", o.beta_steps},
                               {"iterations", o.iterations}, {"seed", c.seed}});
    if (o.phi_steps == 0 || o.alpha_steps == 0 || o.beta_steps == 0) throw qgeom::ValidationError("grid sizes must be positive");
    const double eps = c.tol(1e-12);
    double worst = 0.0;
    std::size_t unitary = 0, points = 0;
    for (unsigned ia = 0; ia < o.alpha_steps; ++ia) {
        for (unsigned ib = 0; ib < o.beta_steps; ++ib) {
            const double alpha = double(ia + 1) / o.alpha_steps;
            const double beta = double(ib + 1) / o.beta_steps;
            const auto calc = qgeom::GraphCalculus::two_point();
            const auto w = sch::two_state_weights(alpha, beta);
            std::vector<std::vector<double>> grid;
            for (unsigned k = 0; k < o.phi_steps; ++k) grid.push_back({2.0 * std::numbers::pi * k / o.phi_steps});
            const auto family = [&](std::span<const double> p) {
                return sch::two_state_unitary_family(alpha, beta, p[0]).connection;
            };
            unitary += sch::unitary_scan(calc, w, family, grid, sch::RealFunction(2), eps).size();
            for (const auto& g : grid) worst = std::max(worst, sch::two_state_unitary_family(alpha, beta, g[0]).step.unitarity_residual());
            points += grid.size();
        }
    }
    report.results()["grid"] = Json{{"phi", o.phi_steps}, {"alpha", o.alpha_steps}, {"beta", o.beta_steps}};
    report.results()["points"] = points;
    report.results()["unitary_points"] = unitary;
    report.residual("max_unitarity_residual", worst, eps);
    report.assertion("all_points_unitary", unitary == points);
    if (o.iterations > 0) {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        const double alpha = 1.0 - ud(rng), beta = 1.0 - ud(rng), phi = 2.0 * std::numbers::pi * ud(rng);
        const auto u = sch::two_state_unitary_family(alpha, beta, phi).step;
        sch::Wave psi = random_wave(rng, 2);
        for (unsigned i = 0; i < o.iterations; ++i) psi = u.apply(psi);
        const double drift = std::abs(total(densities(psi)) - 1.0);
        report.results()["iterated"] = Json{{"alpha", alpha}, {"beta", beta}, {"phi", phi}, {"iterations", o.iterations}};
        report.residual("iterated_norm_drift", drift, 1e-9);
    }
    return kOk;
}

int schrodinger_two_state_cmd(const Common& c, const SchOpts& o, RunReport& report) {
    digest_params(report, Json{{"alpha", o.alpha}, {"beta", o.beta}, {"phi", o.phi}, {"seed", c.seed}});
    const auto fam = sch::two_state_unitary_family(o.alpha, o.beta, o.phi);
    const auto closed = sch::two_state_closed_form(o.phi);
    double gap = 0.0;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t k = 0; k < 2; ++k) gap = std::max(gap, std::abs(fam.step(r, k) - closed(r, k)));
    std::mt19937_64 rng(c.seed);
    const sch::Wave psi = random_wave(rng, 2);
    const std::array<Complex, 2> p{psi[0], psi[1]};
    const double eps = c.tol(1e-12);

    report.results()["alpha"] = o.alpha;
    report.results()["beta"] = o.beta;
    report.results()["phi"] = o.phi;
    report.results()["s"] = qgeom::io::complex_json(fam.s);
    report.results()["t"] = qgeom::io::complex_json(fam.t);
    report.results()["U"] = step_json(fam.step);
    report.results()["sample_psi"] = complex_vector(psi.values);
    report.residual("unitarity", fam.step.unitarity_residual(), eps);
    report.residual("closed_form", gap, eps);
    report.residual("f_step_split", sch::two_state_f_step_residual(p, o.phi), eps);
    report.residual("current_form", sch::two_state_current_residual(o.alpha, o.beta, o.phi, p), eps);
    return kOk;
}

// ---------------------------------------------------------------------------
// m2

namespace m2 = qgeom::m2;
using qgeom::GaussRational;
using qgeom::Gf2;

struct M2Opts {
    std::string metric = "g1";
    std::vector<std::string> params;
    std::string field = "complex";
    std::string code;
    std::vector<int> metric_entries;
    std::string records;
};

template <class F>
Json scalar_json(const F& x) {
    std::ostringstream os;
    if constexpr (std::is_same_v<F, Gf2>) {
        os << x;
        return std::stoi(os.str());
    } else {
        // Exact values as strings: "3/2", "-i", "1/2-3i".
        if (x.im() == 0) {
            os << x.re();
        } else {
            if (x.re() != 0) os << x.re() << (x.im() < 0 ? "-" : "+");
            else if (x.im() < 0) os << "-";
            const auto b = abs(x.im());
            if (b != 1) os << b;
            os << "i";
        }
        return os.str();
    }
}

template <class F>
Json matrix_json(const m2::M2<F>& a) {
    return Json::array({Json::array({scalar_json(a(0, 0)), scalar_json(a(0, 1))}),
                        Json::array({scalar_json(a(1, 0)), scalar_json(a(1, 1))})});
}

template <class F>
Json tensor_json(const m2::Tensor<F>& x) {
    static const char* keys[] = {"ss", "st", "ts", "tt"};
    Json out;
    for (std::size_t k = 0; k < 4; ++k) out[keys[k]] = matrix_json(x.c[k]);
    if constexpr (std::is_same_v<F, Gf2>) out["text"] = m2::f2::format_tensor(x);
    return out;
}

template <class F>
Json connection_json(const m2::Connection<F>& conn) {
    return Json{{"nabla_s", tensor_json(conn.nabla[m2::S])}, {"nabla_t", tensor_json(conn.nabla[m2::T])}};
}

template <class F>
Json curvature_json(const m2::Curvature<F>& r) {
    Json out;
    const char* names[] = {"R_s", "R_t"};
    for (std::size_t e = 0; e < 2; ++e)
        out[names[e]] = Json{{"V_s", matrix_json(r.r[e][0])}, {"V_t", matrix_json(r.r[e][1])}};
    return out;
}

template <class F>
Json einstein_json(const m2::TwoLiftEinstein<F>& e) {
    Json out;
    out["s_plus"] = matrix_json(e.s_plus);
    out["s_minus"] = matrix_json(e.s_minus);
    out["ricci_plus"] = tensor_json(e.ricci_plus);
    out["ricci_minus"] = tensor_json(e.ricci_minus);
    out["applicable"] = e.applicable;
    if (e.applicable) {
        out["two_ricci"] = tensor_json(e.two_ricci);
        out["two_eins"] = tensor_json(e.two_eins);
    } else {
        out["eins_plus"] = tensor_json(e.eins_plus);
        out["eins_minus"] = tensor_json(e.eins_minus);
    }
    return out;
}

GaussRational parse_rational(const std::string& s, const std::string& whole) {
    const auto bad = [&] { return qgeom::ValidationError("--params: cannot read '" + whole + "' as a Gaussian rational"); };
    if (s.empty() || s == "+") return 1;
    if (s == "-") return -1;
    std::size_t slash = s.find('/');
    try {
        std::size_t used = 0;
        const long long num = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash)) throw bad();
        long long den = 1;
        if (slash != std::string::npos) {
            const std::string d = s.substr(slash + 1);
            den = std::stoll(d, &used);
            if (used != d.size() || den == 0) throw bad();
        }
        return GaussRational::frac(num, den);
    } catch (const std::logic_error&) {
        throw bad();
    }
}

/// Accepts "p", "p/q", "bi", "a+bi" and "a-bi" with rational a, b.
GaussRational parse_gauss(std::string s) {
    const std::string whole = s;
    std::erase(s, ' ');
    if (s.empty()) throw qgeom::ValidationError("--params: empty entry");
    if (s.back() != 'i') return parse_rational(s, whole);
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return parse_rational(s, whole) * GaussRational::i();
    return parse_rational(s.substr(0, split), whole) + parse_rational(s.substr(split), whole) * GaussRational::i();
}

m2::MetricId metric_id(const std::string& name) {
    if (name == "g1") return m2::MetricId::G1;
    if (name == "g2") return m2::MetricId::G2;
    throw qgeom::ValidationError("--metric must be g1 or g2, got '" + name + "'");
}

m2::f2::Code parse_code(const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(text, &used, 16);
        if (used != text.size() || v >= m2::f2::kCodeCount) throw std::out_of_range("code");
        return static_cast<m2::f2::Code>(v);
    } catch (const std::logic_error&) {
        throw qgeom::ValidationError("--code must be a hex number below 0x1000000, got '" + text + "'");
    }
}

std::string hex_code(m2::f2::Code code) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%06x", code);
    return buf;
}

template <class F>
m2::Connection<F> m2_connection(const M2Opts& o, RunReport& report) {
    if constexpr (std::is_same_v<F, Gf2>) {
        if (!o.code.empty()) {
            report.results()["code"] = hex_code(parse_code(o.code));
            return m2::f2::decode(parse_code(o.code));
        }
    }
    std::vector<F> params;
    for (const auto& p : o.params) {
        if constexpr (std::is_same_v<F, Gf2>) {
            if (p != "0" && p != "1") throw qgeom::ValidationError("--params over GF(2) must be 0 or 1, got '" + p + "'");
            params.push_back(Gf2(p == "1" ? 1 : 0));
        } else {
            params.push_back(parse_gauss(p));
        }
    }
    return m2::qlc_family<F>(metric_id(o.metric), params);
}

template <class F>
int m2_run(const std::string& what, const M2Opts& o, RunReport& report) {
    const auto conn = m2_connection<F>(o, report);
    const auto g = m2::metric_of<F>(metric_id(o.metric));
    report.results()["field"] = std::is_same_v<F, Gf2> ? "f2" : "complex";
    report.results()["metric"] = o.metric;
    report.results()["connection"] = connection_json(conn);
    if (what == "family") return kOk;

    if (what == "check") {
        const bool tf = m2::torsion_free(conn);
        const auto sig = m2::sigma_solve(conn);
        report.results()["sigma_status"] = qgeom::to_string(sig.status);
        report.assertion("torsion_free", tf);
        report.assertion("sigma_unique", sig.ok());
        if (sig.ok()) {
            const auto ng = m2::nabla_metric(conn, g);
            bool zero = true;
            for (const auto& v : ng.c)
                if (!v.is_zero()) zero = false;
            report.assertion("metric_compatible", zero);
            if constexpr (!std::is_same_v<F, Gf2>) report.results()["star_preserving"] = m2::star_preserving(conn);
        }
        return kOk;
    }

    const auto r = m2::curvature(conn);
    report.results()["flat"] = r.is_zero();
    report.results()["curvature"] = curvature_json(r);
    if (what == "curvature") {
        if constexpr (!std::is_same_v<F, Gf2>) {
            const auto ric = m2::ricci(r, m2::symmetric_lift<F>(), g);
            report.results()["ricci"] = tensor_json(ric);
            report.results()["ricci_scalar"] = matrix_json(m2::ricci_scalar(ric, g));
        }
        return kOk;
    }
    // einstein
    const auto e = m2::two_lift_einstein(conn, g);
    report.results()["einstein"] = einstein_json(e);
    if (e.applicable) {
        const auto sig = m2::sigma_solve(conn);
        if (sig.ok()) {
            bool zero = true;
            for (const auto& v : m2::nabla_tensor(conn, sig.sigma, e.two_eins).c)
                if (!v.is_zero()) zero = false;
            report.results()["two_eins_parallel"] = zero;
        }
    }
    return kOk;
}

int m2_cmd(const std::string& what, const M2Opts& o, RunReport& report) {
    Json echo{{"metric", o.metric}, {"params", o.params}, {"field", o.field}, {"code", o.code}};
    report.set_input_digest(qgeom::io::digest(echo.dump()));
    if (!o.code.empty() || o.field == "f2") return m2_run<Gf2>(what, o, report);
    if (o.field != "complex") throw qgeom::ValidationError("--field must be complex or f2");
    return m2_run<GaussRational>(what, o, report);
}

Json record_json(const std::string& metric, const m2::f2::QlcRecord& rec) {
    Json j;
    j["metric"] = metric;
    j["code"] = hex_code(rec.code);
    j["nabla_s"] = m2::f2::format_tensor(rec.connection.nabla[m2::S]);
    j["nabla_t"] = m2::f2::format_tensor(rec.connection.nabla[m2::T]);
    j["connection"] = connection_json(rec.connection);
    j["flat"] = rec.flat;
    j["curvature"] = curvature_json(rec.curvature);
    j["einstein"] = einstein_json(rec.einstein);
    if (rec.two_eins_parallel) j["two_eins_parallel"] = *rec.two_eins_parallel;
    j["limit_points"] = rec.limit_labels;
    if (rec.named) j["named_case"] = std::string(1, *rec.named);
    return j;
}

std::string summary_text(const std::string& metric, const m2::f2::EnumerationReport& rep) {
    std::ostringstream os;
    os << "metric " << metric << ": candidates " << rep.stats.candidates << ", sigma rejected " << rep.stats.sigma_rejected
       << ", metric rejected " << rep.stats.metric_rejected << ", QLCs " << rep.records.size() << " (flat "
       << rep.records.size() - rep.curved_count() << ", curved " << rep.curved_count() << ")";
    if (rep.limit_point_count > 0) {
        os << "; limit-family points " << rep.limit_point_count << " (" << rep.limit_distinct << " distinct, "
           << rep.limit_found << " found); curved among limit-family points: " << rep.curved_limit_distinct;
    }
    return os.str();
}

int m2_enumerate_cmd(const M2Opts& o, RunReport& report) {
    struct Job {
        std::string name;
        m2::Metric<Gf2> g;
        std::vector<m2::f2::LimitPoint> limits;
        bool named;
    };
    std::vector<Job> jobs;
    if (!o.metric_entries.empty()) {
        if (o.metric_entries.size() != 4) throw qgeom::ValidationError("--metric-entries takes 4 values g11,g12,g21,g22");
        std::array<Gf2, 4> e;
        for (std::size_t k = 0; k < 4; ++k) {
            if (o.metric_entries[k] != 0 && o.metric_entries[k] != 1) throw qgeom::ValidationError("--metric-entries must be 0 or 1");
            e[k] = Gf2(o.metric_entries[k]);
        }
        std::ostringstream name;
        name << "custom[" << o.metric_entries[0] << o.metric_entries[1] << o.metric_entries[2] << o.metric_entries[3] << "]";
        jobs.push_back({name.str(), m2::make_metric(e), {}, false});
    } else {
        std::vector<std::string> names = o.metric == "both" ? std::vector<std::string>{"g1", "g2"} : std::vector<std::string>{o.metric};
        for (const auto& n : names) {
            const auto id = metric_id(n);
            jobs.push_back({n, m2::metric_of<Gf2>(id), m2::f2::limit_points(id), true});
        }
    }
    report.set_input_digest(qgeom::io::digest(Json{{"metric", o.metric}, {"entries", o.metric_entries}}.dump()));

    std::ofstream records;
    if (!o.records.empty()) {
        records.open(o.records);
        if (!records) throw qgeom::io::IoError("cannot open '" + o.records + "' for writing");
    }
    const int threads = qgeom::configured_threads();
    Json metrics = Json::array();
    for (const auto& job : jobs) {
        const auto rep = m2::f2::enumerate(job.g, job.limits, threads);
        if (records) {
            for (const auto& rec : rep.records) records << record_json(job.name, rec).dump() << '\n';
        }
        const std::string line = summary_text(job.name, rep);
        std::cerr << line << '\n';

        Json named = Json::object();
        std::map<std::string, std::size_t> classes;
        for (const auto& rec : rep.records) {
            if (rec.named) named[std::string(1, *rec.named)] = Json{{"code", hex_code(rec.code)}, {"flat", rec.flat}};
            if (rec.flat) {
                ++classes["flat"];
            } else if (rec.einstein.applicable) {
                ++classes["curved, S+ = S-"];
            } else {
                ++classes["curved, S+ != S-"];
            }
        }
        Json m;
        m["metric"] = job.name;
        m["candidates"] = rep.stats.candidates;
        m["sigma_rejected"] = rep.stats.sigma_rejected;
        m["metric_rejected"] = rep.stats.metric_rejected;
        m["qlcs"] = rep.records.size();
        m["flat"] = rep.records.size() - rep.curved_count();
        m["curved"] = rep.curved_count();
        m["classes"] = classes;
        m["limit_points"] = rep.limit_point_count;
        m["limit_distinct"] = rep.limit_distinct;
        m["limit_found"] = rep.limit_found;
        m["curved_limit_points"] = rep.curved_limit_distinct;
        m["named_cases"] = named;
        m["summary"] = line;
        metrics.push_back(m);
        std::cerr << "  " << job.name << " scan: " << rep.seconds << " s on " << threads << " thread(s)\n";

        report.assertion(job.name + ": every candidate classified", rep.stats.candidates == m2::f2::kCodeCount);
        if (job.named) {
            report.assertion(job.name + ": all limit-family connections found", rep.limit_found == rep.limit_distinct);
            for (const char k : {'a', 'b', 'c'}) {
                const std::string key(1, k);
                report.assertion(job.name + ": case (" + key + ") present and flat",
                                 named.contains(key) && named[key]["flat"].get<bool>());
            }
        }
    }
    if (!o.records.empty()) {
        records.close();
        if (!records) throw qgeom::io::IoError("write to '" + o.records + "' failed");
        report.results()["records_file"] = o.records;
    }
    report.results()["metrics"] = metrics;
    return kOk;
}

// ---------------------------------------------------------------------------
// demorgan

struct DmOpts {
    std::size_t max_vertices = 3;
    std::size_t random_graphs = 64;
};

int demorgan_cmd(const Common& c, const DmOpts& o, RunReport& report) {
    if (o.max_vertices < 1 || o.max_vertices > 8) throw qgeom::ValidationError("--max-vertices must lie in 1..8");
    namespace dm = qgeom::demorgan;
    dm::VerifyOptions vo;
    vo.exhaustive_max_vertices = std::min<std::size_t>(o.max_vertices, 4);
    vo.random_max_vertices = o.max_vertices;
    vo.random_graphs = o.random_graphs;
    vo.seed = c.seed;
    report.set_input_digest(qgeom::io::digest(Json{{"max_vertices", o.max_vertices}, {"random_graphs", o.random_graphs},
                                                   {"seed", c.seed}}.dump()));
    report.results()["exhaustive_max_vertices"] = vo.exhaustive_max_vertices;
    report.results()["random_max_vertices"] = vo.random_max_vertices;

    const auto emit = [&](const char* suite, const dm::CheckReport& rep) {
        Json entries = Json::array();
        for (const auto& e : rep.entries) {
            Json j{{"name", e.name}, {"checked", e.checked}, {"failed", e.failed}};
            if (!e.first_failure.empty()) j["first_failure"] = e.first_failure;
            entries.push_back(j);
            report.assertion(std::string(suite) + ": " + e.name, e.failed == 0);
        }
        report.results()[suite] = Json{{"graphs", rep.graphs}, {"checks", rep.total_checks()}, {"entries", entries}};
    };
    emit("axioms", dm::verify_calculus_axioms(vo));
    emit("duality", dm::duality_diffeomorphism_check(vo));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qgeom: quantum Riemannian geometry workbench"};
    app.require_subcommand(1);
    const std::vector<std::string> args(argv + 1, argv + argc);

    Common common;
    MarkovOpts mo;
    SchOpts so;
    M2Opts m2o;
    DmOpts dmo;
    std::string name;
    std::function<int(RunReport&)> action;

    const auto leaf = [&](CLI::App* group, const std::string& sub, const std::string& help, bool input,
                          std::function<int(RunReport&)> fn) {
        CLI::App* cmd = group->add_subcommand(sub, help);
        add_common(cmd, common, input);
        cmd->callback([&, group, sub, fn] {
            name = group->get_name() + " " + sub;
            action = fn;
        });
        return cmd;
    };

    auto* markov = app.add_subcommand("markov", "Markov chains from stochastic metric weights");
    markov->require_subcommand(1);
    auto* mstep = leaf(markov, "step", "iterate the chain", true, [&](RunReport& r) { return markov_step_cmd(common, mo, r); });
    auto* mequiv = leaf(markov, "equiv", "chain step against the diffusion form", true,
                        [&](RunReport& r) { return markov_equiv_cmd(common, mo, r); });
    auto* mtrop = leaf(markov, "tropical", "tropical lengths and path sums", true,
                       [&](RunReport& r) { return markov_tropical_cmd(common, mo, r); });
    auto* mshort = leaf(markov, "shortest", "Lawvere shortest path", true,
                        [&](RunReport& r) { return markov_shortest_cmd(common, mo, r); });
    for (auto* cmd : {mstep, mequiv, mtrop}) cmd->add_option("--steps", mo.steps, "number of steps")->capture_default_str();
    for (auto* cmd : {mstep, mequiv}) cmd->add_option("--csv", common.csv, "write the trajectory as CSV");
    mshort->add_option("--from", mo.from, "source vertex label")->required();
    mshort->add_option("--to", mo.to, "target vertex label")->required();

    auto* schr = app.add_subcommand("schrodinger", "discrete Schrödinger process");
    schr->require_subcommand(1);
    auto* sev = leaf(schr, "evolve", "iterate the step on an input graph", true,
                     [&](RunReport& r) { return schrodinger_evolve_cmd(common, so, r); });
    sev->add_option("--steps", so.steps, "number of steps")->capture_default_str();
    sev->add_option("--csv", common.csv, "write |psi|^2 per step as CSV");
    sev->add_option("--phi", so.phi, "use the unitary circle connection at this angle")
        ->each([&](const std::string&) { so.phi_given = true; });
    auto* sscan = leaf(schr, "unitary-scan", "unitarity over a (phi, alpha, beta) grid", false,
                       [&](RunReport& r) { return schrodinger_scan_cmd(common, so, r); });
    sscan->add_option("--phi-steps", so.phi_steps)->capture_default_str();
    sscan->add_option("--alpha-steps", so.alpha_steps)->capture_default_str();
    sscan->add_option("--beta-steps", so.beta_steps)->capture_default_str();
    sscan->add_option("--iterations", so.iterations, "also iterate one random step this many times")->capture_default_str();
    auto* stwo = leaf(schr, "two-state", "the two-point unitary circle", false,
                      [&](RunReport& r) { return schrodinger_two_state_cmd(common, so, r); });
    stwo->add_option("--alpha", so.alpha, "p(1->0)")->capture_default_str();
    stwo->add_option("--beta", so.beta, "p(0->1)")->capture_default_str();
    stwo->add_option("--phi", so.phi, "circle angle")->capture_default_str();

    auto* m2g = app.add_subcommand("m2", "geometry of 2x2 matrices");
    m2g->require_subcommand(1);
    for (const char* what : {"family", "check", "curvature", "einstein"}) {
        const std::string w = what;
        auto* cmd = leaf(m2g, w, "QLC family member: " + w, false, [&, w](RunReport& r) { return m2_cmd(w, m2o, r); });
        cmd->add_option("--metric", m2o.metric, "g1 or g2")->capture_default_str();
        cmd->add_option("--params", m2o.params, "family parameters, comma separated")->delimiter(',');
        cmd->add_option("--field", m2o.field, "complex or f2")->capture_default_str();
        cmd->add_option("--code", m2o.code, "GF(2) connection code in hex (implies --field f2)");
    }
    auto* menum = leaf(m2g, "enumerate-f2", "exhaustive GF(2) search", false,
                       [&](RunReport& r) { return m2_enumerate_cmd(m2o, r); });
    menum->add_option("--metric", m2o.metric, "g1, g2 or both")->capture_default_str();
    menum->add_option("--metric-entries", m2o.metric_entries, "custom metric g11,g12,g21,g22")->delimiter(',');
    menum->add_option("--records", m2o.records, "JSON-lines file, one record per QLC");

    auto* dmg = app.add_subcommand("demorgan", "de Morgan duality of digital calculi");
    dmg->require_subcommand(1);
    auto* dver = leaf(dmg, "verify", "axioms and duality checks", false,
                      [&](RunReport& r) { return demorgan_cmd(common, dmo, r); });
    dver->add_option("--max-vertices", dmo.max_vertices)->capture_default_str();
    dver->add_option("--random-graphs", dmo.random_graphs, "random graphs per size above 4")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    omp_set_num_threads(qgeom::configured_threads());
    RunReport report(name, args);
    report.results()["seed"] = common.seed;
    int code = kOk;
    try {
        code = action(report);
        const std::string text = report.dump() + "\n";
        if (common.output.empty()) {
            std::cout << text;
        } else {
            qgeom::io::write_file(common.output, text);
        }
    } catch (const qgeom::io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const qgeom::io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const qgeom::QgeomError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    if (code != kOk) return code;
    if (!report.all_passed()) {
        for (const auto& a : report.json()["assertions"])
            if (!a["passed"].get<bool>()) std::cerr << "assertion failed: " << a["name"].get<std::string>() << '\n';
        for (const auto& r : report.json()["residuals"])
            if (!r["passed"].get<bool>())
                std::cerr << "residual above tolerance: " << r["name"].get<std::string>() << " = " << r["value"] << '\n';
        return kAssertionFailed;
    }
    return kOk;
}
