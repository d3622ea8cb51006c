#include "qgeom/markov.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

namespace qgeom::markov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string arrow_name(const GraphCalculus& calc, std::size_t a) {
    const Arrow& e = calc.arrow(a);
    return calc.labels()[e.tail] + "->" + calc.labels()[e.head];
}

}  // namespace

StochasticReport validate_stochastic(const GraphCalculus& calc, const Weights& w, double eps) {
    calc.require_bidirected("validate_stochastic");
    detail::check_size<double>(w.size(), calc.arrow_count(), "metric weights");
    StochasticReport report;
    std::vector<double> out(calc.vertex_count(), 0.0);
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        if (w[a] < 0.0) {
            report.violations.push_back({StochasticViolation::Kind::NegativeWeight, a, w[a],
                                         "arrow " + arrow_name(calc, a)});
        }
        out[calc.arrow(a).tail] += w[a];
    }
    for (std::size_t x = 0; x < calc.vertex_count(); ++x) {
        if (out[x] > 1.0 + eps) {
            report.violations.push_back({StochasticViolation::Kind::ExcessOutflow, x, out[x],
                                         "vertex " + calc.labels()[x]});
        }
    }
    report.passed = report.violations.empty();
    return report;
}

double MarkovChain::row_sum(std::size_t x) const {
    double s = 0.0;
    for (std::size_t y = 0; y < n_; ++y) s += (*this)(x, y);
    return s;
}

MarkovChain MarkovChain::identity(std::size_t n) {
    MarkovChain m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

MarkovChain MarkovChain::operator*(const MarkovChain& o) const {
    MarkovChain r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += v * o(k, j);
        }
    return r;
}

MarkovChain MarkovChain::power(unsigned n) const {
    MarkovChain r = identity(n_);
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
}

MarkovChain to_transition_matrix(const GraphCalculus& calc, const Weights& w, double eps) {
    const StochasticReport report = validate_stochastic(calc, w, eps);
    if (!report.passed) {
        throw ValidationError("weights are not stochastic at " + report.violations.front().where);
    }
    MarkovChain chain(calc.vertex_count());
    for (std::size_t x = 0; x < calc.vertex_count(); ++x) chain(x, x) = 1.0;
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const Arrow& e = calc.arrow(a);
        chain(e.tail, e.head) = w[a];
        chain(e.tail, e.tail) -= w[a];
    }
    return chain;
}

RealFunction markov_step(const MarkovChain& chain, const RealFunction& f) {
    detail::check_size<double>(f.size(), chain.size(), "distribution");
    RealFunction out(chain.size());
    for (std::size_t y = 0; y < chain.size(); ++y)
        for (std::size_t x = 0; x < chain.size(); ++x) out[x] += f[y] * chain(y, x);
    return out;
}

std::pair<RealFunction, RealFunction> p_q(const GraphCalculus& calc, const Weights& w) {
    calc.require_bidirected("p_q");
    RealFunction p(calc.vertex_count());
    RealFunction q(calc.vertex_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        const std::size_t x = calc.arrow(a).tail;
        p[x] += w[a];
        q[x] += w[calc.reverse(a)];
    }
    return {p, q};
}

RealFunction diffusion_step(const GraphCalculus& calc, const Weights& w, const RealFunction& f) {
    const auto [p, q] = p_q(calc, w);
    RealFunction minus_lap = -1.0 * laplacian_theta(calc, w, f);
    return f + minus_lap + (q - p) * f;
}

TropicalLengths tropicalize(const GraphCalculus& calc, const Weights& w) {
    const auto [p, q] = p_q(calc, w);
    TropicalLengths t;
    t.arrow.reserve(calc.arrow_count());
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) t.arrow.push_back(w[a] > 0.0 ? -std::log(w[a]) : kInf);
    for (std::size_t x = 0; x < calc.vertex_count(); ++x) {
        const double stay = 1.0 - p[x];
        t.self.push_back(stay > 0.0 ? -std::log(stay) : kInf);
    }
    return t;
}

Weights detropicalize(const GraphCalculus& calc, const TropicalLengths& lengths) {
    detail::check_size<double>(lengths.arrow.size(), calc.arrow_count(), "tropical lengths");
    std::vector<double> w;
    w.reserve(lengths.arrow.size());
    for (double l : lengths.arrow) w.push_back(std::exp(-l));
    return Weights(std::move(w), true);
}

bool satisfies_restriction(const GraphCalculus& calc, const TropicalLengths& lengths, double eps) {
    std::vector<double> total(calc.vertex_count(), 0.0);
    for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
        if (lengths.arrow[a] < 0.0) return false;
        total[calc.arrow(a).tail] += std::exp(-lengths.arrow[a]);
    }
    for (double t : total)
        if (t > 1.0 + eps) return false;
    return true;
}

double n_step_path_sum(const GraphCalculus& calc, const TropicalLengths& lengths, std::size_t x, std::size_t y,
                       unsigned n) {
    std::function<double(std::size_t, unsigned, double)> walk = [&](std::size_t u, unsigned left,
                                                                   double length) -> double {
        if (left == 0) return u == y ? std::exp(-length) : 0.0;
        double sum = walk(u, left - 1, length + lengths.self[u]);
        for (std::size_t a : calc.out_arrows(u)) sum += walk(calc.arrow(a).head, left - 1, length + lengths.arrow[a]);
        return sum;
    };
    return walk(x, n, 0.0);
}

ShortestPath lawvere_shortest(const GraphCalculus& calc, const TropicalLengths& lengths, std::size_t x,
                              std::size_t y) {
    const std::size_t n = calc.vertex_count();
    if (x >= n || y >= n) throw GraphError("lawvere_shortest: vertex out of range");

    // Distances to y over reversed arrows.
    std::vector<double> to_y(n, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    to_y[y] = 0.0;
    queue.push({0.0, y});
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > to_y[v]) continue;
        for (std::size_t a : calc.in_arrows(v)) {
            const double nd = d + lengths.arrow[a];
            const std::size_t u = calc.arrow(a).tail;
            if (nd < to_y[u]) {
                to_y[u] = nd;
                queue.push({nd, u});
            }
        }
    }
    ShortestPath result;
    result.distance = to_y[x];
    if (to_y[x] == kInf) return result;

    auto tight = [&](std::size_t a) {
        const Arrow& e = calc.arrow(a);
        if (to_y[e.head] == kInf || lengths.arrow[a] == kInf) return false;
        const double slack = lengths.arrow[a] + to_y[e.head] - to_y[e.tail];
        return std::abs(slack) <= 1e-12 * std::max(1.0, to_y[e.tail]);
    };
    // Hop counts to y inside the subgraph of tight arrows.
    std::vector<std::size_t> hops(n, GraphCalculus::npos);
    std::deque<std::size_t> frontier{y};
    hops[y] = 0;
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop_front();
        for (std::size_t a : calc.in_arrows(v)) {
            const std::size_t u = calc.arrow(a).tail;
            if (hops[u] == GraphCalculus::npos && tight(a)) {
                hops[u] = hops[v] + 1;
                frontier.push_back(u);
            }
        }
    }
    std::size_t u = x;
    result.path.push_back(u);
    while (u != y) {
        std::size_t next = GraphCalculus::npos;
        for (std::size_t a : calc.out_arrows(u)) {
            const std::size_t v = calc.arrow(a).head;
            if (tight(a) && hops[v] + 1 == hops[u] && v < next) next = v;
        }
        u = next;
        result.path.push_back(u);
    }
    return result;
}

}  // namespace qgeom::markov
