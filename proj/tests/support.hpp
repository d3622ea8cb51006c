#pragma once

// Random instances shared by the test suites.

#include "qgeom/graph.hpp"
#include "qgeom/graph_calculus.hpp"

#include <complex>
#include <random>
#include <vector>

namespace qgeom::testing {

using Rng = std::mt19937_64;

/// Random connected bidirected graph on n vertices: a random spanning tree
/// plus each remaining pair with probability extra.
inline GraphCalculus random_bidirected(Rng& rng, std::size_t n, double extra = 0.4) {
    std::vector<Arrow> arrows;
    std::vector<std::vector<bool>> joined(n, std::vector<bool>(n, false));
    auto join = [&](std::size_t x, std::size_t y) {
        if (x == y || joined[x][y]) return;
        joined[x][y] = joined[y][x] = true;
        arrows.push_back({x, y});
        arrows.push_back({y, x});
    };
    for (std::size_t v = 1; v < n; ++v) join(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v);
    std::bernoulli_distribution coin(extra);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (coin(rng)) join(x, y);
    return GraphCalculus(n, arrows);
}

/// Stochastic weights: per vertex the outgoing weights sum to a random
/// total in [0, 1], with about one arrow in ten set to zero.
inline MetricWeights<double> random_stochastic(Rng& rng, const GraphCalculus& calc) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(calc.arrow_count(), 0.0);
    for (std::size_t x = 0; x < calc.vertex_count(); ++x) {
        double sum = 0.0;
        for (std::size_t a : calc.out_arrows(x)) {
            w[a] = u(rng) < 0.1 ? 0.0 : u(rng);
            sum += w[a];
        }
        const double total = u(rng);
        if (sum > 0.0)
            for (std::size_t a : calc.out_arrows(x)) w[a] *= total / sum;
    }
    return MetricWeights<double>(w, true);
}

inline VertexFunction<double> random_real(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    VertexFunction<double> f(n);
    for (auto& v : f.values) v = u(rng);
    return f;
}

inline VertexFunction<double> random_distribution(Rng& rng, std::size_t n) {
    auto f = random_real(rng, n, 0.0, 1.0);
    double s = 0.0;
    for (double v : f.values) s += v;
    for (auto& v : f.values) v /= s;
    return f;
}

inline VertexFunction<Complex> random_wave(Rng& rng, std::size_t n) {
    std::normal_distribution<double> g;
    VertexFunction<Complex> psi(n);
    double s = 0.0;
    for (auto& z : psi.values) {
        z = {g(rng), g(rng)};
        s += std::norm(z);
    }
    for (auto& z : psi.values) z /= std::sqrt(s);
    return psi;
}

inline VertexFunction<Complex> complexify(const VertexFunction<double>& f) {
    VertexFunction<Complex> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

template <class T>
double max_abs(const std::vector<T>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, Field<T>::magnitude(x));
    return m;
}

}  // namespace qgeom::testing
