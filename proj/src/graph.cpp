#include "qgeom/graph.hpp"

#include "qgeom/errors.hpp"

#include <string>

namespace qgeom {

GraphCalculus::GraphCalculus(std::size_t vertex_count, std::vector<Arrow> arrows,
                             std::vector<std::string> labels)
    : n_(vertex_count), arrows_(std::move(arrows)), labels_(std::move(labels)) {
    if (labels_.empty()) {
        for (std::size_t x = 0; x < n_; ++x) labels_.push_back(std::to_string(x));
    }
    if (labels_.size() != n_) throw GraphError("label count does not match vertex count");

    const std::size_t m = arrows_.size();
    arrow_table_.assign(n_ * n_, npos);
    out_.assign(n_, {});
    in_.assign(n_, {});
    for (std::size_t a = 0; a < m; ++a) {
        const Arrow& e = arrows_[a];
        if (e.tail >= n_ || e.head >= n_) {
            throw GraphError("arrow " + std::to_string(a) + " references a vertex out of range");
        }
        if (e.tail == e.head) {
            throw GraphError("self-arrow at vertex " + labels_[e.tail] + " is not allowed");
        }
        std::size_t& slot = arrow_table_[e.tail * n_ + e.head];
        if (slot != npos) {
            throw GraphError("duplicate arrow " + labels_[e.tail] + "->" + labels_[e.head]);
        }
        slot = a;
        out_[e.tail].push_back(a);
        in_[e.head].push_back(a);
    }

    reverse_.assign(m, npos);
    for (std::size_t a = 0; a < m; ++a) {
        reverse_[a] = arrow_table_[arrows_[a].head * n_ + arrows_[a].tail];
        if (reverse_[a] == npos) bidirected_ = false;
    }

    pair_table_.assign(m * m, npos);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b : out_[arrows_[a].head]) {
            pair_table_[a * m + b] = pairs_.size();
            pairs_.push_back({a, b});
        }
    }
}

GraphCalculus GraphCalculus::two_point() { return GraphCalculus(2, {{0, 1}, {1, 0}}); }

GraphCalculus GraphCalculus::complete(std::size_t n) {
    std::vector<Arrow> arrows;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y) arrows.push_back({x, y});
    return GraphCalculus(n, std::move(arrows));
}

GraphCalculus GraphCalculus::bidirected_path(std::size_t n) {
    std::vector<Arrow> arrows;
    for (std::size_t x = 0; x + 1 < n; ++x) {
        arrows.push_back({x, x + 1});
        arrows.push_back({x + 1, x});
    }
    return GraphCalculus(n, std::move(arrows));
}

std::optional<std::size_t> GraphCalculus::find_arrow(std::size_t tail, std::size_t head) const {
    if (tail >= n_ || head >= n_) return std::nullopt;
    const std::size_t a = arrow_table_[tail * n_ + head];
    if (a == npos) return std::nullopt;
    return a;
}

void GraphCalculus::require_bidirected(const char* operation) const {
    if (!bidirected_) throw GraphError(std::string(operation) + " requires a bidirected graph");
}

}  // namespace qgeom
