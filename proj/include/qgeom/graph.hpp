#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgeom {

struct Arrow {
    std::size_t tail = 0;
    std::size_t head = 0;
    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A composable pair (a, b) of arrows, head(a) == tail(b). Indexes the basis
/// ω_a ⊗ ω_b of Ω¹ ⊗_A Ω¹.
struct ArrowPair {
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Finite directed graph without self-arrows or parallel arrows, carrying the
/// index tables needed by the first-order calculus.
class GraphCalculus {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    GraphCalculus() = default;
    GraphCalculus(std::size_t vertex_count, std::vector<Arrow> arrows,
                  std::vector<std::string> labels = {});

    /// 0 <-> 1; arrow 0 is 0→1 and arrow 1 is 1→0.
    static GraphCalculus two_point();
    static GraphCalculus complete(std::size_t n);
    static GraphCalculus bidirected_path(std::size_t n);

    std::size_t vertex_count() const { return n_; }
    std::size_t arrow_count() const { return arrows_.size(); }
    std::size_t pair_count() const { return pairs_.size(); }

    const Arrow& arrow(std::size_t a) const { return arrows_[a]; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const ArrowPair& pair(std::size_t p) const { return pairs_[p]; }
    const std::vector<ArrowPair>& pairs() const { return pairs_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> find_arrow(std::size_t tail, std::size_t head) const;
    /// Index of the reverse arrow, npos if absent.
    std::size_t reverse(std::size_t a) const { return reverse_[a]; }
    /// Index of the composable pair (a, b), npos if head(a) != tail(b).
    std::size_t pair_index(std::size_t a, std::size_t b) const {
        return pair_table_[a * arrows_.size() + b];
    }

    std::span<const std::size_t> out_arrows(std::size_t x) const { return out_[x]; }
    std::span<const std::size_t> in_arrows(std::size_t x) const { return in_[x]; }

    bool is_bidirected() const { return bidirected_; }
    void require_bidirected(const char* operation) const;

    /// Tail vertex of the first arrow and head vertex of the second.
    std::size_t pair_tail(std::size_t p) const { return arrows_[pairs_[p].first].tail; }
    std::size_t pair_head(std::size_t p) const { return arrows_[pairs_[p].second].head; }

private:
    std::size_t n_ = 0;
    std::vector<Arrow> arrows_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> arrow_table_;
    std::vector<std::size_t> reverse_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<ArrowPair> pairs_;
    std::vector<std::size_t> pair_table_;
    bool bidirected_ = true;
};

}  // namespace qgeom
