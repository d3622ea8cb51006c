#pragma once

// Dense matrices over GF(2) with rows packed into 64-bit words, and
// Gauss-Jordan reduction that records the row transform.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qgeom::gf2 {

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words() const { return words_; }

    bool get(std::size_t r, std::size_t c) const { return (row(r)[c / 64] >> (c % 64)) & 1U; }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        if (v) row(r)[c / 64] |= bit; else row(r)[c / 64] &= ~bit;
    }

    std::uint64_t* row(std::size_t r) { return data_.data() + r * words_; }
    const std::uint64_t* row(std::size_t r) const { return data_.data() + r * words_; }

    void xor_row(std::size_t dst, std::size_t src) {
        std::uint64_t* d = row(dst);
        const std::uint64_t* s = row(src);
        for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t w = 0; w < words_; ++w) std::swap(row(a)[w], row(b)[w]);
    }

    /// Parity of the AND of row r with a packed vector of the same width.
    bool dot(std::size_t r, const std::uint64_t* v) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_; ++w) acc ^= row(r)[w] & v[w];
        return std::popcount(acc) & 1;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

/// transform · A = reduced, with reduced in reduced row echelon form and the
/// first rank rows carrying the pivots.
struct RowReduction {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
    BitMatrix reduced;
    BitMatrix transform;
};

inline RowReduction row_reduce(BitMatrix a) {
    RowReduction out;
    out.transform = BitMatrix::identity(a.rows());
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && !a.get(p, c)) ++p;
        if (p == a.rows()) continue;
        a.swap_rows(r, p);
        out.transform.swap_rows(r, p);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i != r && a.get(i, c)) {
                a.xor_row(i, r);
                out.transform.xor_row(i, r);
            }
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.reduced = std::move(a);
    return out;
}

}  // namespace qgeom::gf2
