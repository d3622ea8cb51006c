#include "qgeom/demorgan.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace qgeom::demorgan;
using qgeom::Arrow;

namespace {

bool in(Mask m, std::size_t k) { return (m >> k & 1U) != 0; }

// One-end filter written per arrow, independent of the tail/head tables.
Mask d_oracle(const PowerSetGraph& g, Mask a) {
    Mask out = 0;
    for (std::size_t k = 0; k < g.arrow_count(); ++k) {
        const Arrow& e = g.arrows()[k];
        if (in(a, e.tail) != in(a, e.head)) out |= Mask{1} << k;
    }
    return out;
}

Mask dual_d_oracle(const PowerSetGraph& g, Mask a) {
    Mask out = 0;
    for (std::size_t k = 0; k < g.arrow_count(); ++k) {
        const Arrow& e = g.arrows()[k];
        if (in(a, e.tail) == in(a, e.head)) out |= Mask{1} << k;
    }
    return out;
}

}  // namespace

TEST_CASE("Boolean ring basics") {
    const Mask all = 0b111;
    for (Mask a = 0; a <= all; ++a) {
        CHECK(add(a, a) == 0);
        for (Mask b = 0; b <= all; ++b) {
            CHECK(complement(mul(a, b), all) == dual_mul(complement(a, all), complement(b, all)));
            CHECK(complement(add(a, b), all) == dual_add(complement(a, all), complement(b, all), all));
        }
    }
    const Mask all4 = 0b1111;
    for (Mask a = 0; a <= all4; ++a)
        for (Mask b = 0; b <= all4; ++b)
            CHECK(complement(add(a, b), all4) == dual_add(complement(a, all4), complement(b, all4), all4));
}

TEST_CASE("graph selections enumerate ordered pairs") {
    CHECK(PowerSetGraph::possible_arrows(3) == 6);
    const auto full = PowerSetGraph::from_selection(3, 0b111111);
    CHECK(full.arrow_count() == 6);
    CHECK(full.arrows()[0] == Arrow{0, 1});
    CHECK(full.arrows()[5] == Arrow{2, 1});
    CHECK(PowerSetGraph::from_selection(3, 0).arrow_count() == 0);
}

TEST_CASE("form actions and differentials on the triangle") {
    const auto tri = PowerSetGraph::from_selection(3, 0b111111);
    const Mask all_arrows = tri.arrow_all();
    for (Mask w = 0; w <= all_arrows; ++w) CHECK(left_act(tri, tri.vertex_all(), w) == w);
    for (std::size_t v = 0; v < 3; ++v) {
        Mask touching = 0;
        for (std::size_t k = 0; k < tri.arrow_count(); ++k)
            if (tri.arrows()[k].tail == v || tri.arrows()[k].head == v) touching |= Mask{1} << k;
        CHECK(d(tri, Mask{1} << v) == touching);
    }
}

TEST_CASE("differentials agree with per-arrow oracles on all graphs up to 4 vertices") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::uint64_t graphs = std::uint64_t{1} << PowerSetGraph::possible_arrows(n);
        for (std::uint64_t sel = 0; sel < graphs; ++sel) {
            const auto g = PowerSetGraph::from_selection(n, sel);
            for (Mask a = 0; a <= g.vertex_all(); ++a) {
                REQUIRE(d(g, a) == d_oracle(g, a));
                REQUIRE(d_inner(g, a) == d_oracle(g, a));
                REQUIRE(dual_d(g, a) == dual_d_oracle(g, a));
                REQUIRE(dual_d(g, complement(a, g.vertex_all())) == complement(d(g, a), g.arrow_all()));
            }
        }
    }
}

TEST_CASE("calculus axioms and duality: exhaustive for three vertices") {
    VerifyOptions opts;
    opts.exhaustive_max_vertices = 3;
    opts.random_max_vertices = 3;
    const auto axioms = verify_calculus_axioms(opts);
    const auto dual = duality_diffeomorphism_check(opts);
    CHECK(axioms.passed());
    CHECK(dual.passed());
    // 1 + 4 + 64 digraphs on one, two and three vertices.
    CHECK(axioms.graphs == 69);
    CHECK(dual.graphs == 69);
    for (const auto& e : dual.entries) {
        INFO(e.name << ": " << e.first_failure);
        CHECK(e.failed == 0);
        CHECK(e.checked > 0);
    }
}

TEST_CASE("duality exhaustive for four vertices; both suites sampled up to six") {
    VerifyOptions opts;
    opts.exhaustive_max_vertices = 4;
    opts.random_max_vertices = 6;
    opts.random_graphs = 16;
    const auto dual = duality_diffeomorphism_check(opts);
    CHECK(dual.passed());
    CHECK(dual.graphs == 69 + 4096 + 32);
    // The axioms are exhaustive up to three vertices and sampled beyond.
    opts.exhaustive_max_vertices = 3;
    const auto axioms = verify_calculus_axioms(opts);
    CHECK(axioms.passed());
    CHECK(axioms.graphs == 69 + 3 * 16);
}

TEST_CASE("single vertex passes trivially") {
    const PowerSetGraph g(1, {});
    CheckReport rep;
    check_axioms_on(g, VerifyOptions{}, 1, rep);
    check_duality_on(g, VerifyOptions{}, 1, rep);
    CHECK(rep.passed());
}

TEST_CASE("a broken dual differential is detected") {
    CheckReport rep;
    rep.record("probe", true);
    rep.record("probe", false, "graph 7");
    CHECK_FALSE(rep.passed());
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].checked == 2);
    CHECK(rep.entries[0].failed == 1);
    CHECK(rep.entries[0].first_failure == "graph 7");
}

TEST_CASE("unit-interval operations") {
    qgeom::testing::Rng rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = qgeom::testing::random_real(rng, 5, 0.0, 1.0);
        const auto g = qgeom::testing::random_real(rng, 5, 0.0, 1.0);
        const UnitFunction uf(f.values.begin(), f.values.end()), ug(g.values.begin(), g.values.end());
        const auto cc = complement(complement(uf));
        for (std::size_t x = 0; x < 5; ++x) CHECK(cc[x] == doctest::Approx(uf[x]).epsilon(1e-15));
        const auto lhs = complement(pointwise_min(uf, ug));
        const auto rhs = pointwise_max(complement(uf), complement(ug));
        CHECK(lhs == rhs);
        // complement(f g) = f̄ ⊕ ḡ.
        const auto prod = complement(times(uf, ug));
        const auto sum = oplus(complement(uf), complement(ug));
        for (std::size_t x = 0; x < 5; ++x) CHECK(std::abs(prod[x] - sum[x]) < 1e-15);
        const auto hh = heyting_hom(uf, ug), mh = multiplicative_hom(uf, ug);
        for (std::size_t x = 0; x < 5; ++x) {
            CHECK(hh[x] == (uf[x] <= ug[x] ? 1.0 : ug[x]));
            CHECK(mh[x] == (uf[x] <= ug[x] ? 1.0 : ug[x] / uf[x]));
            CHECK(sum[x] >= 0.0);
            CHECK(sum[x] <= 1.0);
        }
    }
    const UnitFunction h{0.5};
    const auto left = times(h, oplus(h, h));
    const auto right = oplus(times(h, h), times(h, h));
    CHECK(left[0] == doctest::Approx(0.375));
    CHECK(right[0] == doctest::Approx(0.4375));
    CHECK_THROWS_AS(require_unit({0.2, 1.5}), qgeom::ValidationError);
    CHECK_THROWS_AS(oplus({-0.1}, {0.5}), qgeom::ValidationError);
}
