#include "qgeom/m2_enumeration.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

using qgeom::Gf2;
using namespace qgeom::m2;
using namespace qgeom::m2::f2;

namespace {

const EnumerationReport& report_for(MetricId id) {
    static const EnumerationReport g1 = enumerate(MetricId::G1, 0);
    static const EnumerationReport g2 = enumerate(MetricId::G2, 0);
    return id == MetricId::G1 ? g1 : g2;
}

const QlcRecord* find(const EnumerationReport& rep, Code code) {
    auto it = std::lower_bound(rep.records.begin(), rep.records.end(), code,
                               [](const QlcRecord& r, Code c) { return r.code < c; });
    return it != rep.records.end() && it->code == code ? &*it : nullptr;
}

Tensor<Gf2> t(std::size_t i, std::size_t j) { return Tensor<Gf2>::basis(i, j); }

// e_i⊗(s+t).
Tensor<Gf2> times_s_plus_t(std::size_t i) { return t(i, S) + t(i, T); }

bool same_set(const std::vector<Code>& a, const std::vector<Code>& b) { return a == b; }

}  // namespace

TEST_CASE("encoding round trip and torsion pinning") {
    qgeom::testing::Rng rng(61);
    std::uniform_int_distribution<Code> code(0, kCodeCount - 1);
    for (int trial = 0; trial < 2000; ++trial) {
        const Code c = code(rng);
        const auto conn = decode(c);
        CHECK(encode(conn) == c);
        CHECK(torsion_free(conn));
        for (std::size_t e = 0; e < 2; ++e) CHECK(conn.nabla[e].at(S, T) == conn.nabla[e].at(T, S));
    }
    for (unsigned n = 0; n < 16; ++n) CHECK(nibble(from_nibble(static_cast<std::uint8_t>(n))) == n);
    auto broken = decode(0);
    broken.nabla[S].at(S, T) = M2<Gf2>::identity();
    CHECK_THROWS_AS(encode(broken), qgeom::ValidationError);
}

TEST_CASE("fast kernel agrees with the generic path on windows of the search space") {
    for (const MetricId id : {MetricId::G1, MetricId::G2}) {
        const auto g = metric_of<Gf2>(id);
        const FastKernel kernel(g);
        std::vector<Code> starts{0, 0x666000, 0x242000, 0xfff000, 0x800000};
        for (const auto& rec : report_for(id).records)
            if (starts.size() < 12 && rec.flat == false) starts.push_back(rec.code & ~Code{0xfff});
        for (const Code begin : starts) {
            ScanStats ref_stats, fast_stats;
            const auto ref = scan_reference(g, begin, begin + 0x1000, &ref_stats);
            const auto fast = scan_fast_serial(kernel, begin, begin + 0x1000, &fast_stats);
            CHECK(same_set(ref, fast));
            CHECK(ref_stats.sigma_rejected == fast_stats.sigma_rejected);
            CHECK(ref_stats.metric_rejected == fast_stats.metric_rejected);
        }
    }
}

TEST_CASE("parallel scans are deterministic and match the serial kernel") {
    const FastKernel kernel(metric_g1<Gf2>());
    const Code end = kCodeCount / 4;
    ScanStats serial_stats;
    const auto serial = scan_fast_serial(kernel, 0, end, &serial_stats);
    for (int threads : {1, 2, 3, 8}) {
        ScanStats stats;
        const auto par = scan_parallel(kernel, 0, end, threads, &stats);
        CHECK(par == serial);
        CHECK(stats.accepted == serial_stats.accepted);
        CHECK(stats.sigma_rejected == serial_stats.sigma_rejected);
    }
    CHECK(std::is_sorted(serial.begin(), serial.end()));
}

TEST_CASE("full enumeration: every candidate is accounted for and runs repeat exactly") {
    for (const MetricId id : {MetricId::G1, MetricId::G2}) {
        const auto& rep = report_for(id);
        CHECK(rep.stats.candidates == kCodeCount);
        CHECK(rep.stats.sigma_rejected + rep.stats.metric_rejected + rep.stats.accepted == kCodeCount);
        CHECK(rep.stats.accepted == rep.records.size());
        const auto again = enumerate(id, 2);
        REQUIRE(again.records.size() == rep.records.size());
        for (std::size_t k = 0; k < rep.records.size(); ++k) CHECK(again.records[k].code == rep.records[k].code);
        MESSAGE(std::string(to_string(id)) << ": " << rep.records.size() << " QLCs, " << rep.curved_count() << " curved");
    }
}

TEST_CASE("cases (a), (b), (c) are flat QLCs for both metrics") {
    for (const MetricId id : {MetricId::G1, MetricId::G2})
        for (char which : {'a', 'b', 'c'}) {
            const auto* rec = find(report_for(id), encode(named_case(which)));
            REQUIRE(rec != nullptr);
            CHECK(rec->flat);
            CHECK(rec->named == which);
        }
    // Case (b): ∇s = ∇t = σ₁(g₁ + g₂).
    const M2<Gf2> sigma1{Gf2(0), Gf2(1), Gf2(1), Gf2(0)};
    const auto g12 = metric_g1<Gf2>().tensor() + metric_g2<Gf2>().tensor();
    CHECK(named_case('b').nabla[S] == sigma1 * g12);
    CHECK(named_case('b').nabla[T] == sigma1 * g12);
}

TEST_CASE("limit-family points for g1: all found, six curved") {
    const auto& rep = report_for(MetricId::G1);
    const auto limits = limit_points(MetricId::G1);
    CHECK(limits.size() == 16);
    std::set<Code> distinct;
    for (const auto& lp : limits) {
        distinct.insert(lp.code);
        CHECK(find(rep, lp.code) != nullptr);
        // The reduction agrees with evaluating the family directly over GF(2).
        CHECK(encode(qlc_family<Gf2>(MetricId::G1, {Gf2(lp.label.find("alpha=1") != std::string::npos),
                                                    Gf2(lp.label.find("beta=1") != std::string::npos),
                                                    Gf2(lp.label.find("mu=1") != std::string::npos),
                                                    Gf2(lp.label.find("nu=1") != std::string::npos)})) == lp.code);
    }
    CHECK(rep.limit_distinct == distinct.size());
    CHECK(rep.limit_found == distinct.size());
    int curved = 0;
    for (Code c : distinct) curved += curvature(decode(c)).is_zero() ? 0 : 1;
    CHECK(curved == 6);
    CHECK(rep.curved_limit_distinct == 6);
}

TEST_CASE("limit-family points for g2 are all flat") {
    const auto& rep = report_for(MetricId::G2);
    const auto limits = limit_points(MetricId::G2);
    CHECK(limits.size() == 8);
    for (const auto& lp : limits) {
        const auto* rec = find(rep, lp.code);
        REQUIRE(rec != nullptr);
        CHECK(rec->flat);
    }
    CHECK(rep.curved_limit_distinct == 0);
}

TEST_CASE("joint nonflat QLCs and their two-lift Einstein tensor") {
    const auto& rep1 = report_for(MetricId::G1);
    const auto& rep2 = report_for(MetricId::G2);
    const auto g1 = metric_g1<Gf2>(), g2 = metric_g2<Gf2>();

    std::set<Code> curved_limits;
    for (const auto& lp : limit_points(MetricId::G1))
        if (!curvature(decode(lp.code)).is_zero()) curved_limits.insert(lp.code);

    int joint = 0, others = 0;
    for (Code code : curved_limits) {
        const auto conn = decode(code);
        const auto r = curvature(conn);
        const auto ein = two_lift_einstein(conn, g1);
        const bool both = find(rep2, code) != nullptr;
        if (both) {
            ++joint;
            // R∇s = R∇t = s∧t⊗(s+t).
            for (std::size_t e = 0; e < 2; ++e) {
                CHECK(r.r[e][S] == M2<Gf2>::identity());
                CHECK(r.r[e][T] == M2<Gf2>::identity());
            }
            CHECK(ein.ricci_plus == times_s_plus_t(T));
            CHECK(ein.ricci_minus == times_s_plus_t(S));
            CHECK(ein.s_plus == M2<Gf2>::identity());
            CHECK(ein.s_minus == M2<Gf2>::identity());
            REQUIRE(ein.applicable);
            CHECK(ein.two_ricci == g1.tensor() + g2.tensor());
            CHECK(ein.two_eins == g2.tensor());
            const auto sigma = require_sigma(conn);
            CHECK(nabla_tensor(conn, sigma, ein.two_eins).is_zero());
            CHECK(nabla_tensor(conn, sigma, ein.two_ricci).is_zero());
            const auto* rec = find(rep1, code);
            REQUIRE(rec != nullptr);
            CHECK(rec->two_eins_parallel == true);
        } else {
            ++others;
            CHECK_FALSE(ein.applicable);
            CHECK_FALSE(ein.s_plus == ein.s_minus);
            CHECK(ein.s_plus + ein.s_minus == M2<Gf2>::identity());
        }
    }
    CHECK(joint == 2);
    CHECK(others == 4);
}

TEST_CASE("flat QLCs have vanishing two-lift tensors") {
    for (const auto& rec : report_for(MetricId::G1).records) {
        if (!rec.flat) continue;
        CHECK(rec.einstein.applicable);
        CHECK(rec.einstein.two_ricci.is_zero());
        CHECK(rec.einstein.two_eins.is_zero());
    }
}

TEST_CASE("classification is consistent with the generic machinery") {
    for (const MetricId id : {MetricId::G1, MetricId::G2}) {
        const auto g = metric_of<Gf2>(id);
        for (const auto& rec : report_for(id).records) {
            const auto conn = decode(rec.code);
            REQUIRE(rec.connection == conn);
            CHECK(rec.flat == curvature(conn).is_zero());
            CHECK(nabla_metric(conn, g).is_zero());
        }
    }
}

TEST_CASE("custom metric enumeration") {
    // g₁ + g₂ is singular over GF(2).
    CHECK_THROWS_AS(make_metric<Gf2>({Gf2(1), Gf2(1), Gf2(1), Gf2(1)}), qgeom::ValidationError);
    const auto g = make_metric<Gf2>({Gf2(1), Gf2(1), Gf2(0), Gf2(1)});
    const auto rep = enumerate(g, {}, 0);
    CHECK(rep.stats.candidates == kCodeCount);
    CHECK(rep.limit_point_count == 0);
    // The zero connection is compatible with every central metric.
    CHECK(find(rep, 0) != nullptr);
    for (const auto& rec : rep.records) CHECK(nabla_metric(rec.connection, g).is_zero());
    MESSAGE("custom metric [[1,1],[0,1]]: " << rep.records.size() << " QLCs");
}
