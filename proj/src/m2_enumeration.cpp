#include "qgeom/m2_enumeration.hpp"

#include "qgeom/gf2_bits.hpp"
#include "qgeom/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace qgeom::m2::f2 {

namespace {

constexpr std::size_t kNibbleSlots[3][2] = {{S, S}, {S, T}, {T, T}};

Gf2 bit(unsigned v, unsigned k) { return Gf2(static_cast<int>((v >> k) & 1U)); }

std::vector<Gf2> binary_params(unsigned bits, std::size_t n) {
    std::vector<Gf2> p;
    for (std::size_t k = 0; k < n; ++k) p.push_back(bit(bits, static_cast<unsigned>(k)));
    return p;
}

Tensor<Gf2> f2_g1() { return metric_g1<Gf2>().tensor(); }
Tensor<Gf2> f2_g2() { return metric_g2<Gf2>().tensor(); }

}  // namespace

std::uint8_t nibble(const M2<Gf2>& a) {
    std::uint8_t n = 0;
    for (unsigned k = 0; k < 4; ++k) n |= static_cast<std::uint8_t>(a.m[k].v << k);
    return n;
}

M2<Gf2> from_nibble(std::uint8_t n) { return {bit(n, 0), bit(n, 1), bit(n, 2), bit(n, 3)}; }

Connection<Gf2> decode(Code code) {
    Connection<Gf2> c;
    for (std::size_t e = 0; e < 2; ++e) {
        const unsigned word = (code >> (12 * e)) & 0xFFFU;
        for (std::size_t slot = 0; slot < 3; ++slot) {
            const M2<Gf2> m = from_nibble(static_cast<std::uint8_t>((word >> (4 * slot)) & 0xFU));
            c.nabla[e].at(kNibbleSlots[slot][0], kNibbleSlots[slot][1]) = m;
        }
        c.nabla[e].at(T, S) = c.nabla[e].at(S, T);
    }
    return c;
}

Code encode(const Connection<Gf2>& conn) {
    if (!torsion_free(conn)) throw ValidationError("connection over GF(2) is not torsion free");
    Code code = 0;
    for (std::size_t e = 0; e < 2; ++e)
        for (std::size_t slot = 0; slot < 3; ++slot)
            code |= Code{nibble(conn.nabla[e].at(kNibbleSlots[slot][0], kNibbleSlots[slot][1]))}
                    << (12 * e + 4 * slot);
    return code;
}

std::string format_element(const M2<Gf2>& a) {
    const std::uint8_t n = nibble(a);
    if (n == 0) return "0";
    if (n == 0b1001) return "1";
    static const char* names[4] = {"E11", "E12", "E21", "E22"};
    std::string out;
    for (unsigned k = 0; k < 4; ++k) {
        if (!((n >> k) & 1U)) continue;
        if (!out.empty()) out += "+";
        out += names[k];
    }
    return out;
}

std::string format_tensor(const Tensor<Gf2>& x) {
    static const char* legs[4] = {"s⊗s", "s⊗t", "t⊗s", "t⊗t"};
    std::string out;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::string c = format_element(x.c[k]);
        if (c == "0") continue;
        if (!out.empty()) out += " + ";
        out += (c == "1") ? std::string(legs[k]) : ("(" + c + ")" + legs[k]);
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------

FastKernel::FastKernel(const Metric<Gf2>& g) {
    for (std::size_t k = 0; k < 4; ++k) g_[k] = g.g[k].v;

    const SigmaSystem<Gf2> base = sigma_system(decode(0));
    gf2::BitMatrix a(128, 16);
    for (std::size_t r = 0; r < 128; ++r)
        for (std::size_t c = 0; c < 16; ++c) a.set(r, c, base.matrix(r, c).v != 0);
    const gf2::RowReduction red = gf2::row_reduce(std::move(a));
    if (red.rank != 16) throw QgeomError("sigma system over GF(2) is rank deficient");
    for (std::size_t i = 0; i < 16; ++i) sigma_row_[red.pivot_cols[i]] = i;
    consistency_mask_ = {~std::uint64_t{0xFFFF}, ~std::uint64_t{0}};

    auto pack = [](const std::vector<Gf2>& rhs) {
        std::array<std::uint64_t, 2> w{0, 0};
        for (std::size_t r = 0; r < 128; ++r)
            if (rhs[r].v) w[r / 64] |= std::uint64_t{1} << (r % 64);
        return w;
    };
    auto transform = [&red](const std::array<std::uint64_t, 2>& v) {
        Word128 out;
        for (std::size_t r = 0; r < 128; ++r) {
            if (!red.transform.dot(r, v.data())) continue;
            if (r < 64) out.lo |= std::uint64_t{1} << r; else out.hi |= std::uint64_t{1} << (r - 64);
        }
        return out;
    };

    const auto r0 = pack(base.rhs);
    std::array<Word128, 24> column{};
    for (unsigned k = 0; k < 24; ++k) {
        auto v = pack(sigma_system(decode(Code{1} << k)).rhs);
        v[0] ^= r0[0];
        v[1] ^= r0[1];
        column[k] = transform(v);
    }
    low_table_.assign(4096, {});
    high_table_.assign(4096, {});
    low_table_[0] = transform(r0);
    for (unsigned m = 1; m < 4096; ++m) {
        const unsigned k = static_cast<unsigned>(std::countr_zero(m));
        const unsigned rest = m & (m - 1);
        low_table_[m] = {low_table_[rest].lo ^ column[k].lo, low_table_[rest].hi ^ column[k].hi};
        high_table_[m] = {high_table_[rest].lo ^ column[12 + k].lo, high_table_[rest].hi ^ column[12 + k].hi};
    }
}

bool FastKernel::sigma_solvable(Code code, std::uint16_t* sigma_bits) const {
    const Word128& l = low_table_[code & 0xFFFU];
    const Word128& h = high_table_[(code >> 12) & 0xFFFU];
    const std::uint64_t lo = l.lo ^ h.lo;
    const std::uint64_t hi = l.hi ^ h.hi;
    if ((lo & consistency_mask_.lo) | (hi & consistency_mask_.hi)) return false;
    if (sigma_bits) {
        std::uint16_t s = 0;
        for (unsigned k = 0; k < 16; ++k) s |= static_cast<std::uint16_t>(((lo >> sigma_row_[k]) & 1U) << k);
        *sigma_bits = s;
    }
    return true;
}

bool FastKernel::metric_compatible(Code code, std::uint16_t sig) const {
    std::uint8_t n[2][4];
    for (unsigned e = 0; e < 2; ++e) {
        const unsigned word = (code >> (12 * e)) & 0xFFFU;
        n[e][0] = static_cast<std::uint8_t>(word & 0xF);
        n[e][1] = n[e][2] = static_cast<std::uint8_t>((word >> 4) & 0xF);
        n[e][3] = static_cast<std::uint8_t>((word >> 8) & 0xF);
    }
    std::uint8_t out[8] = {};
    for (unsigned i = 0; i < 2; ++i) {
        for (unsigned j = 0; j < 2; ++j) {
            if (!g_[2 * i + j]) continue;
            // ∇e_i ⊗ e_j
            for (unsigned kl = 0; kl < 4; ++kl) out[2 * kl + j] ^= n[i][kl];
            // (σ⊗id)(e_i ⊗ ∇e_j)
            for (unsigned kl = 0; kl < 4; ++kl) {
                const std::uint8_t coeff = n[j][kl];
                if (!coeff) continue;
                const unsigned row = (2 * i + kl / 2) * 4;
                for (unsigned q = 0; q < 4; ++q)
                    if ((sig >> (row + q)) & 1U) out[2 * q + kl % 2] ^= coeff;
            }
        }
    }
    std::uint8_t any = 0;
    for (auto v : out) any |= v;
    return any == 0;
}

// ---------------------------------------------------------------------------

std::vector<Code> scan_reference(const Metric<Gf2>& g, Code begin, Code end, ScanStats* stats) {
    std::vector<Code> out;
    ScanStats st;
    const Tensor<Gf2> gt = g.tensor();
    for (Code code = begin; code < end; ++code) {
        ++st.candidates;
        const Connection<Gf2> conn = decode(code);
        const SigmaOutcome<Gf2> so = sigma_solve(conn, 0.0);
        if (!so.ok()) {
            ++st.sigma_rejected;
            continue;
        }
        if (!nabla_tensor(conn, so.sigma, gt).is_zero()) {
            ++st.metric_rejected;
            continue;
        }
        ++st.accepted;
        out.push_back(code);
    }
    if (stats) *stats = st;
    return out;
}

std::vector<Code> scan_fast_serial(const FastKernel& kernel, Code begin, Code end, ScanStats* stats) {
    std::vector<Code> out;
    ScanStats st;
    for (Code code = begin; code < end; ++code) {
        ++st.candidates;
        std::uint16_t sig = 0;
        if (!kernel.sigma_solvable(code, &sig)) {
            ++st.sigma_rejected;
            continue;
        }
        if (!kernel.metric_compatible(code, sig)) {
            ++st.metric_rejected;
            continue;
        }
        ++st.accepted;
        out.push_back(code);
    }
    if (stats) *stats = st;
    return out;
}

std::vector<Code> scan_parallel(const FastKernel& kernel, Code begin, Code end, int threads, ScanStats* stats) {
    constexpr Code kChunk = Code{1} << 16;
    const std::size_t chunks = end > begin ? (end - begin + kChunk - 1) / kChunk : 0;
    std::vector<std::vector<Code>> parts(chunks);
    std::vector<ScanStats> part_stats(chunks);
    const auto count = static_cast<std::ptrdiff_t>(chunks);
    if (threads <= 0) threads = configured_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
        const Code lo = begin + static_cast<Code>(c) * kChunk;
        const Code hi = std::min<Code>(end, lo + kChunk);
        parts[static_cast<std::size_t>(c)] =
            scan_fast_serial(kernel, lo, hi, &part_stats[static_cast<std::size_t>(c)]);
    }
    std::vector<Code> out;
    ScanStats total;
    for (std::size_t c = 0; c < chunks; ++c) {
        out.insert(out.end(), parts[c].begin(), parts[c].end());
        total.candidates += part_stats[c].candidates;
        total.sigma_rejected += part_stats[c].sigma_rejected;
        total.metric_rejected += part_stats[c].metric_rejected;
        total.accepted += part_stats[c].accepted;
    }
    if (stats) *stats = total;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<LimitPoint> limit_points(MetricId id) {
    std::vector<LimitPoint> out;
    if (id == MetricId::G1) {
        for (unsigned b = 0; b < 16; ++b) {
            const auto p = binary_params(b, 4);
            out.push_back({"alpha=" + std::to_string(p[0].v) + " beta=" + std::to_string(p[1].v) +
                               " mu=" + std::to_string(p[2].v) + " nu=" + std::to_string(p[3].v),
                           encode(qlc_family<Gf2>(id, p))});
        }
    } else {
        for (unsigned b = 0; b < 8; ++b) {
            const auto p = binary_params(b, 3);
            out.push_back({"mu=" + std::to_string(p[0].v) + " nu=" + std::to_string(p[1].v) +
                               " rho=" + std::to_string(p[2].v),
                           encode(qlc_family<Gf2>(id, p))});
        }
    }
    return out;
}

Connection<Gf2> named_case(char which) {
    const M2<Gf2> e12 = M2<Gf2>::unit(1, 2), e21 = M2<Gf2>::unit(2, 1);
    Connection<Gf2> c;
    switch (which) {
    case 'a': break;
    case 'b': {
        const Tensor<Gf2> v = (e12 + e21) * (f2_g1() + f2_g2());
        c.nabla = {v, v};
        break;
    }
    case 'c':
        c.nabla[S] = e12 * f2_g1() + e21 * f2_g2();
        c.nabla[T] = e21 * f2_g1() + e12 * f2_g2();
        break;
    default: throw ValidationError(std::string("unknown named case '") + which + "'");
    }
    return c;
}

QlcRecord classify(Code code, const Metric<Gf2>& g, const std::vector<LimitPoint>& limits) {
    QlcRecord rec;
    rec.code = code;
    rec.connection = decode(code);
    rec.curvature = curvature(rec.connection);
    rec.flat = rec.curvature.is_zero();
    rec.einstein = two_lift_einstein(rec.connection, g);
    if (rec.einstein.applicable) {
        const Sigma<Gf2> sigma = require_sigma(rec.connection, 0.0);
        rec.two_eins_parallel = nabla_tensor(rec.connection, sigma, rec.einstein.two_eins).is_zero();
    }
    for (const auto& lp : limits)
        if (lp.code == code) rec.limit_labels.push_back(lp.label);
    for (char n : {'a', 'b', 'c'})
        if (encode(named_case(n)) == code) rec.named = n;
    return rec;
}

std::size_t EnumerationReport::curved_count() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const QlcRecord& r) { return !r.flat; }));
}

EnumerationReport enumerate(MetricId id, int threads) {
    EnumerationReport rep = enumerate(metric_of<Gf2>(id), limit_points(id), threads);
    rep.metric = id;
    return rep;
}

EnumerationReport enumerate(const Metric<Gf2>& g, const std::vector<LimitPoint>& limits, int threads) {
    const auto start = std::chrono::steady_clock::now();
    const FastKernel kernel(g);
    EnumerationReport rep;
    rep.metric_entries = g.g;
    const std::vector<Code> found = scan_parallel(kernel, 0, kCodeCount, threads, &rep.stats);
    rep.records.reserve(found.size());
    for (Code c : found) rep.records.push_back(classify(c, g, limits));

    std::set<Code> distinct;
    for (const auto& lp : limits) distinct.insert(lp.code);
    rep.limit_point_count = limits.size();
    rep.limit_distinct = distinct.size();
    for (Code c : distinct) {
        if (std::binary_search(found.begin(), found.end(), c)) ++rep.limit_found;
        if (!curvature(decode(c)).is_zero()) ++rep.curved_limit_distinct;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace qgeom::m2::f2
