#pragma once

// Exhaustive search for quantum Levi-Civita connections on M2 over GF(2).
//
// Torsion freeness over GF(2) forces the s⊗t and t⊗s coefficients of each ∇e
// to coincide, so a candidate is three matrices per generator: 12 bits each,
// 24 bits in total. Bits 0-11 describe ∇s and bits 12-23 describe ∇t; within
// a generator the nibbles are the s⊗s, s⊗t (= t⊗s) and t⊗t coefficients, and
// within a nibble bits 0..3 are the entries e11, e12, e21, e22.

#include "qgeom/m2_geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qgeom::m2::f2 {

using Code = std::uint32_t;
inline constexpr Code kCodeCount = Code{1} << 24;

std::uint8_t nibble(const M2<Gf2>& a);
M2<Gf2> from_nibble(std::uint8_t n);

Connection<Gf2> decode(Code code);
/// Fails with ValidationError unless the connection is torsion free.
Code encode(const Connection<Gf2>& conn);

std::string format_element(const M2<Gf2>& a);
std::string format_tensor(const Tensor<Gf2>& x);

/// Candidate test with precomputed tables: σ-solvability is an XOR of two
/// table entries followed by a zero test, and ∇g = 0 is evaluated with nibble
/// XORs using the solved σ bits.
class FastKernel {
public:
    explicit FastKernel(const Metric<Gf2>& g);

    /// σ exists; when it does and sigma_bits is given, stores c[p][q] at bit 4p+q.
    bool sigma_solvable(Code code, std::uint16_t* sigma_bits = nullptr) const;
    bool metric_compatible(Code code, std::uint16_t sigma_bits) const;
    bool accepts(Code code) const {
        std::uint16_t sig = 0;
        return sigma_solvable(code, &sig) && metric_compatible(code, sig);
    }

private:
    struct Word128 {
        std::uint64_t lo = 0, hi = 0;
    };
    std::array<std::uint8_t, 4> g_{};
    std::vector<Word128> low_table_;   // code bits 0-11, includes the constant part
    std::vector<Word128> high_table_;  // code bits 12-23
    Word128 consistency_mask_;
    std::array<std::size_t, 16> sigma_row_{};  // reduced row holding unknown k
};

struct ScanStats {
    std::uint64_t candidates = 0;
    std::uint64_t sigma_rejected = 0;
    std::uint64_t metric_rejected = 0;
    std::uint64_t accepted = 0;
};

/// Generic-template path over [begin, end): decode, torsion, sigma_solve over
/// Gf2, ∇g. Serial; used as the reference for the fast kernel.
std::vector<Code> scan_reference(const Metric<Gf2>& g, Code begin, Code end, ScanStats* stats = nullptr);

/// Fast kernel, single thread.
std::vector<Code> scan_fast_serial(const FastKernel& kernel, Code begin, Code end, ScanStats* stats = nullptr);

/// Fast kernel over contiguous chunks in parallel; chunk results are
/// concatenated in range order, so the output is sorted. threads <= 0 means
/// configured_threads().
std::vector<Code> scan_parallel(const FastKernel& kernel, Code begin, Code end, int threads,
                                ScanStats* stats = nullptr);

/// Reductions of the complex QLC families with parameters in {0, 1}.
struct LimitPoint {
    std::string label;  // e.g. "alpha=0 beta=1 mu=1 nu=1"
    Code code = 0;
};
std::vector<LimitPoint> limit_points(MetricId id);

/// The flat connections named (a), (b), (c): zero, ∇s = ∇t = σ₁(g₁+g₂), and
/// ∇s = E12 g₁ + E21 g₂, ∇t = E21 g₁ + E12 g₂.
Connection<Gf2> named_case(char which);

struct QlcRecord {
    Code code = 0;
    Connection<Gf2> connection;
    bool flat = true;
    Curvature<Gf2> curvature;
    TwoLiftEinstein<Gf2> einstein;
    /// ∇(₂Eins) = 0, when ₂Eins exists.
    std::optional<bool> two_eins_parallel;
    std::vector<std::string> limit_labels;
    std::optional<char> named;
};

QlcRecord classify(Code code, const Metric<Gf2>& g, const std::vector<LimitPoint>& limits);

struct EnumerationReport {
    MetricId metric = MetricId::G1;  // meaningful only for the named metrics
    std::array<Gf2, 4> metric_entries{};
    ScanStats stats;
    std::vector<QlcRecord> records;
    std::size_t limit_point_count = 0;         // parameter points
    std::size_t limit_distinct = 0;            // distinct connections among them
    std::size_t limit_found = 0;               // distinct ones present in the result set
    std::size_t curved_limit_distinct = 0;     // curved among the distinct limit connections
    double seconds = 0.0;

    std::size_t curved_count() const;
};

/// Full 2^24 scan and classification.
EnumerationReport enumerate(MetricId id, int threads);
/// Same scan for an arbitrary invertible central metric; limit points may be empty.
EnumerationReport enumerate(const Metric<Gf2>& g, const std::vector<LimitPoint>& limits, int threads);

}  // namespace qgeom::m2::f2
