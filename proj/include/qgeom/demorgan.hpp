#pragma once

// Power-set calculi over GF(2) and their de Morgan duals. Subsets of the
// vertex set X and of the arrow set are bitmasks; the primal ring is
// (⊕ = symmetric difference, ∩) and the dual ring is (⊕̄, ∪), with the
// complement map carrying one to the other.

#include "qgeom/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgeom::demorgan {

using Mask = std::uint64_t;

/// A digraph whose vertex and arrow subsets fit in 64-bit masks.
class PowerSetGraph {
public:
    PowerSetGraph(std::size_t vertices, std::vector<Arrow> arrows);
    /// The digraph on n vertices whose arrows are the bits of `selection`
    /// over the n(n−1) ordered pairs (x, y), x ≠ y, in lexicographic order.
    static PowerSetGraph from_selection(std::size_t n, std::uint64_t selection);
    static std::size_t possible_arrows(std::size_t n) { return n * (n - 1); }

    std::size_t vertex_count() const { return n_; }
    std::size_t arrow_count() const { return arrows_.size(); }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    Mask vertex_all() const { return vertex_all_; }
    Mask arrow_all() const { return arrow_all_; }

    /// Arrows with tail in a, and with head in a.
    Mask tails_in(Mask a) const;
    Mask heads_in(Mask a) const;

private:
    std::size_t n_;
    std::vector<Arrow> arrows_;
    Mask vertex_all_;
    Mask arrow_all_;
    std::vector<Mask> tail_of_;  // per vertex, arrows leaving it
    std::vector<Mask> head_of_;  // per vertex, arrows entering it
};

inline Mask complement(Mask a, Mask all) { return ~a & all; }

// Primal ring and module structure.
inline Mask add(Mask a, Mask b) { return a ^ b; }
inline Mask mul(Mask a, Mask b) { return a & b; }
/// a∩ω: arrows of ω with tail in a.
inline Mask left_act(const PowerSetGraph& g, Mask a, Mask w) { return w & g.tails_in(a); }
/// ω∩a: arrows of ω with head in a.
inline Mask right_act(const PowerSetGraph& g, Mask w, Mask a) { return w & g.heads_in(a); }
/// Arrows with exactly one end in a.
inline Mask d(const PowerSetGraph& g, Mask a) { return g.tails_in(a) ^ g.heads_in(a); }
/// θ∩a ⊕ a∩θ with θ the full arrow set.
inline Mask d_inner(const PowerSetGraph& g, Mask a) {
    return right_act(g, g.arrow_all(), a) ^ left_act(g, a, g.arrow_all());
}

// Dual ring and module structure.
/// (a∩b) ∪ complement(a∪b).
inline Mask dual_add(Mask a, Mask b, Mask all) { return (a & b) | complement(a | b, all); }
inline Mask dual_mul(Mask a, Mask b) { return a | b; }
/// a∪ω: arrows of ω together with all arrows whose tail is in a.
inline Mask dual_left_act(const PowerSetGraph& g, Mask a, Mask w) { return w | g.tails_in(a); }
inline Mask dual_right_act(const PowerSetGraph& g, Mask w, Mask a) { return w | g.heads_in(a); }
/// Arrows wholly in a or wholly in its complement.
Mask dual_d(const PowerSetGraph& g, Mask a);

/// Running tally of named checks.
struct CheckReport {
    struct Entry {
        std::string name;
        std::uint64_t checked = 0;
        std::uint64_t failed = 0;
        std::string first_failure;
    };
    std::vector<Entry> entries;
    std::uint64_t graphs = 0;

    void record(const std::string& name, bool ok, const std::string& context = {});
    void merge(const CheckReport& other);
    bool passed() const;
    std::uint64_t total_checks() const;
};

struct VerifyOptions {
    std::size_t exhaustive_max_vertices = 3;
    /// Random graphs per size for exhaustive_max_vertices < |X| <= random_max_vertices.
    std::size_t random_max_vertices = 6;
    std::size_t random_graphs = 64;
    /// One-forms are enumerated when 2^|Arr| is at most this, sampled otherwise.
    std::size_t one_form_budget = 512;
    /// One-form budget for the randomly drawn larger graphs.
    std::size_t random_one_form_budget = 64;
    /// Vertex subsets are enumerated when 2^|X| is at most this, sampled otherwise.
    std::size_t subset_budget = 16;
    std::uint64_t seed = 1;
};

/// Ring axioms, bimodule associativity, the primal and dual Leibniz rules
/// and the inner form of d.
CheckReport verify_calculus_axioms(const VerifyOptions& opts);

/// Complement as a map from the primal to the dual calculus: ring
/// isomorphism in degree 0, intertwining of additions and all four module
/// actions in degree 1, and complement(da) = d̄(complement a).
CheckReport duality_diffeomorphism_check(const VerifyOptions& opts);

/// The same checks for a single graph, enumerating subsets and one-forms up
/// to the budgets in opts and sampling past them.
void check_axioms_on(const PowerSetGraph& g, const VerifyOptions& opts, std::uint64_t seed, CheckReport& out);
void check_duality_on(const PowerSetGraph& g, const VerifyOptions& opts, std::uint64_t seed, CheckReport& out);

// ---------------------------------------------------------------------------
// Unit-interval operations.

using UnitFunction = std::vector<double>;

/// Throws ValidationError if a value lies outside [0,1].
void require_unit(const UnitFunction& f);
UnitFunction complement(const UnitFunction& f);
/// f ⊕ g = f + g − fg.
UnitFunction oplus(const UnitFunction& f, const UnitFunction& g);
UnitFunction times(const UnitFunction& f, const UnitFunction& g);
UnitFunction pointwise_min(const UnitFunction& f, const UnitFunction& g);
UnitFunction pointwise_max(const UnitFunction& f, const UnitFunction& g);
/// 1 where f ≤ g, else g.
UnitFunction heyting_hom(const UnitFunction& f, const UnitFunction& g);
/// 1 where f ≤ g, else g/f.
UnitFunction multiplicative_hom(const UnitFunction& f, const UnitFunction& g);

}  // namespace qgeom::demorgan
