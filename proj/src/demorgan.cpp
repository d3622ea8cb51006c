#include "qgeom/demorgan.hpp"

#include "qgeom/errors.hpp"

#include <algorithm>
#include <random>

namespace qgeom::demorgan {

PowerSetGraph::PowerSetGraph(std::size_t vertices, std::vector<Arrow> arrows)
    : n_(vertices), arrows_(std::move(arrows)), tail_of_(vertices, 0), head_of_(vertices, 0) {
    if (n_ > 64 || arrows_.size() > 64) throw GraphError("power-set graphs are limited to 64 vertices and arrows");
    vertex_all_ = n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1;
    arrow_all_ = arrows_.size() == 64 ? ~Mask{0} : (Mask{1} << arrows_.size()) - 1;
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
        const Arrow& a = arrows_[i];
        if (a.tail >= n_ || a.head >= n_ || a.tail == a.head) throw GraphError("invalid arrow in power-set graph");
        tail_of_[a.tail] |= Mask{1} << i;
        head_of_[a.head] |= Mask{1} << i;
    }
}

PowerSetGraph PowerSetGraph::from_selection(std::size_t n, std::uint64_t selection) {
    std::vector<Arrow> arrows;
    std::size_t k = 0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            if ((selection >> k) & 1U) arrows.push_back({x, y});
            ++k;
        }
    return PowerSetGraph(n, std::move(arrows));
}

Mask PowerSetGraph::tails_in(Mask a) const {
    Mask out = 0;
    for (std::size_t x = 0; x < n_; ++x)
        if ((a >> x) & 1U) out |= tail_of_[x];
    return out;
}

Mask PowerSetGraph::heads_in(Mask a) const {
    Mask out = 0;
    for (std::size_t x = 0; x < n_; ++x)
        if ((a >> x) & 1U) out |= head_of_[x];
    return out;
}

Mask dual_d(const PowerSetGraph& g, Mask a) {
    const Mask abar = complement(a, g.vertex_all());
    return (g.tails_in(a) & g.heads_in(a)) | (g.tails_in(abar) & g.heads_in(abar));
}

// ---------------------------------------------------------------------------

void CheckReport::record(const std::string& name, bool ok, const std::string& context) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.name == name; });
    if (it == entries.end()) {
        entries.push_back({name, 0, 0, {}});
        it = std::prev(entries.end());
    }
    ++it->checked;
    if (!ok) {
        if (it->failed == 0) it->first_failure = context;
        ++it->failed;
    }
}

void CheckReport::merge(const CheckReport& other) {
    graphs += other.graphs;
    for (const auto& e : other.entries) {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& x) { return x.name == e.name; });
        if (it == entries.end()) {
            entries.push_back(e);
            continue;
        }
        if (it->failed == 0 && e.failed > 0) it->first_failure = e.first_failure;
        it->checked += e.checked;
        it->failed += e.failed;
    }
}

bool CheckReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.failed == 0; });
}

std::uint64_t CheckReport::total_checks() const {
    std::uint64_t n = 0;
    for (const auto& e : entries) n += e.checked;
    return n;
}

namespace {

/// Accumulates pass/fail counts for a fixed list of check names without a
/// lookup per evaluation.
class Tally {
public:
    explicit Tally(std::vector<std::string> names) : names_(std::move(names)), checked_(names_.size()), failed_(names_.size()) {}

    template <class Ctx>
    void check(std::size_t id, bool ok, Ctx&& context) {
        ++checked_[id];
        if (!ok && failed_[id]++ == 0) failures_.push_back({id, context()});
    }

    void flush(CheckReport& out) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            CheckReport one;
            CheckReport::Entry e{names_[i], checked_[i], failed_[i], {}};
            for (const auto& [id, ctx] : failures_)
                if (id == i) e.first_failure = ctx;
            one.entries.push_back(e);
            out.merge(one);
        }
    }

private:
    std::vector<std::string> names_;
    std::vector<std::uint64_t> checked_;
    std::vector<std::uint64_t> failed_;
    std::vector<std::pair<std::size_t, std::string>> failures_;
};

std::vector<Mask> one_forms(const PowerSetGraph& g, std::size_t budget, std::uint64_t seed) {
    std::vector<Mask> out;
    const std::size_t m = g.arrow_count();
    if (m < 63 && (std::uint64_t{1} << m) <= budget) {
        for (Mask w = 0; w <= g.arrow_all(); ++w) out.push_back(w);
        return out;
    }
    std::mt19937_64 rng(seed);
    out.push_back(0);
    out.push_back(g.arrow_all());
    while (out.size() < budget) out.push_back(rng() & g.arrow_all());
    return out;
}

std::vector<Mask> subsets(const PowerSetGraph& g, std::size_t budget, std::uint64_t seed) {
    std::vector<Mask> out;
    if ((std::uint64_t{1} << g.vertex_count()) <= budget) {
        for (Mask a = 0; a <= g.vertex_all(); ++a) out.push_back(a);
        return out;
    }
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    out.push_back(0);
    out.push_back(g.vertex_all());
    while (out.size() < budget) out.push_back(rng() & g.vertex_all());
    return out;
}

std::string ctx(const PowerSetGraph& g, Mask a, Mask b = 0, Mask w = 0) {
    return "n=" + std::to_string(g.vertex_count()) + " arrows=" + std::to_string(g.arrow_count()) +
           " a=" + std::to_string(a) + " b=" + std::to_string(b) + " w=" + std::to_string(w);
}

enum AxiomId : std::size_t {
    kRingComm, kRingAssoc, kRingDistrib, kRingUnit, kRingChar2,
    kDualRingComm, kDualRingAssoc, kDualRingDistrib, kDualRingUnit, kDualRingChar2,
    kBimoduleAssoc, kLeftModule, kRightModule, kActionAdditive,
    kDualBimoduleAssoc, kDualLeftModule, kDualRightModule, kDualActionAdditive,
    kLeibniz, kDAdditive, kDUnit, kInner,
    kDualLeibniz, kDualDAdditive, kDualDUnit, kDualInner,
};

const std::vector<std::string> kAxiomNames = {
    "ring commutative", "ring associative", "ring distributive", "ring unit and zero", "ring characteristic 2",
    "dual ring commutative", "dual ring associative", "dual ring distributive", "dual ring unit and zero",
    "dual ring characteristic 2",
    "bimodule associativity", "left module", "right module", "actions additive",
    "dual bimodule associativity", "dual left module", "dual right module", "dual actions additive",
    "Leibniz rule", "d additive", "d of unit", "d inner",
    "dual Leibniz rule", "dual d additive", "dual d of unit", "dual d inner",
};

enum DualityId : std::size_t {
    kInvolution, kAddIso, kMulIso, kUnitIso, kFormAddIso, kLeftIso, kRightIso, kDIso, kDualDDirect,
};

const std::vector<std::string> kDualityNames = {
    "complement involution", "complement(a+b) = dual sum", "complement(ab) = union", "units and zeros",
    "complement on one-form sums", "complement(a.w) = dual left action", "complement(w.a) = dual right action",
    "complement(da) = dual d of complement", "dual d wholly-in filter",
};

template <class Fn>
CheckReport run_sizes(const VerifyOptions& opts, Fn&& per_graph) {
    VerifyOptions sampled = opts;
    sampled.one_form_budget = opts.random_one_form_budget;
    CheckReport total;
    // Exhaustive over all digraphs up to the exhaustive bound.
    for (std::size_t n = 1; n <= opts.exhaustive_max_vertices; ++n) {
        const std::size_t pa = PowerSetGraph::possible_arrows(n);
        if (pa > 20) throw ValidationError("exhaustive digraph enumeration is limited to 20 possible arrows");
        const auto count = static_cast<std::ptrdiff_t>(std::uint64_t{1} << pa);
        std::vector<CheckReport> parts(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t sel = 0; sel < count; ++sel) {
            const auto g = PowerSetGraph::from_selection(n, static_cast<std::uint64_t>(sel));
            per_graph(g, opts, opts.seed ^ static_cast<std::uint64_t>(sel), parts[static_cast<std::size_t>(sel)]);
            parts[static_cast<std::size_t>(sel)].graphs = 1;
        }
        for (const auto& p : parts) total.merge(p);
    }
    // Random digraphs beyond it.
    std::mt19937_64 rng(opts.seed);
    for (std::size_t n = opts.exhaustive_max_vertices + 1; n <= opts.random_max_vertices; ++n) {
        const std::size_t pa = PowerSetGraph::possible_arrows(n);
        const std::uint64_t mask = pa >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pa) - 1;
        std::vector<std::uint64_t> selections(opts.random_graphs);
        for (auto& s : selections) s = rng() & mask;
        std::vector<CheckReport> parts(selections.size());
        const auto count = static_cast<std::ptrdiff_t>(selections.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto g = PowerSetGraph::from_selection(n, selections[static_cast<std::size_t>(i)]);
            per_graph(g, sampled, opts.seed + 7919 * static_cast<std::uint64_t>(i) + n, parts[static_cast<std::size_t>(i)]);
            parts[static_cast<std::size_t>(i)].graphs = 1;
        }
        for (const auto& p : parts) total.merge(p);
    }
    return total;
}

}  // namespace

void check_axioms_on(const PowerSetGraph& g, const VerifyOptions& opts, std::uint64_t seed, CheckReport& out) {
    Tally t(kAxiomNames);
    const Mask X = g.vertex_all();
    const Mask A = g.arrow_all();
    const std::vector<Mask> forms = one_forms(g, opts.one_form_budget, seed);
    const std::vector<Mask> sets = subsets(g, opts.subset_budget, seed);

    for (Mask a : sets) {
        t.check(kRingUnit, mul(a, X) == a && add(a, 0) == a, [&] { return ctx(g, a); });
        t.check(kRingChar2, add(a, a) == 0, [&] { return ctx(g, a); });
        t.check(kDualRingUnit, dual_mul(a, 0) == a && dual_add(a, X, X) == a, [&] { return ctx(g, a); });
        t.check(kDualRingChar2, dual_add(a, a, X) == X, [&] { return ctx(g, a); });
        t.check(kInner, d(g, a) == d_inner(g, a), [&] { return ctx(g, a); });
        // Dual inner form with dual θ = complement of θ = ∅.
        t.check(kDualInner, dual_d(g, a) == dual_add(dual_right_act(g, 0, a), dual_left_act(g, a, 0), A),
                [&] { return ctx(g, a); });
        for (Mask b : sets) {
            t.check(kRingComm, add(a, b) == add(b, a) && mul(a, b) == mul(b, a), [&] { return ctx(g, a, b); });
            t.check(kDualRingComm, dual_add(a, b, X) == dual_add(b, a, X) && dual_mul(a, b) == dual_mul(b, a),
                    [&] { return ctx(g, a, b); });
            t.check(kLeibniz, d(g, mul(a, b)) == add(right_act(g, d(g, a), b), left_act(g, a, d(g, b))),
                    [&] { return ctx(g, a, b); });
            t.check(kDAdditive, d(g, add(a, b)) == add(d(g, a), d(g, b)), [&] { return ctx(g, a, b); });
            t.check(kDualLeibniz,
                    dual_d(g, dual_mul(a, b)) ==
                        dual_add(dual_right_act(g, dual_d(g, a), b), dual_left_act(g, a, dual_d(g, b)), A),
                    [&] { return ctx(g, a, b); });
            t.check(kDualDAdditive, dual_d(g, dual_add(a, b, X)) == dual_add(dual_d(g, a), dual_d(g, b), A),
                    [&] { return ctx(g, a, b); });
            for (Mask c : sets) {
                t.check(kRingAssoc, add(add(a, b), c) == add(a, add(b, c)) && mul(mul(a, b), c) == mul(a, mul(b, c)),
                        [&] { return ctx(g, a, b) + " c=" + std::to_string(c); });
                t.check(kRingDistrib, mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
                        [&] { return ctx(g, a, b) + " c=" + std::to_string(c); });
                t.check(kDualRingAssoc,
                        dual_add(dual_add(a, b, X), c, X) == dual_add(a, dual_add(b, c, X), X) &&
                            dual_mul(dual_mul(a, b), c) == dual_mul(a, dual_mul(b, c)),
                        [&] { return ctx(g, a, b) + " c=" + std::to_string(c); });
                t.check(kDualRingDistrib, dual_mul(a, dual_add(b, c, X)) == dual_add(dual_mul(a, b), dual_mul(a, c), X),
                        [&] { return ctx(g, a, b) + " c=" + std::to_string(c); });
            }
            for (Mask w : forms) {
                t.check(kBimoduleAssoc, right_act(g, left_act(g, a, w), b) == left_act(g, a, right_act(g, w, b)),
                        [&] { return ctx(g, a, b, w); });
                t.check(kLeftModule, left_act(g, mul(a, b), w) == left_act(g, a, left_act(g, b, w)),
                        [&] { return ctx(g, a, b, w); });
                t.check(kRightModule, right_act(g, w, mul(a, b)) == right_act(g, right_act(g, w, a), b),
                        [&] { return ctx(g, a, b, w); });
                t.check(kActionAdditive,
                        left_act(g, add(a, b), w) == add(left_act(g, a, w), left_act(g, b, w)) &&
                            right_act(g, w, add(a, b)) == add(right_act(g, w, a), right_act(g, w, b)),
                        [&] { return ctx(g, a, b, w); });
                t.check(kDualBimoduleAssoc,
                        dual_right_act(g, dual_left_act(g, a, w), b) == dual_left_act(g, a, dual_right_act(g, w, b)),
                        [&] { return ctx(g, a, b, w); });
                t.check(kDualLeftModule, dual_left_act(g, dual_mul(a, b), w) == dual_left_act(g, a, dual_left_act(g, b, w)),
                        [&] { return ctx(g, a, b, w); });
                t.check(kDualRightModule,
                        dual_right_act(g, w, dual_mul(a, b)) == dual_right_act(g, dual_right_act(g, w, a), b),
                        [&] { return ctx(g, a, b, w); });
                t.check(kDualActionAdditive,
                        dual_left_act(g, dual_add(a, b, X), w) ==
                                dual_add(dual_left_act(g, a, w), dual_left_act(g, b, w), A) &&
                            dual_right_act(g, w, dual_add(a, b, X)) ==
                                dual_add(dual_right_act(g, w, a), dual_right_act(g, w, b), A),
                        [&] { return ctx(g, a, b, w); });
            }
        }
    }
    t.check(kDUnit, d(g, X) == 0, [&] { return ctx(g, X); });
    t.check(kDualDUnit, dual_d(g, 0) == A, [&] { return ctx(g, 0); });
    t.flush(out);
}

void check_duality_on(const PowerSetGraph& g, const VerifyOptions& opts, std::uint64_t seed, CheckReport& out) {
    Tally t(kDualityNames);
    const Mask X = g.vertex_all();
    const Mask A = g.arrow_all();
    const std::vector<Mask> forms = one_forms(g, opts.one_form_budget, seed);
    const std::vector<Mask> sets = subsets(g, opts.subset_budget, seed);
    auto cx = [X](Mask a) { return complement(a, X); };
    auto ca = [A](Mask w) { return complement(w, A); };

    t.check(kUnitIso, cx(X) == 0 && cx(0) == X && ca(A) == 0 && ca(0) == A, [&] { return ctx(g, 0); });
    for (Mask a : sets) {
        t.check(kInvolution, cx(cx(a)) == a, [&] { return ctx(g, a); });
        t.check(kDIso, ca(d(g, a)) == dual_d(g, cx(a)), [&] { return ctx(g, a); });
        // Wholly in a or wholly in its complement, by direct arrow inspection.
        Mask direct = 0;
        for (std::size_t i = 0; i < g.arrow_count(); ++i) {
            const bool t_in = (a >> g.arrows()[i].tail) & 1U;
            const bool h_in = (a >> g.arrows()[i].head) & 1U;
            if (t_in == h_in) direct |= Mask{1} << i;
        }
        t.check(kDualDDirect, dual_d(g, a) == direct, [&] { return ctx(g, a); });
        for (Mask b : sets) {
            t.check(kAddIso, cx(add(a, b)) == dual_add(cx(a), cx(b), X), [&] { return ctx(g, a, b); });
            t.check(kMulIso, cx(mul(a, b)) == dual_mul(cx(a), cx(b)), [&] { return ctx(g, a, b); });
        }
        for (Mask w : forms) {
            t.check(kLeftIso, ca(left_act(g, a, w)) == dual_left_act(g, cx(a), ca(w)), [&] { return ctx(g, a, 0, w); });
            t.check(kRightIso, ca(right_act(g, w, a)) == dual_right_act(g, ca(w), cx(a)), [&] { return ctx(g, a, 0, w); });
        }
    }
    const std::size_t partners = std::min<std::size_t>(forms.size(), 64);
    for (Mask w : forms)
        for (std::size_t k = 0; k < partners; ++k) {
            const Mask v = forms[k * forms.size() / partners];
            t.check(kFormAddIso, ca(add(w, v)) == dual_add(ca(w), ca(v), A), [&] { return ctx(g, 0, v, w); });
        }
    t.flush(out);
}

CheckReport verify_calculus_axioms(const VerifyOptions& opts) {
    return run_sizes(opts, [](const PowerSetGraph& g, const VerifyOptions& o, std::uint64_t seed, CheckReport& out) {
        check_axioms_on(g, o, seed, out);
    });
}

CheckReport duality_diffeomorphism_check(const VerifyOptions& opts) {
    return run_sizes(opts, [](const PowerSetGraph& g, const VerifyOptions& o, std::uint64_t seed, CheckReport& out) {
        check_duality_on(g, o, seed, out);
    });
}

// ---------------------------------------------------------------------------

void require_unit(const UnitFunction& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i] >= 0.0 && f[i] <= 1.0))
            throw ValidationError("value " + std::to_string(f[i]) + " at index " + std::to_string(i) +
                                  " lies outside [0,1]");
}

namespace {

template <class Op>
UnitFunction zip(const UnitFunction& f, const UnitFunction& g, Op op) {
    if (f.size() != g.size()) throw ValidationError("unit-interval functions differ in length");
    require_unit(f);
    require_unit(g);
    UnitFunction out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = op(f[i], g[i]);
    return out;
}

}  // namespace

UnitFunction complement(const UnitFunction& f) {
    require_unit(f);
    UnitFunction out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = 1.0 - f[i];
    return out;
}

UnitFunction oplus(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return a + b - a * b; });
}
UnitFunction times(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return a * b; });
}
UnitFunction pointwise_min(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return std::min(a, b); });
}
UnitFunction pointwise_max(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return std::max(a, b); });
}
UnitFunction heyting_hom(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return a <= b ? 1.0 : b; });
}
UnitFunction multiplicative_hom(const UnitFunction& f, const UnitFunction& g) {
    return zip(f, g, [](double a, double b) { return a <= b ? 1.0 : b / a; });
}

}  // namespace qgeom::demorgan
