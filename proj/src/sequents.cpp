#include "sketchkit/sequents.hpp"

#include <omp.h>

#include <atomic>
#include <functional>
#include <stdexcept>

namespace sketchkit {

ValidationReport validate_sequent(const ExactnessSequent& s) {
    ValidationReport r;
    r.append(validate_sketch(s.x), s.x_name);
    r.append(validate_sketch(s.a), s.a_name);
    r.append(validate_sketch(s.b), s.b_name);
    if (!is_subsketch_inclusion(s.x, s.a)) r.add(s.name, s.x_name + " is not a subsketch of " + s.a_name);
    if (!is_subsketch_inclusion(s.a, s.b)) r.add(s.name, s.a_name + " is not a subsketch of " + s.b_name);
    return r;
}

bool is_unconditional_finite_kind(const ExactnessSequent& s) {
    auto ex = extract_category(s.a);
    if (!ex.ok()) return false;
    for (const auto& r : ex.residue) {
        if (!s.x.has_commutativity(r)) return false;
    }
    for (const auto& cv : s.a.convergences) {
        if (!s.x.has_convergence(cv)) return false;
    }
    return true;
}

ExactnessSequent dualize_sequent(const ExactnessSequent& s) {
    return {s.name, s.x_name, s.a_name, s.b_name, dualize_sketch(s.x), dualize_sketch(s.a), dualize_sketch(s.b)};
}

Structure dualize_structure(const Structure& s, const FiniteCategory& dual_category) {
    Structure out = s;
    out.category = dual_category.name();
    return out;
}

const char* to_string(DecisionMethod m) {
    switch (m) {
        case DecisionMethod::strict: return "strict";
        case DecisionMethod::up_to_iso: return "iso";
        case DecisionMethod::functorial_generic: return "functorial-generic";
        case DecisionMethod::functorial_delegated: return "functorial-delegated";
    }
    return "?";
}

namespace {

void require_structure(const ExactnessSequent& s, const FiniteCategory& c, const Structure& f) {
    if (!is_structure(s.x, c, f)) {
        throw std::invalid_argument("not a structure of " + s.x_name + " in " + c.name());
    }
}

std::vector<Structure> alpha_fibre(const ExactnessSequent& s, const FiniteCategory& c, const Structure& f,
                                   std::uint64_t budget, bool parallel) {
    auto gs = fibre(SketchMorphism::inclusion(s.x), s.x, s.a, c, f, {budget, parallel});
    for (auto& g : gs) g.sketch = s.a_name;
    return gs;
}

// Runs `decide` for each G (in parallel when asked) and assembles the
// decision from the per-G answers.
VerificationDecision assemble(const std::vector<Structure>& gs, bool parallel, DecisionMethod method,
                              const std::function<std::optional<Structure>(const Structure&)>& decide) {
    std::vector<std::optional<Structure>> ext(gs.size());
    std::atomic<bool> over{false};
    std::string message;
    const auto n = static_cast<std::int64_t>(gs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t k = 0; k < n; ++k) {
        if (over.load()) continue;
        try {
            ext[static_cast<std::size_t>(k)] = decide(gs[static_cast<std::size_t>(k)]);
        } catch (const BudgetExceeded& e) {
#pragma omp critical
            message = e.what();
            over.store(true);
        }
    }
    if (over) throw BudgetExceeded(message);

    VerificationDecision d;
    d.method = method;
    d.fibre_size = gs.size();
    d.holds = true;
    for (std::size_t k = 0; k < gs.size(); ++k) {
        if (!ext[k]) {
            d.holds = false;
            d.counterexample = gs[k];
            d.witnesses.clear();
            break;
        }
        d.witnesses.emplace_back(gs[k], *ext[k]);
    }
    return d;
}

}  // namespace

VerificationDecision exists_verification(const ExactnessSequent& s, const FiniteCategory& c, const Structure& f,
                                         const VerifyOptions& opts) {
    require_structure(s, c, f);
    auto gs = alpha_fibre(s, c, f, opts.budget, opts.parallel);
    const auto beta = SketchMorphism::inclusion(s.a);
    return assemble(gs, opts.parallel, DecisionMethod::strict, [&](const Structure& g) {
        auto h = first_in_fibre(beta, s.a, s.b, c, g, {opts.budget, false});
        if (h) h->sketch = s.b_name;
        return h;
    });
}

VerificationDecision exists_verification_upto_iso(const ExactnessSequent& s, const FiniteCategory& c,
                                                  const Structure& f, const VerifyOptions& opts) {
    require_structure(s, c, f);
    auto gs = alpha_fibre(s, c, f, opts.budget, opts.parallel);
    auto hs = enumerate_structures(s.b, c, {opts.budget, opts.parallel});
    std::vector<Structure> restricted;
    for (auto& h : hs) {
        h.sketch = s.b_name;
        restricted.push_back(restrict_to_subsketch(s.a, s.b, h));
    }
    return assemble(gs, opts.parallel, DecisionMethod::up_to_iso, [&](const Structure& g) -> std::optional<Structure> {
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (find_natural_iso(s.a, c, restricted[i], g)) return hs[i];
        }
        return std::nullopt;
    });
}

std::vector<NatTransformation> fibre_morphisms(const ExactnessSequent& s, const FiniteCategory& c,
                                               const Structure& g, const Structure& h) {
    PinnedComponents pins(s.a.graph.vertices.size());
    for (const auto& v : s.x.graph.vertices) {
        auto i = *s.a.graph.vertex_index(v);
        pins[i] = c.identity(g.objects[i]);
    }
    return enumerate_nat_transformations(s.a, c, g, h, pins);
}

namespace {

VerificationDecision functorial_generic(const ExactnessSequent& s, const FiniteCategory& c, const Structure& f,
                                        const FunctorialOptions& opts) {
    auto gs = alpha_fibre(s, c, f, opts.budget, true);
    const auto beta = SketchMorphism::inclusion(s.a);
    const std::size_t n = gs.size();

    VerificationDecision d;
    d.method = DecisionMethod::functorial_generic;
    d.fibre_size = n;

    // Candidate sections per object; an empty fibre settles the question.
    std::vector<std::vector<Structure>> cands(n);
    for (std::size_t k = 0; k < n; ++k) {
        cands[k] = fibre(beta, s.a, s.b, c, gs[k], {opts.budget, true});
        for (auto& h : cands[k]) h.sketch = s.b_name;
        if (cands[k].empty()) {
            d.holds = false;
            d.counterexample = gs[k];
            return d;
        }
    }

    // Morphisms of the fibre category, their identities and composites.
    struct Mor {
        std::size_t from, to;
        NatTransformation t;
        bool identity;
    };
    std::vector<Mor> mors;
    std::vector<std::vector<std::vector<std::size_t>>> hom(n, std::vector<std::vector<std::size_t>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (auto& t : fibre_morphisms(s, c, gs[i], gs[j])) {
                bool id = i == j && t == identity_transformation(c, gs[i]);
                hom[i][j].push_back(mors.size());
                mors.push_back({i, j, std::move(t), id});
            }
        }
    }

    // Assignment order: object k, then every morphism among objects 0..k
    // that touches k.
    struct Step {
        bool object;
        std::size_t index;
    };
    std::vector<Step> order;
    std::vector<std::size_t> position(mors.size());
    for (std::size_t k = 0; k < n; ++k) {
        order.push_back({true, k});
        for (std::size_t m = 0; m < mors.size(); ++m) {
            if (std::max(mors[m].from, mors[m].to) == k) {
                position[m] = order.size();
                order.push_back({false, m});
            }
        }
    }

    // Composition triples (m1, m2, m2 . m1), checked at the last of the
    // three to be assigned.
    struct Triple {
        std::size_t first, second, composite;
    };
    std::vector<std::vector<Triple>> triples_at(order.size());
    for (std::size_t m1 = 0; m1 < mors.size(); ++m1) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t m2 : hom[mors[m1].to][k]) {
                auto comp = compose_transformations(c, mors[m2].t, mors[m1].t);
                std::optional<std::size_t> m3;
                for (std::size_t cand : hom[mors[m1].from][k]) {
                    if (mors[cand].t == comp) {
                        m3 = cand;
                        break;
                    }
                }
                if (!m3) throw std::logic_error("fibre morphisms are not closed under composition");
                auto last = std::max({position[m1], position[m2], position[*m3]});
                triples_at[last].push_back({m1, m2, *m3});
            }
        }
    }

    std::vector<std::size_t> section(n);
    std::vector<std::optional<NatTransformation>> lifts(mors.size());
    std::uint64_t nodes = 0;
    auto tick = [&] {
        if (++nodes > opts.cap) {
            throw BudgetExceeded("functorial search exceeded its cap of " + std::to_string(opts.cap) + " nodes");
        }
    };
    auto triples_ok = [&](std::size_t p) {
        for (const auto& t : triples_at[p]) {
            if (!(compose_transformations(c, *lifts[t.second], *lifts[t.first]) == *lifts[t.composite])) {
                return false;
            }
        }
        return true;
    };

    std::function<bool(std::size_t)> rec = [&](std::size_t p) -> bool {
        if (p == order.size()) return true;
        const Step& st = order[p];
        if (st.object) {
            for (std::size_t o = 0; o < cands[st.index].size(); ++o) {
                tick();
                section[st.index] = o;
                if (rec(p + 1)) return true;
            }
            return false;
        }
        const Mor& m = mors[st.index];
        const Structure& hi = cands[m.from][section[m.from]];
        const Structure& hj = cands[m.to][section[m.to]];
        std::vector<NatTransformation> options;
        if (m.identity) {
            options.push_back(identity_transformation(c, hi));
        } else {
            PinnedComponents pins(s.b.graph.vertices.size());
            for (std::size_t v = 0; v < s.a.graph.vertices.size(); ++v) {
                pins[*s.b.graph.vertex_index(s.a.graph.vertices[v])] = m.t.components[v];
            }
            options = enumerate_nat_transformations(s.b, c, hi, hj, pins);
        }
        for (auto& t : options) {
            tick();
            lifts[st.index] = std::move(t);
            if (triples_ok(p) && rec(p + 1)) return true;
        }
        lifts[st.index].reset();
        return false;
    };

    d.holds = rec(0);
    if (d.holds) {
        for (std::size_t k = 0; k < n; ++k) d.witnesses.emplace_back(gs[k], cands[k][section[k]]);
    }
    // Every fibre is non-empty here, so a failure has no single G to blame.
    return d;
}

}  // namespace

VerificationDecision exists_functorial_verification(const ExactnessSequent& s, const FiniteCategory& c,
                                                    const Structure& f, const FunctorialOptions& opts) {
    require_structure(s, c, f);
    if (!opts.force_generic) {
        bool certified = false;
        try {
            certified = certify_constructible(s.a, s.b, {opts.construct_budget}).constructible();
        } catch (const BudgetExceeded&) {
        }
        if (certified) {
            auto d = exists_verification(s, c, f, {opts.budget, true});
            d.method = DecisionMethod::functorial_delegated;
            return d;
        }
    }
    return functorial_generic(s, c, f, opts);
}

}  // namespace sketchkit
