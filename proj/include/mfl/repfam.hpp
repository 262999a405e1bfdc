#ifndef MFL_REPFAM_HPP
#define MFL_REPFAM_HPP

#include <atomic>
#include <map>

#include "mfl/matroid.hpp"

namespace mfl {

struct FamilySet {
    std::vector<int> elems;  // sorted, unique
    i64 weight = 0;
};

// Family of element sets with signed weights. Ties between equal weights are
// broken lexicographically on the sorted element lists, so every routine
// built on top is deterministic.
struct WeightedFamily {
    std::vector<FamilySet> sets;

    static WeightedFamily of(std::vector<FamilySet> sets) {
        WeightedFamily f;
        for (auto& s : sets) {
            std::sort(s.elems.begin(), s.elems.end());
            if (std::adjacent_find(s.elems.begin(), s.elems.end()) != s.elems.end())
                throw std::invalid_argument("WeightedFamily: set with repeated element");
        }
        std::vector<std::vector<int>> seen;
        for (const auto& s : sets) seen.push_back(s.elems);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw std::invalid_argument("WeightedFamily: duplicate sets");
        f.sets = std::move(sets);
        return f;
    }

    // all member sets share one cardinality; nullopt for mixed or empty
    std::optional<int> uniform_cardinality() const {
        if (sets.empty()) return std::nullopt;
        size_t c = sets.front().elems.size();
        for (const auto& s : sets)
            if (s.elems.size() != c) return std::nullopt;
        return static_cast<int>(c);
    }
};

// Inductive union maximizing weight: fully determined by the value on the
// empty set and a generator non-decreasing in its value argument.
struct Iumf {
    i64 base = 0;
    std::function<i64(i64, const FamilySet&)> gen;
    std::shared_ptr<std::atomic<u64>> evals = std::make_shared<std::atomic<u64>>(0);

    i64 apply(i64 value, const FamilySet& h) const {
        evals->fetch_add(1, std::memory_order_relaxed);
        return gen(value, h);
    }

    u64 eval_count() const { return evals->load(std::memory_order_relaxed); }

    static Iumf additive(i64 base = 0) {
        Iumf f;
        f.base = base;
        f.gen = [](i64 v, const FamilySet& h) { return v + h.weight; };
        return f;
    }

    // sampled sanity check of monotonicity in the first argument
    void check_monotone(const WeightedFamily& family, Rng rng, int samples = 24) const {
        if (family.sets.empty()) return;
        for (int i = 0; i < samples; ++i) {
            i64 a = rng.range(-64, 64);
            i64 b = a + rng.range(0, 64);
            const FamilySet& h = family.sets[rng.below(family.sets.size())];
            if (gen(a, h) > gen(b, h))
                throw std::invalid_argument("Iumf: generator is not non-decreasing in its value argument");
        }
    }
};

struct WitnessNode {
    int h_index;  // member of the input family
    std::shared_ptr<const WitnessNode> parent;
};

struct RepEntry {
    std::vector<int> set;  // sorted
    i64 weight = 0;
    std::shared_ptr<const WitnessNode> witness;  // chain of family members forming `set`

    // family-member indices along the witness chain, outermost last
    std::vector<int> witness_indices() const {
        std::vector<int> idx;
        for (const WitnessNode* w = witness.get(); w; w = w->parent.get())
            idx.push_back(w->h_index);
        std::reverse(idx.begin(), idx.end());
        return idx;
    }
};

namespace detail {

struct RepCandidate {
    std::vector<int> set;
    i64 weight;
    std::shared_ptr<const WitnessNode> witness;
};

// Greedy wedge-basis selection: sort by weight (ties lexicographic), keep a
// set while its wedge vector is outside the span of the kept ones. Keeps at
// most C(rows, alpha) sets and yields a max q-representative of the input.
// Sets with zero wedge vectors (dependent columns) are dropped. Returns the
// retained candidate indices in retained order.
inline std::vector<int> wedge_greedy_select(const GFMatrix& rep, const std::vector<RepCandidate>& cands) {
    std::vector<int> order(cands.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (cands[static_cast<size_t>(a)].weight != cands[static_cast<size_t>(b)].weight)
            return cands[static_cast<size_t>(a)].weight > cands[static_cast<size_t>(b)].weight;
        return cands[static_cast<size_t>(a)].set < cands[static_cast<size_t>(b)].set;
    });
    if (cands.empty()) return {};

    const Field& f = rep.field();
    int d = f.degree();
    int alpha = static_cast<int>(cands.front().set.size());
    WedgePlan plan(rep.rows(), alpha);
    size_t len = plan.level_size(alpha) * static_cast<size_t>(d);

    std::vector<std::vector<u64>> basis;   // normalized: leading entry 1
    std::vector<size_t> pivots;            // leading coefficient offset (multiple of d)
    std::vector<int> kept;
    std::vector<u64> vec, tmp(static_cast<size_t>(d)), coef(static_cast<size_t>(d));
    for (int ci : order) {
        wedge_vector_flat(rep, cands[static_cast<size_t>(ci)].set, plan, vec);
        // eliminate against the basis
        for (size_t b = 0; b < basis.size(); ++b) {
            const u64* lead = vec.data() + pivots[b];
            if (f.is_zero(lead)) continue;
            std::copy(lead, lead + d, coef.data());
            const auto& bv = basis[b];
            for (size_t off = pivots[b]; off < len; off += static_cast<size_t>(d)) {
                if (f.is_zero(bv.data() + off)) continue;
                f.mul(tmp.data(), coef.data(), bv.data() + off);
                f.sub(vec.data() + off, vec.data() + off, tmp.data());
            }
        }
        size_t piv = len;
        for (size_t off = 0; off < len; off += static_cast<size_t>(d)) {
            if (!f.is_zero(vec.data() + off)) { piv = off; break; }
        }
        if (piv == len) continue;  // zero vector: dependent or spanned
        f.inv(coef.data(), vec.data() + piv);
        for (size_t off = piv; off < len; off += static_cast<size_t>(d)) {
            f.mul(tmp.data(), coef.data(), vec.data() + off);
            std::copy(tmp.begin(), tmp.end(), vec.data() + off);
        }
        basis.push_back(vec);
        pivots.push_back(piv);
        kept.push_back(ci);
    }
    return kept;
}

inline void sort_candidates(std::vector<RepCandidate>& cands) {
    std::sort(cands.begin(), cands.end(), [](const RepCandidate& a, const RepCandidate& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.set < b.set;
    });
}

// Core of Algorithm-style staged representative computation for disjoint
// unions. `apply_gen(value, h_index)` folds in one family member. Stage i
// compresses only when the stage family exceeds C(r, gamma*i): a family no
// larger than the bound is already representative of itself.
inline std::vector<RepEntry> rep_unions_impl(const GFMatrix& rep,
                                             const std::vector<FamilySet>& family,
                                             int alpha, int beta, int gamma, i64 base,
                                             const std::function<i64(i64, int)>& apply_gen) {
    int r = rep.rows();
    if (alpha == 0) {
        return {RepEntry{{}, base, nullptr}};
    }
    if (r < 1) throw std::invalid_argument("rep_unions: rank must be at least 1");
    if (r != (alpha + beta) * gamma)
        throw std::invalid_argument("rep_unions: rank != (alpha+beta)*gamma");
    if (family.empty()) return {};

    struct Entry {
        i64 weight;
        std::shared_ptr<const WitnessNode> witness;
    };

    std::vector<RepCandidate> prev = {{{}, base, nullptr}};
    for (int stage = 1; stage <= alpha; ++stage) {
        std::map<std::vector<int>, Entry> merged;
        std::vector<int> united;
        for (const auto& s : prev) {
            for (size_t hi = 0; hi < family.size(); ++hi) {
                const auto& h = family[hi];
                if (!detail::disjoint_sorted(h.elems, s.set)) continue;
                united = detail::union_sorted(h.elems, s.set);
                if (!columns_independent(rep, united)) continue;
                i64 w = apply_gen(s.weight, static_cast<int>(hi));
                auto it = merged.find(united);
                if (it == merged.end()) {
                    merged.emplace(united,
                                   Entry{w, std::make_shared<WitnessNode>(WitnessNode{static_cast<int>(hi), s.witness})});
                } else if (w > it->second.weight) {
                    it->second = Entry{w, std::make_shared<WitnessNode>(WitnessNode{static_cast<int>(hi), s.witness})};
                }
            }
        }
        std::vector<RepCandidate> stage_sets;
        stage_sets.reserve(merged.size());
        for (auto& [set, e] : merged)
            stage_sets.push_back(RepCandidate{set, e.weight, std::move(e.witness)});
        sort_candidates(stage_sets);

        u64 bound = detail::binomial_capped(static_cast<u64>(r), static_cast<u64>(gamma * stage));
        if (stage_sets.size() > bound) {
            std::vector<int> kept = wedge_greedy_select(rep, stage_sets);
            std::vector<RepCandidate> compressed;
            compressed.reserve(kept.size());
            for (int ci : kept) compressed.push_back(std::move(stage_sets[static_cast<size_t>(ci)]));
            prev = std::move(compressed);
        } else {
            prev = std::move(stage_sets);
        }
    }

    std::vector<RepEntry> out;
    out.reserve(prev.size());
    for (auto& c : prev) out.push_back(RepEntry{std::move(c.set), c.weight, std::move(c.witness)});
    return out;
}

}  // namespace detail

// Max beta-representative of a family of alpha-sets with respect to its own
// weights, for the single matroid represented by `rep`.
inline WeightedFamily rep_single(const GFMatrix& rep, const WeightedFamily& family, int beta) {
    if (family.sets.empty()) return {};
    auto card = family.uniform_cardinality();
    if (!card) throw std::invalid_argument("rep_single: family members must share one cardinality");
    int alpha = *card;
    if (alpha + beta > rep.rows())
        throw std::invalid_argument("rep_single: alpha + beta exceeds the representation rank");

    std::vector<detail::RepCandidate> cands;
    cands.reserve(family.sets.size());
    for (const auto& s : family.sets) cands.push_back({s.elems, s.weight, nullptr});
    detail::sort_candidates(cands);
    std::vector<int> kept = detail::wedge_greedy_select(rep, cands);
    WeightedFamily out;
    for (int ci : kept)
        out.sets.push_back(FamilySet{std::move(cands[static_cast<size_t>(ci)].set),
                                     cands[static_cast<size_t>(ci)].weight});
    return out;
}

// Max beta*gamma-representative of { H_1 ⊎ ... ⊎ H_alpha independent } for a
// single matroid of rank (alpha+beta)*gamma, with witness chains recording
// the union decomposition.
inline std::vector<RepEntry> rep_unions(const GFMatrix& rep, const WeightedFamily& family,
                                        int alpha, int beta, const Iumf& w) {
    if (alpha < 0 || beta < 0) throw std::invalid_argument("rep_unions: negative parameters");
    int gamma = 1;
    if (!family.sets.empty()) {
        auto card = family.uniform_cardinality();
        if (!card || *card < 1)
            throw std::invalid_argument("rep_unions: family must be gamma-uniform with gamma >= 1");
        gamma = *card;
    }
    if (mfl::rank(rep) != rep.rows())
        throw std::invalid_argument("rep_unions: representation must have full row rank");
    w.check_monotone(family, Rng(0x1c0ffee));
    return detail::rep_unions_impl(rep, family.sets, alpha, beta, gamma, w.base,
                                   [&](i64 v, int hi) { return w.apply(v, family.sets[static_cast<size_t>(hi)]); });
}

// Relabeled m-fold copy of a universe: element u becomes the block
// {u^(1),...,u^(m)}; the direct sum of the m representations then realizes
// intersection of the m matroids on complete blocks.
struct Blowup {
    GFMatrix rep;                  // block-diagonal representation of the sum
    std::vector<int> orig_labels;  // sorted
    int copies = 1;

    int encode(int label, int copy) const {
        auto it = std::lower_bound(orig_labels.begin(), orig_labels.end(), label);
        if (it == orig_labels.end() || *it != label)
            throw std::invalid_argument("blowup: unknown label " + std::to_string(label));
        return static_cast<int>(it - orig_labels.begin()) * copies + copy;
    }

    std::pair<int, int> decode(int blown) const {
        int idx = blown / copies, copy = blown % copies;
        return {orig_labels[static_cast<size_t>(idx)], copy};
    }

    std::vector<int> map_set(std::span<const int> s) const {
        std::vector<int> out;
        out.reserve(s.size() * static_cast<size_t>(copies));
        for (int x : s)
            for (int j = 0; j < copies; ++j) out.push_back(encode(x, j));
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<int> unmap_set(std::span<const int> s) const {
        if (s.size() % static_cast<size_t>(copies) != 0)
            throw std::invalid_argument("blowup: set is not a union of complete blocks");
        std::vector<int> out;
        std::unordered_map<int, int> seen;
        for (int b : s) ++seen[decode(b).first];
        for (auto [label, count] : seen) {
            if (count != copies)
                throw std::invalid_argument("blowup: incomplete block for label " + std::to_string(label));
            out.push_back(label);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline Blowup blowup(const std::vector<GFMatrix>& reps) {
    if (reps.empty()) throw std::invalid_argument("blowup: no representations");
    Blowup b;
    b.copies = static_cast<int>(reps.size());
    b.orig_labels = detail::sorted_copy(reps.front().labels());
    const Field& f = reps.front().field();
    for (const auto& rep : reps) {
        if (!rep.field().same(f)) throw std::invalid_argument("blowup: field context mismatch");
        if (detail::sorted_copy(rep.labels()) != b.orig_labels)
            throw std::invalid_argument("blowup: representations must share one label set");
    }
    std::vector<GFMatrix> blocks;
    blocks.reserve(reps.size());
    for (size_t j = 0; j < reps.size(); ++j) {
        GFMatrix copy = reps[j];
        std::vector<int> labels;
        labels.reserve(copy.labels().size());
        for (int label : copy.labels()) labels.push_back(b.encode(label, static_cast<int>(j)));
        copy.relabel(std::move(labels));
        blocks.push_back(std::move(copy));
    }
    b.rep = block_diag(blocks);
    return b;
}

// Max intersection beta*gamma-representative for m matroids given as
// equal-rank representations over one field, via the blow-up reduction to a
// single matroid of rank r*m.
inline std::vector<RepEntry> rep_intersection(const std::vector<GFMatrix>& reps,
                                              const WeightedFamily& family,
                                              int alpha, int beta, const Iumf& w) {
    if (reps.empty()) throw std::invalid_argument("rep_intersection: no matroids");
    int r = reps.front().rows();
    for (const auto& rep : reps) {
        if (rep.rows() != r || mfl::rank(rep) != r)
            throw std::invalid_argument("rep_intersection: representations must all have full row rank r (truncate first)");
    }
    int gamma = 1;
    if (!family.sets.empty()) {
        auto card = family.uniform_cardinality();
        if (!card || *card < 1)
            throw std::invalid_argument("rep_intersection: family must be gamma-uniform with gamma >= 1");
        gamma = *card;
    }
    if (alpha == 0) return {RepEntry{{}, w.base, nullptr}};
    if (family.sets.empty()) return {};
    if (r != (alpha + beta) * gamma)
        throw std::invalid_argument("rep_intersection: rank != (alpha+beta)*gamma");
    w.check_monotone(family, Rng(0x1c0ffee));

    Blowup bl = blowup(reps);
    std::vector<FamilySet> blown;
    blown.reserve(family.sets.size());
    for (const auto& s : family.sets)
        blown.push_back(FamilySet{bl.map_set(s.elems), s.weight});

    int m = static_cast<int>(reps.size());
    auto entries = detail::rep_unions_impl(
        bl.rep, blown, alpha, beta, gamma * m, w.base,
        [&](i64 v, int hi) { return w.apply(v, family.sets[static_cast<size_t>(hi)]); });

    for (auto& e : entries) e.set = bl.unmap_set(e.set);
    return entries;
}

}  // namespace mfl

#endif
