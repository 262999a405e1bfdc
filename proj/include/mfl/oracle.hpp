#ifndef MFL_ORACLE_HPP
#define MFL_ORACLE_HPP

// Brute-force reference solvers and verifiers. Ground truth for the test
// batteries: no pruning, no shared code paths with the solvers beyond the
// matroid independence entry point and the profit formula.

#include "mfl/repfam.hpp"

namespace mfl {

struct RepVerdict {
    bool pass = true;
    std::string reason;
    std::vector<int> violating_extension;  // the Y witnessing failure
};

// Checks the two conditions of a max intersection q-representative for every
// extension set Y of size at most q, exhaustively over the given universe.
inline RepVerdict verify_representative(const std::vector<Matroid>& matroids,
                                        const std::vector<int>& universe,
                                        const WeightedFamily& full,
                                        const WeightedFamily& candidate, int q) {
    int n = static_cast<int>(universe.size());
    u64 work = 0;
    for (int j = 0; j <= q; ++j) work += detail::binomial_capped(static_cast<u64>(n), static_cast<u64>(j));
    if (work > 10'000'000ULL / std::max<size_t>(full.sets.size(), 1))
        throw std::invalid_argument("verify_representative: enumeration budget exceeded");

    // candidate must be a subfamily of full, weights included
    for (const auto& c : candidate.sets) {
        bool found = false;
        for (const auto& s : full.sets)
            if (s.elems == c.elems && s.weight == c.weight) { found = true; break; }
        if (!found)
            return {false, "candidate contains a set outside the family", c.elems};
    }

    auto extendable = [&](const FamilySet& x, const std::vector<int>& y) {
        if (!detail::disjoint_sorted(x.elems, y)) return false;
        std::vector<int> u = detail::union_sorted(x.elems, y);
        for (const auto& m : matroids)
            if (!m.contains_and_independent(u)) return false;
        return true;
    };

    RepVerdict verdict;
    std::vector<int> sorted_universe = detail::sorted_copy(universe);
    for (int j = 0; j <= q && verdict.pass; ++j) {
        detail::for_each_combination(n, j, [&](const std::vector<int>& comb) {
            if (!verdict.pass) return;
            std::vector<int> y;
            y.reserve(comb.size());
            for (int i : comb) y.push_back(sorted_universe[static_cast<size_t>(i)]);
            bool any = false;
            i64 best = 0;
            for (const auto& x : full.sets) {
                if (!extendable(x, y)) continue;
                if (!any || x.weight > best) best = x.weight;
                any = true;
            }
            if (!any) return;
            bool got = false;
            for (const auto& x : candidate.sets) {
                if (x.weight >= best && extendable(x, y)) { got = true; break; }
            }
            if (!got) {
                verdict.pass = false;
                verdict.reason = "no extendable candidate of sufficient weight";
                verdict.violating_extension = y;
            }
        });
    }
    return verdict;
}

inline RepVerdict verify_representative(const Matroid& matroid, const std::vector<int>& universe,
                                        const WeightedFamily& full, const WeightedFamily& candidate,
                                        int q) {
    return verify_representative(std::vector<Matroid>{matroid}, universe, full, candidate, q);
}

}  // namespace mfl

#endif
