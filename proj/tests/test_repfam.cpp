#include <catch2/catch_amalgamated.hpp>

#include "mfl/oracle.hpp"
#include "mfl/repfam.hpp"

using namespace mfl;

namespace {

WeightedFamily fam(std::vector<std::pair<std::vector<int>, i64>> items) {
    std::vector<FamilySet> sets;
    for (auto& [e, w] : items) sets.push_back(FamilySet{std::move(e), w});
    return WeightedFamily::of(std::move(sets));
}

WeightedFamily entries_to_family(const std::vector<RepEntry>& entries) {
    WeightedFamily f;
    for (const auto& e : entries) f.sets.push_back(FamilySet{e.set, e.weight});
    return f;
}

// every disjoint union of `alpha` family members independent in all matroids
WeightedFamily all_unions(const std::vector<Matroid>& ms, const WeightedFamily& h, int alpha) {
    std::vector<FamilySet> acc;
    std::vector<std::pair<std::vector<int>, i64>> stack = {{{}, 0}};
    for (int i = 0; i < alpha; ++i) {
        std::vector<std::pair<std::vector<int>, i64>> next;
        for (const auto& [set, w] : stack) {
            for (const auto& s : h.sets) {
                if (!detail::disjoint_sorted(s.elems, set)) continue;
                auto u = detail::union_sorted(s.elems, set);
                bool ok = true;
                for (const auto& m : ms)
                    if (!m.contains_and_independent(u)) ok = false;
                if (ok) next.emplace_back(std::move(u), w + s.weight);
            }
        }
        stack = std::move(next);
    }
    std::map<std::vector<int>, i64> best;
    for (auto& [set, w] : stack) {
        auto it = best.find(set);
        if (it == best.end() || w > it->second) best[set] = w;
    }
    WeightedFamily out;
    for (auto& [set, w] : best) out.sets.push_back(FamilySet{set, w});
    return out;
}

}  // namespace

TEST_CASE("rep_single basics") {
    Rng rng(1);
    Field f5 = field_new(5);
    Matroid u = Matroid::uniform({1, 2, 3}, 2);
    GFMatrix rep = compile_linear(u, f5, rng);

    CHECK(rep_single(rep, WeightedFamily{}, 1).sets.empty());

    // only dependent sets -> empty
    GFMatrix zero(f5, 2, {1, 2, 3});
    auto z = rep_single(zero, fam({{{1}, 5}, {{2}, 1}}), 1);
    CHECK(z.sets.empty());

    auto out = rep_single(rep, fam({{{1}, 1}, {{2}, 2}, {{3}, 3}}), 1);
    REQUIRE(out.sets.size() == 2);
    CHECK(out.sets[0].elems == std::vector<int>{3});
    CHECK(out.sets[1].elems == std::vector<int>{2});

    auto verdict = verify_representative(u, u.ground(), fam({{{1}, 1}, {{2}, 2}, {{3}, 3}}), out, 1);
    CHECK(verdict.pass);

    // empty candidate against an extendable family must fail
    auto bad = verify_representative(u, u.ground(), fam({{{1}, 1}}), WeightedFamily{}, 1);
    CHECK_FALSE(bad.pass);

    // a family always represents itself
    auto self_ok = verify_representative(u, u.ground(), fam({{{1}, 1}, {{2}, 2}}),
                                         fam({{{1}, 1}, {{2}, 2}}), 1);
    CHECK(self_ok.pass);

    CHECK_THROWS_AS(rep_single(rep, fam({{{1}, 1}, {{2, 3}, 2}}), 1), std::invalid_argument);
    CHECK_THROWS_AS(rep_single(rep, fam({{{1, 2}, 1}}), 2), std::invalid_argument);  // alpha+beta > r
}

TEST_CASE("rep_single output bounded by C(r, alpha)") {
    Rng rng(2);
    Field f13 = field_new(13);
    Matroid u = Matroid::uniform({1, 2, 3, 4, 5, 6, 7, 8}, 4);
    GFMatrix rep = compile_linear(u, f13, rng);
    std::vector<FamilySet> pairs;
    i64 w = 0;
    for (int a = 1; a <= 8; ++a)
        for (int b = a + 1; b <= 8; ++b) pairs.push_back(FamilySet{{a, b}, (w++ * 7) % 11});
    auto out = rep_single(rep, WeightedFamily::of(pairs), 2);
    CHECK(out.sets.size() <= detail::binomial(4, 2));

    auto verdict = verify_representative(u, u.ground(), WeightedFamily::of(pairs), out, 2);
    CHECK(verdict.pass);
}

TEST_CASE("rep_unions collapses and recovers the best union") {
    Rng rng(3);
    Field f5 = field_new(5);
    Matroid u = Matroid::uniform({1, 2, 3}, 2);
    GFMatrix rep = compile_linear(u, f5, rng);
    WeightedFamily h = fam({{{1}, 5}, {{2}, 1}, {{3}, 2}});

    auto out = rep_unions(rep, h, 2, 0, Iumf::additive());
    REQUIRE(out.size() == 1);
    CHECK(out[0].set == std::vector<int>{1, 3});
    CHECK(out[0].weight == 7);
    CHECK(out[0].witness_indices() == std::vector<int>{0, 2});  // {1} then {3}

    // alpha = 0: single empty entry carrying the base value
    auto base = rep_unions(rep, h, 0, 2, Iumf::additive(9));
    REQUIRE(base.size() == 1);
    CHECK(base[0].set.empty());
    CHECK(base[0].weight == 9);

    // alpha=1, beta=0 on a rank-1 representation: single best member
    Matroid u1 = Matroid::uniform({1, 2, 3}, 1);
    GFMatrix rep1 = compile_linear(u1, f5, rng);
    auto single = rep_unions(rep1, h, 1, 0, Iumf::additive());
    REQUIRE(single.size() == 1);
    CHECK(single[0].set == std::vector<int>{1});
    CHECK(single[0].weight == 5);
}

TEST_CASE("rep_unions witness soundness and additivity") {
    Rng rng(4);
    Field f13 = field_new(13);
    for (int trial = 0; trial < 30; ++trial) {
        Rng trng = rng.fork(static_cast<u64>(trial));
        int n = 6 + static_cast<int>(trng.below(3));
        int gamma = 1 + static_cast<int>(trng.below(2));
        int alpha = 1 + static_cast<int>(trng.below(2));
        int beta = static_cast<int>(trng.below(2));
        int r = (alpha + beta) * gamma;
        if (r > n) continue;
        std::vector<int> ground(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) ground[static_cast<size_t>(i)] = i + 1;
        Matroid u = Matroid::uniform(ground, r);
        GFMatrix rep = compile_linear(u, f13, trng);

        // random gamma-family
        std::vector<FamilySet> sets;
        std::set<std::vector<int>> dedup;
        int want = 3 + static_cast<int>(trng.below(5));
        for (int i = 0; i < want * 3 && static_cast<int>(sets.size()) < want; ++i) {
            std::vector<int> s;
            while (static_cast<int>(s.size()) < gamma) {
                int x = 1 + static_cast<int>(trng.below(static_cast<u64>(n)));
                if (!detail::contains_sorted(s, x)) s.insert(std::lower_bound(s.begin(), s.end(), x), x);
            }
            if (dedup.insert(s).second) sets.push_back(FamilySet{s, trng.range(-5, 9)});
        }
        WeightedFamily h = WeightedFamily::of(sets);

        Iumf add = Iumf::additive();
        auto out = rep_unions(rep, h, alpha, beta, add);
        CHECK(out.size() <= detail::binomial(static_cast<u64>(r), static_cast<u64>(alpha * gamma)));

        for (const auto& e : out) {
            // witness chain: disjoint members of h whose union is the set and
            // whose weights sum to the stored weight
            auto idx = e.witness_indices();
            REQUIRE(static_cast<int>(idx.size()) == alpha);
            std::vector<int> acc;
            i64 total = 0;
            for (int hi : idx) {
                const auto& member = h.sets[static_cast<size_t>(hi)];
                CHECK(detail::disjoint_sorted(acc, member.elems));
                acc = detail::union_sorted(acc, member.elems);
                total += member.weight;
            }
            CHECK(acc == e.set);
            CHECK(total == e.weight);
        }

        // representative property against the full union family
        WeightedFamily full = all_unions({u}, h, alpha);
        auto verdict = verify_representative(u, u.ground(), full, entries_to_family(out), beta * gamma);
        INFO("trial " << trial << " n=" << n << " gamma=" << gamma << " alpha=" << alpha << " beta=" << beta);
        CHECK(verdict.pass);
    }
}

TEST_CASE("blowup properties") {
    Rng rng(5);
    Field f7 = field_new(7);
    Matroid m1 = Matroid::uniform({1, 2}, 1);
    Matroid m2 = Matroid::uniform({1, 2}, 2);
    GFMatrix r1 = compile_linear(m1, f7, rng);
    GFMatrix r2 = compile_linear(m2, f7, rng);

    // single input: relabeled copy, independence unchanged
    Blowup single = blowup({r1});
    CHECK(single.rep.rows() == r1.rows());
    for (unsigned mask = 0; mask < 4; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 2; ++i)
            if (mask & (1u << i)) s.push_back(i + 1);
        CHECK(columns_independent(single.rep, single.map_set(s)) == m1.is_independent(s));
    }

    Blowup b = blowup({r1, r2});
    CHECK(b.rep.rows() == r1.rows() + r2.rows());
    CHECK(b.map_set(std::vector<int>{1}) == std::vector<int>{0, 1});

    // property (iv): S independent in both iff the blown set is independent
    for (unsigned mask = 0; mask < 4; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 2; ++i)
            if (mask & (1u << i)) s.push_back(i + 1);
        bool both = m1.is_independent(s) && m2.is_independent(s);
        CHECK(columns_independent(b.rep, b.map_set(s)) == both);
    }

    // properties (i)-(iii) on random pairs
    Rng prng(6);
    for (int it = 0; it < 100; ++it) {
        std::vector<int> s, t;
        for (int x : {1, 2}) {
            if (prng.below(2)) s.push_back(x);
            if (prng.below(2)) t.push_back(x);
        }
        CHECK(b.map_set(detail::union_sorted(s, t)) ==
              detail::union_sorted(b.map_set(s), b.map_set(t)));
        CHECK((s == t) == (b.map_set(s) == b.map_set(t)));
        CHECK(detail::disjoint_sorted(s, t) ==
              detail::disjoint_sorted(b.map_set(s), b.map_set(t)));
        CHECK(b.unmap_set(b.map_set(s)) == s);
    }

    CHECK_THROWS_AS(b.unmap_set(std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("rep_intersection single matroid matches rep_unions") {
    Rng rng(7);
    Field f5 = field_new(5);
    Matroid u = Matroid::uniform({1, 2, 3}, 2);
    GFMatrix rep = compile_linear(u, f5, rng);
    WeightedFamily h = fam({{{1}, 5}, {{2}, 1}, {{3}, 2}});
    auto a = rep_unions(rep, h, 2, 0, Iumf::additive());
    auto b = rep_intersection({rep}, h, 2, 0, Iumf::additive());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].set == b[i].set);
        CHECK(a[i].weight == b[i].weight);
    }
}

TEST_CASE("rep_intersection respects the second matroid") {
    Rng rng(8);
    Field f5 = field_new(5);
    Matroid u = Matroid::uniform({1, 2, 3}, 2);
    Matroid p = Matroid::partition({{{1, 2}, 1}, {{3}, 1}});
    GFMatrix ru = compile_linear(u, f5, rng);
    GFMatrix rp = compile_linear(p, f5, rng);
    REQUIRE(ru.rows() == 2);
    REQUIRE(rp.rows() == 2);

    WeightedFamily h = fam({{{1}, 3}, {{2}, 1}, {{3}, 2}});
    auto out = rep_intersection({ru, rp}, h, 2, 0, Iumf::additive());
    REQUIRE(out.size() == 1);
    CHECK(out[0].set == std::vector<int>{1, 3});  // {1,2} blocked by the partition matroid
    CHECK(out[0].weight == 5);
}

TEST_CASE("rep_intersection beta=0 yields one entry on feasible instances") {
    Rng rng(9);
    // base prime large enough that rank truncations stay inside the field
    Field fbig = field_new(detail::next_prime_at_least(400'000'000ULL));
    CompileOptions copts{1e-6};
    int feasible_seen = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng trng = rng.fork(static_cast<u64>(trial));
        int n = 5 + static_cast<int>(trng.below(4));
        int alpha = 1 + static_cast<int>(trng.below(3));
        std::vector<int> ground(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) ground[static_cast<size_t>(i)] = i + 1;
        Matroid m1 = Matroid::uniform(ground, alpha);
        std::vector<std::pair<std::vector<int>, int>> blocks;
        std::vector<int> cur;
        for (int x : ground) {
            cur.push_back(x);
            if (static_cast<int>(cur.size()) == 2 + static_cast<int>(trng.below(2)) || x == n) {
                blocks.emplace_back(cur, 1 + static_cast<int>(trng.below(2)));
                cur.clear();
            }
        }
        Matroid m2 = Matroid::partition(blocks).truncated(alpha);
        if (m2.rank() < alpha) continue;
        GFMatrix r1 = compile_linear(m1, fbig, trng, copts);
        GFMatrix r2raw = compile_linear(m2, fbig, trng, copts);
        if (r2raw.rows() != alpha || mfl::rank(r2raw) != alpha) continue;

        std::vector<FamilySet> sets;
        for (int x : ground) sets.push_back(FamilySet{{x}, trng.range(0, 9)});
        WeightedFamily h = WeightedFamily::of(sets);

        auto out = rep_intersection({r1, r2raw}, h, alpha, 0, Iumf::additive());
        WeightedFamily full = all_unions({m1, m2}, h, alpha);
        if (!full.sets.empty()) {
            ++feasible_seen;
            REQUIRE(out.size() == 1);
            i64 best = full.sets.front().weight;
            for (const auto& s : full.sets) best = std::max(best, s.weight);
            CHECK(out[0].weight == best);
        } else {
            CHECK(out.empty());
        }
    }
    CHECK(feasible_seen >= 20);
}

TEST_CASE("iumf monotonicity is sampled and enforced") {
    Rng rng(10);
    Field f5 = field_new(5);
    GFMatrix rep = compile_linear(Matroid::uniform({1, 2, 3}, 2), f5, rng);
    Iumf bad;
    bad.base = 0;
    bad.gen = [](i64 v, const FamilySet& h) { return -v + h.weight; };  // decreasing
    CHECK_THROWS_AS(rep_unions(rep, fam({{{1}, 1}, {{2}, 2}}), 2, 0, bad), std::invalid_argument);
}

TEST_CASE("iumf evaluation meter counts generator calls") {
    Rng rng(11);
    Field f5 = field_new(5);
    GFMatrix rep = compile_linear(Matroid::uniform({1, 2, 3}, 2), f5, rng);
    Iumf add = Iumf::additive();
    u64 before = add.eval_count();
    rep_unions(rep, fam({{{1}, 5}, {{2}, 1}, {{3}, 2}}), 2, 0, add);
    CHECK(add.eval_count() > before);
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    Field f13 = field_new(13);
    auto run = [&] {
        Rng rng(12);
        Matroid u = Matroid::uniform({1, 2, 3, 4, 5, 6}, 4);
        GFMatrix rep = compile_linear(u, f13, rng);
        WeightedFamily h = fam({{{1, 2}, 3}, {{3, 4}, 3}, {{5, 6}, 1}, {{1, 3}, 2}, {{2, 4}, 3}});
        return rep_unions(rep, h, 2, 0, Iumf::additive());
    };
    auto a = run();
    auto b = run();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].set == b[i].set);
        CHECK(a[i].weight == b[i].weight);
        CHECK(a[i].witness_indices() == b[i].witness_indices());
    }
}
