#include <catch2/catch_amalgamated.hpp>

#include "mfl/gf_matrix.hpp"

using namespace mfl;

namespace {

GFMatrix identity(const Field& f, int n, std::vector<int> labels) {
    GFMatrix m(f, n, std::move(labels));
    for (int i = 0; i < n; ++i) m.set_int(i, i, 1);
    return m;
}

GFMatrix from_rows(const Field& f, std::vector<int> labels, std::vector<std::vector<u64>> rows) {
    GFMatrix m(f, static_cast<int>(rows.size()), std::move(labels));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            m.set_int(i, j, rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return m;
}

// all subsets of labels whose columns are independent
std::vector<std::vector<int>> independent_sets(const GFMatrix& m) {
    std::vector<std::vector<int>> out;
    int n = m.cols();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) s.push_back(m.labels()[static_cast<size_t>(j)]);
        std::sort(s.begin(), s.end());
        if (columns_independent(m, s)) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("rank basics") {
    Field f2 = field_new(2);
    CHECK(rank(identity(f2, 3, {1, 2, 3})) == 3);

    Field f5 = field_new(5);
    GFMatrix z(f5, 2, {1, 2, 3, 4});
    CHECK(rank(z) == 0);

    GFMatrix ones = from_rows(f2, {1, 2}, {{1, 1}, {1, 1}});
    CHECK(rank(ones) == 1);

    CHECK_THROWS_AS(rank(ones, std::vector<int>{7}), std::invalid_argument);
}

TEST_CASE("columns_independent") {
    Field f2 = field_new(2);
    GFMatrix id2 = identity(f2, 2, {1, 2});
    CHECK(columns_independent(id2, {1, 2}));
    CHECK(columns_independent(id2, {}));

    Field f5 = field_new(5);
    GFMatrix vand = from_rows(f5, {1, 2, 3}, {{1, 1, 1}, {1, 2, 3}});
    CHECK(columns_independent(vand, {1, 2}));
    CHECK_FALSE(columns_independent(vand, {1, 2, 3}));  // more columns than rows
}

TEST_CASE("wedge vectors") {
    Field f5 = field_new(5);
    GFMatrix vand = from_rows(f5, {1, 2, 3}, {{1, 1, 1}, {1, 2, 3}});

    // alpha = 1: the column itself
    auto w1 = wedge_vector(vand, {2});
    REQUIRE(w1.size() == 2);
    CHECK(w1[0] == f5.from_int(1));
    CHECK(w1[1] == f5.from_int(2));

    // alpha = 2 on 2 rows: single entry, det [[1,1],[2,3]] = 1
    auto w2 = wedge_vector(vand, {2, 3});
    REQUIRE(w2.size() == 1);
    CHECK(w2[0] == f5.from_int(1));

    // dependent set -> all-zero vector
    Field f2 = field_new(2);
    GFMatrix ones = from_rows(f2, {1, 2}, {{1, 1}, {1, 1}});
    auto wz = wedge_vector(ones, {1, 2});
    REQUIRE(wz.size() == 1);
    CHECK(wz[0].is_zero());

    CHECK_THROWS_AS(wedge_vector(vand, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("wedge nonzero iff independent, all small matrices") {
    Rng rng(11);
    for (u64 p : {2ULL, 5ULL}) {
        Field f = field_new(p);
        for (int trial = 0; trial < 40; ++trial) {
            int r = 1 + static_cast<int>(rng.below(4));
            int n = 1 + static_cast<int>(rng.below(8));
            std::vector<int> labels(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) labels[static_cast<size_t>(j)] = j + 1;
            GFMatrix m(f, r, labels);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < n; ++j)
                    m.set_int(i, j, rng.below(p));
            int mism = 0;
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> s;
                for (int j = 0; j < n; ++j)
                    if (mask & (1u << j)) s.push_back(j + 1);
                if (static_cast<int>(s.size()) > r) continue;
                auto w = wedge_vector(m, s);
                bool nonzero = false;
                for (const auto& e : w)
                    if (!e.is_zero()) nonzero = true;
                if (nonzero != columns_independent(m, s)) ++mism;
            }
            INFO("p=" << p << " trial=" << trial);
            CHECK(mism == 0);
        }
    }
}

TEST_CASE("dualize U_{1,2}") {
    Field f2 = field_new(2);
    GFMatrix m = from_rows(f2, {1, 2}, {{1, 1}});
    GFMatrix dual = dualize(m);
    // dual of U_{1,2} is U_{1,2}: singletons independent, full set not
    CHECK(columns_independent(dual, {1}));
    CHECK(columns_independent(dual, {2}));
    CHECK_FALSE(columns_independent(dual, {1, 2}));
}

TEST_CASE("dual of free matroid has rank 0") {
    Field f3 = field_new(3);
    GFMatrix id3 = identity(f3, 3, {1, 2, 3});
    GFMatrix dual = dualize(id3);
    CHECK(dual.rows() == 0);
    CHECK(rank(dual) == 0);
    CHECK(columns_independent(dual, {}));
    CHECK_FALSE(columns_independent(dual, {1}));
}

TEST_CASE("double dual preserves independence") {
    Rng rng(13);
    for (u64 p : {2ULL, 3ULL, 7ULL}) {
        Field f = field_new(p);
        for (int trial = 0; trial < 30; ++trial) {
            int r = 1 + static_cast<int>(rng.below(4));
            int n = 1 + static_cast<int>(rng.below(8));
            std::vector<int> labels(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) labels[static_cast<size_t>(j)] = j + 1;
            GFMatrix m(f, r, labels);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < n; ++j)
                    m.set_int(i, j, rng.below(p));
            GFMatrix dd = dualize(dualize(m));
            CHECK(independent_sets(m) == independent_sets(dd));
        }
    }
}

TEST_CASE("block_diag") {
    Field f2 = field_new(2);
    GFMatrix a = from_rows(f2, {1, 2}, {{1, 1}});
    GFMatrix single = block_diag({a});
    CHECK(single.rows() == 1);
    CHECK(single.labels() == std::vector<int>{1, 2});

    GFMatrix u = from_rows(f2, {10}, {{1}});
    GFMatrix v = from_rows(f2, {20}, {{1}});
    GFMatrix both = block_diag({u, v});
    CHECK(both.rows() == 2);
    CHECK(both.get(0, 0) == f2.one());
    CHECK(both.get(1, 1) == f2.one());
    CHECK(both.get(0, 1).is_zero());
    CHECK(both.get(1, 0).is_zero());

    // U_{1,2} + U_{1,2}: {a,c} independent, {a,b} not
    GFMatrix b1 = from_rows(f2, {1, 2}, {{1, 1}});
    GFMatrix b2 = from_rows(f2, {3, 4}, {{1, 1}});
    GFMatrix sum = block_diag({b1, b2});
    CHECK(columns_independent(sum, {1, 3}));
    CHECK_FALSE(columns_independent(sum, {1, 2}));

    GFMatrix clash = from_rows(f2, {1}, {{1}});
    CHECK_THROWS_AS(block_diag({a, clash}), std::invalid_argument);

    Field f3 = field_new(3);
    GFMatrix other = from_rows(f3, {9}, {{1}});
    CHECK_THROWS_AS(block_diag({a, other}), std::invalid_argument);
}

TEST_CASE("rank invariant under row permutation and scaling") {
    Rng rng(17);
    Field f7 = field_new(7);
    for (int trial = 0; trial < 50; ++trial) {
        int r = 2 + static_cast<int>(rng.below(3));
        int n = 1 + static_cast<int>(rng.below(6));
        std::vector<int> labels(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) labels[static_cast<size_t>(j)] = j + 1;
        GFMatrix m(f7, r, labels);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j)
                m.set_int(i, j, rng.below(7));
        int base = rank(m);

        // random row permutation + nonzero row scalings
        std::vector<int> perm(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) perm[static_cast<size_t>(i)] = i;
        for (int i = r - 1; i > 0; --i)
            std::swap(perm[static_cast<size_t>(i)], perm[rng.below(static_cast<u64>(i + 1))]);
        GFMatrix t(f7, r, labels);
        for (int i = 0; i < r; ++i) {
            u64 scale = 1 + rng.below(6);
            for (int j = 0; j < n; ++j) {
                FieldElem e = m.get(perm[static_cast<size_t>(i)], j);
                t.set(i, j, e * f7.from_int(scale));
            }
        }
        CHECK(rank(t) == base);
    }
}

TEST_CASE("row_reduced preserves column independence and has full row rank") {
    Rng rng(19);
    Field f3 = field_new(3);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        int n = 1 + static_cast<int>(rng.below(7));
        std::vector<int> labels(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) labels[static_cast<size_t>(j)] = j + 1;
        GFMatrix m(f3, r, labels);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j)
                m.set_int(i, j, rng.below(3));
        GFMatrix red = row_reduced(m);
        CHECK(red.rows() == rank(m));
        CHECK(independent_sets(m) == independent_sets(red));
    }
}

TEST_CASE("multiply_left and map_entries") {
    Rng rng(23);
    Field f5 = field_new(5);
    GFMatrix m = from_rows(f5, {1, 2}, {{1, 2}, {3, 4}});
    // T = [[1, 1]]
    std::vector<u64> t = {1, 1};
    GFMatrix prod = multiply_left(t, 1, m);
    CHECK(prod.rows() == 1);
    CHECK(prod.get(0, 0) == f5.from_int(4));
    CHECK(prod.get(0, 1) == f5.from_int(1));  // 2+4 = 6 = 1 mod 5

    auto [f25, emb] = extend_and_embed(f5, 2, rng);
    GFMatrix big = map_entries(m, emb);
    CHECK(big.field().same(f25));
    CHECK(big.get(1, 0) == f25.from_coeffs({3, 0}));
}

TEST_CASE("select_columns keeps order and entries") {
    Field f5 = field_new(5);
    GFMatrix m = from_rows(f5, {4, 7, 9}, {{1, 2, 3}, {4, 0, 1}});
    GFMatrix s = select_columns(m, {9, 4});
    CHECK(s.labels() == std::vector<int>{4, 9});
    CHECK(s.get(0, 1) == f5.from_int(3));
    CHECK(s.get(1, 0) == f5.from_int(4));
}
