#ifndef MFL_GF_MATRIX_HPP
#define MFL_GF_MATRIX_HPP

#include <bit>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mfl/field.hpp"

namespace mfl {

// Column-labeled matrix over a finite field. Entries live in flat row-major
// storage, d coefficient words per entry, so kernels run without per-element
// allocation. Immutable in spirit: mutate only while assembling.
class GFMatrix {
public:
    GFMatrix() = default;

    GFMatrix(Field f, int rows, std::vector<int> labels)
        : field_(std::move(f)), rows_(rows), labels_(std::move(labels)) {
        for (size_t i = 0; i < labels_.size(); ++i) {
            if (!label_index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("GFMatrix: duplicate column label " + std::to_string(labels_[i]));
        }
        data_.assign(static_cast<size_t>(rows_) * labels_.size() * static_cast<size_t>(field_.degree()), 0);
    }

    const Field& field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(labels_.size()); }
    const std::vector<int>& labels() const { return labels_; }

    bool has_label(int label) const { return label_index_.count(label) > 0; }

    int col_of(int label) const {
        auto it = label_index_.find(label);
        if (it == label_index_.end())
            throw std::invalid_argument("GFMatrix: unknown column label " + std::to_string(label));
        return it->second;
    }

    u64* at(int r, int c) {
        return data_.data() + (static_cast<size_t>(r) * labels_.size() + static_cast<size_t>(c)) * static_cast<size_t>(field_.degree());
    }
    const u64* at(int r, int c) const {
        return data_.data() + (static_cast<size_t>(r) * labels_.size() + static_cast<size_t>(c)) * static_cast<size_t>(field_.degree());
    }

    FieldElem get(int r, int c) const {
        return field_.from_coeffs(std::vector<u64>(at(r, c), at(r, c) + field_.degree()));
    }
    void set(int r, int c, const FieldElem& e) {
        if (!e.field().same(field_)) throw std::invalid_argument("GFMatrix::set: field mismatch");
        std::copy(e.data(), e.data() + field_.degree(), at(r, c));
    }
    void set_int(int r, int c, u64 v) {
        field_.set_zero(at(r, c));
        at(r, c)[0] = v % field_.characteristic();
    }

    void relabel(std::vector<int> new_labels) {
        if (new_labels.size() != labels_.size()) throw std::invalid_argument("relabel: size mismatch");
        labels_ = std::move(new_labels);
        label_index_.clear();
        for (size_t i = 0; i < labels_.size(); ++i)
            if (!label_index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("relabel: duplicate label");
    }

private:
    Field field_;
    int rows_ = 0;
    std::vector<int> labels_;
    std::unordered_map<int, int> label_index_;
    std::vector<u64> data_;
};

namespace detail {

// Rank of the submatrix given by column indices, by Gaussian elimination on a
// scratch copy. Column-major scratch keeps the pivot scans contiguous.
inline int rank_of_col_indices(const GFMatrix& m, const int* cols, int k) {
    const Field& f = m.field();
    int r = m.rows(), d = f.degree();
    if (k == 0) return 0;
    thread_local std::vector<u64> ws;
    ws.assign(static_cast<size_t>(r) * static_cast<size_t>(k) * static_cast<size_t>(d), 0);
    auto cell = [&](int i, int j) { return ws.data() + (static_cast<size_t>(j) * r + i) * static_cast<size_t>(d); };
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < r; ++i)
            std::copy(m.at(i, cols[j]), m.at(i, cols[j]) + d, cell(i, j));

    thread_local std::vector<u64> factor, tmp;
    factor.assign(static_cast<size_t>(d), 0);
    tmp.assign(static_cast<size_t>(d), 0);
    int rank = 0;
    for (int j = 0; j < k && rank < r; ++j) {
        int piv = -1;
        for (int i = rank; i < r; ++i)
            if (!f.is_zero(cell(i, j))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int jj = j; jj < k; ++jj)
                std::swap_ranges(cell(piv, jj), cell(piv, jj) + d, cell(rank, jj));
        f.inv(factor.data(), cell(rank, j));
        for (int i = rank + 1; i < r; ++i) {
            if (f.is_zero(cell(i, j))) continue;
            thread_local std::vector<u64> scale;
            scale.assign(static_cast<size_t>(d), 0);
            f.mul(scale.data(), cell(i, j), factor.data());
            for (int jj = j; jj < k; ++jj) {
                f.mul(tmp.data(), scale.data(), cell(rank, jj));
                f.sub(cell(i, jj), cell(i, jj), tmp.data());
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

inline int rank(const GFMatrix& m, std::optional<std::vector<int>> cols = std::nullopt) {
    std::vector<int> idx;
    if (cols) {
        idx.reserve(cols->size());
        for (int label : *cols) idx.push_back(m.col_of(label));
    } else {
        idx.resize(static_cast<size_t>(m.cols()));
        for (int i = 0; i < m.cols(); ++i) idx[static_cast<size_t>(i)] = i;
    }
    return detail::rank_of_col_indices(m, idx.data(), static_cast<int>(idx.size()));
}

inline bool columns_independent(const GFMatrix& m, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) > m.rows()) {
        for (int label : labels) m.col_of(label);  // still validate
        return false;
    }
    thread_local std::vector<int> idx;
    idx.clear();
    for (int label : labels) idx.push_back(m.col_of(label));
    return detail::rank_of_col_indices(m, idx.data(), static_cast<int>(idx.size())) == static_cast<int>(idx.size());
}

// Shared tables for computing all alpha x alpha minors over row subsets:
// per level j the lexicographically ordered j-subsets of rows (as bitmasks,
// whose numeric order matches subset lex order), plus a mask -> position
// table (direct array for small row counts, binary search beyond).
class WedgePlan {
public:
    WedgePlan(int rows, int alpha) : r_(rows), alpha_(alpha) {
        if (alpha < 0 || alpha > rows) throw std::invalid_argument("WedgePlan: alpha out of range");
        levels_.resize(static_cast<size_t>(alpha) + 1);
        levels_[0] = {0u};
        for (int j = 1; j <= alpha; ++j) {
            auto& lv = levels_[static_cast<size_t>(j)];
            lv.reserve(detail::binomial_capped(static_cast<u64>(rows), static_cast<u64>(j)));
            detail::for_each_combination(rows, j, [&](const std::vector<int>& comb) {
                unsigned mask = 0;
                for (int x : comb) mask |= 1u << x;
                lv.push_back(mask);
            });
        }
        if (rows <= 22) {
            mask_pos_.assign(1u << rows, -1);
            for (int j = 1; j <= alpha; ++j) {
                const auto& lv = levels_[static_cast<size_t>(j)];
                for (size_t i = 0; i < lv.size(); ++i) mask_pos_[lv[i]] = static_cast<int>(i);
            }
        }
    }

    int rows() const { return r_; }
    int alpha() const { return alpha_; }
    size_t level_size(int j) const { return levels_[static_cast<size_t>(j)].size(); }
    const std::vector<unsigned>& level(int j) const { return levels_[static_cast<size_t>(j)]; }

    int position(int j, unsigned mask) const {
        if (!mask_pos_.empty()) return mask_pos_[mask];
        const auto& lv = levels_[static_cast<size_t>(j)];
        auto it = std::lower_bound(lv.begin(), lv.end(), mask);
        return static_cast<int>(it - lv.begin());
    }

private:
    int r_, alpha_;
    std::vector<std::vector<unsigned>> levels_;
    std::vector<int> mask_pos_;
};

// Vector of all alpha x alpha minors of the columns labeled S (S sorted by
// label; row subsets in lexicographic order). Nonzero iff S is independent.
// The flat variant writes |C(rows,alpha)| * degree words into `out`.
inline void wedge_vector_flat(const GFMatrix& m, const std::vector<int>& sorted_labels,
                              const WedgePlan& plan, std::vector<u64>& out) {
    const Field& f = m.field();
    int d = f.degree();
    int alpha = static_cast<int>(sorted_labels.size());
    if (alpha != plan.alpha() || m.rows() != plan.rows())
        throw std::invalid_argument("wedge_vector: plan mismatch");
    if (alpha > m.rows()) throw std::invalid_argument("wedge_vector: set larger than row count");

    out.assign(plan.level_size(alpha) * static_cast<size_t>(d), 0);
    if (alpha == 0) {
        f.set_one(out.data());
        return;
    }
    thread_local std::vector<int> cols;
    cols.clear();
    for (int label : sorted_labels) cols.push_back(m.col_of(label));

    thread_local std::vector<u64> prev, cur, term;
    prev.assign(static_cast<size_t>(d), 0);
    f.set_one(prev.data());  // level 0: empty minor = 1
    term.assign(static_cast<size_t>(d), 0);

    for (int j = 1; j <= alpha; ++j) {
        const auto& lv = plan.level(j);
        cur.assign(lv.size() * static_cast<size_t>(d), 0);
        int cj = cols[static_cast<size_t>(j - 1)];
        for (size_t idx = 0; idx < lv.size(); ++idx) {
            unsigned mask = lv[idx];
            u64* dst = cur.data() + idx * static_cast<size_t>(d);
            int t = 0;
            unsigned rest = mask;
            while (rest) {
                int row = std::countr_zero(rest);
                rest &= rest - 1;
                const u64* entry = m.at(row, cj);
                if (!f.is_zero(entry)) {
                    const u64* sub;
                    if (j == 1) {
                        sub = prev.data();
                    } else {
                        int pos = plan.position(j - 1, mask & ~(1u << row));
                        sub = prev.data() + static_cast<size_t>(pos) * d;
                    }
                    if (!f.is_zero(sub)) {
                        f.mul(term.data(), entry, sub);
                        // cofactor sign (-1)^{(j-1)+t}
                        if (((j - 1 + t) & 1) != 0) f.sub(dst, dst, term.data());
                        else f.add(dst, dst, term.data());
                    }
                }
                ++t;
            }
        }
        std::swap(prev, cur);
    }
    out.swap(prev);
}

inline std::vector<FieldElem> wedge_vector(const GFMatrix& m, std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    WedgePlan plan(m.rows(), static_cast<int>(labels.size()));
    std::vector<u64> flat;
    wedge_vector_flat(m, labels, plan, flat);
    size_t d = static_cast<size_t>(m.field().degree());
    std::vector<FieldElem> out;
    out.reserve(flat.size() / d);
    for (size_t i = 0; i < flat.size(); i += d)
        out.push_back(m.field().from_coeffs(std::vector<u64>(flat.begin() + static_cast<long>(i), flat.begin() + static_cast<long>(i + d))));
    return out;
}

// Reduced row echelon form; returns pivot column indices. Zero rows are
// dropped, so the result has full row rank.
inline GFMatrix row_reduced(const GFMatrix& m, std::vector<int>* pivot_cols_out = nullptr) {
    const Field& f = m.field();
    int r = m.rows(), n = m.cols(), d = f.degree();
    GFMatrix work = m;
    std::vector<int> pivots;
    std::vector<u64> factor(static_cast<size_t>(d)), tmp(static_cast<size_t>(d)), scale(static_cast<size_t>(d));
    int row = 0;
    for (int j = 0; j < n && row < r; ++j) {
        int piv = -1;
        for (int i = row; i < r; ++i)
            if (!f.is_zero(work.at(i, j))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int jj = 0; jj < n; ++jj)
                std::swap_ranges(work.at(piv, jj), work.at(piv, jj) + d, work.at(row, jj));
        f.inv(factor.data(), work.at(row, j));
        for (int jj = j; jj < n; ++jj) {
            f.mul(tmp.data(), work.at(row, jj), factor.data());
            std::copy(tmp.begin(), tmp.end(), work.at(row, jj));
        }
        for (int i = 0; i < r; ++i) {
            if (i == row || f.is_zero(work.at(i, j))) continue;
            std::copy(work.at(i, j), work.at(i, j) + d, scale.data());
            for (int jj = j; jj < n; ++jj) {
                f.mul(tmp.data(), scale.data(), work.at(row, jj));
                f.sub(work.at(i, jj), work.at(i, jj), tmp.data());
            }
        }
        pivots.push_back(j);
        ++row;
    }
    GFMatrix out(f, row, m.labels());
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < n; ++j)
            std::copy(work.at(i, j), work.at(i, j) + d, out.at(i, j));
    if (pivot_cols_out) *pivot_cols_out = std::move(pivots);
    return out;
}

// Representation of the dual matroid: with the matrix brought to [I | D]
// modulo a column permutation, the dual is [-D^T | I] under the same
// permutation.
inline GFMatrix dualize(const GFMatrix& m) {
    const Field& f = m.field();
    int d = f.degree(), n = m.cols();
    std::vector<int> pivots;
    GFMatrix rref = row_reduced(m, &pivots);
    int r = rref.rows();
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int j : pivots) is_pivot[static_cast<size_t>(j)] = true;
    std::vector<int> nonpivots;
    for (int j = 0; j < n; ++j)
        if (!is_pivot[static_cast<size_t>(j)]) nonpivots.push_back(j);

    GFMatrix out(f, n - r, m.labels());
    for (size_t q = 0; q < nonpivots.size(); ++q) {
        int nj = nonpivots[q];
        for (int i = 0; i < r; ++i)
            f.neg(out.at(static_cast<int>(q), pivots[static_cast<size_t>(i)]), rref.at(i, nj));
        f.set_one(out.at(static_cast<int>(q), nj));
    }
    return out;
}

inline GFMatrix block_diag(const std::vector<GFMatrix>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("block_diag: no blocks");
    const Field& f = blocks.front().field();
    int d = f.degree();
    int total_rows = 0, total_cols = 0;
    std::vector<int> labels;
    for (const auto& b : blocks) {
        if (!b.field().same(f)) throw std::invalid_argument("block_diag: field context mismatch");
        total_rows += b.rows();
        total_cols += b.cols();
        for (int label : b.labels()) labels.push_back(label);
    }
    GFMatrix out(f, total_rows, std::move(labels));  // duplicate labels throw here
    int ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j)
                std::copy(b.at(i, j), b.at(i, j) + d, out.at(ro + i, co + j));
        ro += b.rows();
        co += b.cols();
    }
    return out;
}

// Keep only the given labels (in the matrix's own column order).
inline GFMatrix select_columns(const GFMatrix& m, const std::vector<int>& keep_labels) {
    const Field& f = m.field();
    int d = f.degree();
    std::vector<int> idx, labels;
    std::unordered_map<int, bool> mark;
    for (int label : keep_labels) mark[label] = true;
    for (int j = 0; j < m.cols(); ++j) {  // preserve matrix column order
        int label = m.labels()[static_cast<size_t>(j)];
        if (mark.count(label)) {
            idx.push_back(j);
            labels.push_back(label);
        }
    }
    GFMatrix out(f, m.rows(), std::move(labels));
    for (int i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            std::copy(m.at(i, idx[j]), m.at(i, idx[j]) + d, out.at(i, static_cast<int>(j)));
    return out;
}

// out = T * m where T is k x rows(m), flat row-major over the same field.
inline GFMatrix multiply_left(const std::vector<u64>& t_flat, int k, const GFMatrix& m) {
    const Field& f = m.field();
    int r = m.rows(), n = m.cols(), d = f.degree();
    if (t_flat.size() != static_cast<size_t>(k) * static_cast<size_t>(r) * static_cast<size_t>(d))
        throw std::invalid_argument("multiply_left: size mismatch");
    GFMatrix out(f, k, m.labels());
    std::vector<u64> tmp(static_cast<size_t>(d));
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < r; ++l) {
            const u64* tv = t_flat.data() + (static_cast<size_t>(i) * r + l) * static_cast<size_t>(d);
            if (f.is_zero(tv)) continue;
            for (int j = 0; j < n; ++j) {
                const u64* mv = m.at(l, j);
                if (f.is_zero(mv)) continue;
                f.mul(tmp.data(), tv, mv);
                f.add(out.at(i, j), out.at(i, j), tmp.data());
            }
        }
    return out;
}

// Entrywise image of m under a field embedding.
inline GFMatrix map_entries(const GFMatrix& m, const FieldEmbedding& emb) {
    if (!emb.from.same(m.field())) throw std::invalid_argument("map_entries: embedding source mismatch");
    GFMatrix out(emb.to, m.rows(), m.labels());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            emb.map(out.at(i, j), m.at(i, j));
    return out;
}

}  // namespace mfl

#endif
