#ifndef MFL_MATROID_HPP
#define MFL_MATROID_HPP

#include <functional>
#include <memory>
#include <span>
#include <variant>

#include "mfl/gf_matrix.hpp"

namespace mfl {

class Matroid;

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    // returns false if already joined
    bool join(int a, int b) {
        a = find(a); b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

struct GraphData {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> edge_labels;
    std::unordered_map<int, int> label_to_edge;

    bool connected() const {
        if (num_vertices <= 1) return true;
        Dsu dsu(num_vertices);
        int comps = num_vertices;
        for (auto [u, v] : edges)
            if (dsu.join(u, v)) --comps;
        return comps == 1;
    }

    int components_without(std::span<const int> removed_labels) const {
        Dsu dsu(num_vertices);
        int comps = num_vertices;
        for (size_t e = 0; e < edges.size(); ++e) {
            bool gone = std::binary_search(removed_labels.begin(), removed_labels.end(),
                                           edge_labels[e]);
            if (!gone && dsu.join(edges[e].first, edges[e].second)) --comps;
        }
        return comps;
    }
};

}  // namespace detail

struct AxiomsReport {
    bool ok = true;
    int failed_axiom = 0;  // 1: empty set not independent, 2: downward closure, 3: exchange
    std::vector<int> witness_a, witness_b;
};

// Matroid value: a tag tree of structured constructors, explicit linear
// representations, black-box oracles, and combinators. Immutable; cheap to
// copy (shared nodes).
class Matroid {
    struct UniformM { std::vector<int> ground; int declared_rank; };
    struct PartitionM {
        std::vector<std::pair<std::vector<int>, int>> blocks;
        std::unordered_map<int, int> elem_block;
    };
    struct FreeM { std::vector<int> ground; };
    struct GraphicM { detail::GraphData g; };
    struct BondM { detail::GraphData g; };
    struct LinearM { GFMatrix rep; };
    struct OracleM { std::vector<int> ground; std::function<bool(std::span<const int>)> pred; };
    struct DualM { std::shared_ptr<const Matroid> child; };
    struct DirectSumM { std::vector<Matroid> children; std::unordered_map<int, int> elem_child; };
    struct UnionFreeM { std::shared_ptr<const Matroid> child; std::vector<int> extra; };
    struct RestrictionM { std::shared_ptr<const Matroid> child; std::vector<int> sub; };
    struct TruncationM { std::shared_ptr<const Matroid> child; int k; };

    using Node = std::variant<UniformM, PartitionM, FreeM, GraphicM, BondM, LinearM, OracleM,
                              DualM, DirectSumM, UnionFreeM, RestrictionM, TruncationM>;

    struct Body {
        Node node;
        std::vector<int> ground;  // sorted, unique
        int rank = 0;
        bool multicolored_tag = false;
        bool has_oracle = false;
    };

public:
    Matroid() = default;

    static Matroid uniform(std::vector<int> ground, int rank_bound) {
        if (rank_bound < 0) throw std::invalid_argument("uniform matroid: negative rank");
        auto g = canonical_ground(std::move(ground));
        auto b = std::make_shared<Body>();
        b->ground = g;
        b->rank = std::min<int>(rank_bound, static_cast<int>(g.size()));
        b->node = UniformM{std::move(g), rank_bound};
        return Matroid(std::move(b));
    }

    static Matroid partition(std::vector<std::pair<std::vector<int>, int>> blocks) {
        PartitionM pm;
        std::vector<int> ground;
        int rank = 0;
        for (size_t bi = 0; bi < blocks.size(); ++bi) {
            auto& [g, cap] = blocks[bi];
            if (cap < 0) throw std::invalid_argument("partition matroid: negative block rank");
            g = canonical_ground(std::move(g));
            rank += std::min<int>(cap, static_cast<int>(g.size()));
            for (int x : g) {
                if (!pm.elem_block.emplace(x, static_cast<int>(bi)).second)
                    throw std::invalid_argument("partition matroid: blocks overlap at " + std::to_string(x));
                ground.push_back(x);
            }
        }
        std::sort(ground.begin(), ground.end());
        pm.blocks = std::move(blocks);
        auto b = std::make_shared<Body>();
        b->ground = std::move(ground);
        b->rank = rank;
        b->node = std::move(pm);
        return Matroid(std::move(b));
    }

    static Matroid multicolored(std::vector<std::vector<int>> blocks) {
        std::vector<std::pair<std::vector<int>, int>> bs;
        bs.reserve(blocks.size());
        for (auto& g : blocks) bs.emplace_back(std::move(g), 1);
        Matroid m = partition(std::move(bs));
        m.body_mutable().multicolored_tag = true;
        return m;
    }

    static Matroid free_on(std::vector<int> ground) {
        auto g = canonical_ground(std::move(ground));
        auto b = std::make_shared<Body>();
        b->ground = g;
        b->rank = static_cast<int>(g.size());
        b->node = FreeM{std::move(g)};
        return Matroid(std::move(b));
    }

    static Matroid graphic(int num_vertices, std::vector<std::pair<int, int>> edges,
                           std::vector<int> edge_labels) {
        auto g = make_graph(num_vertices, std::move(edges), std::move(edge_labels));
        auto b = std::make_shared<Body>();
        b->ground = detail::sorted_copy(g.edge_labels);
        detail::Dsu dsu(num_vertices);
        int rank = 0;
        for (auto [u, v] : g.edges)
            if (u != v && dsu.join(u, v)) ++rank;
        b->rank = rank;
        b->node = GraphicM{std::move(g)};
        return Matroid(std::move(b));
    }

    static Matroid bond(int num_vertices, std::vector<std::pair<int, int>> edges,
                        std::vector<int> edge_labels) {
        auto g = make_graph(num_vertices, std::move(edges), std::move(edge_labels));
        if (!g.connected())
            throw std::invalid_argument("bond matroid requires a connected graph");
        auto b = std::make_shared<Body>();
        b->ground = detail::sorted_copy(g.edge_labels);
        b->rank = static_cast<int>(g.edges.size()) - (num_vertices - 1);
        b->node = BondM{std::move(g)};
        return Matroid(std::move(b));
    }

    static Matroid linear(GFMatrix rep) {
        auto b = std::make_shared<Body>();
        b->ground = detail::sorted_copy(rep.labels());
        for (size_t i = 1; i < b->ground.size(); ++i)
            if (b->ground[i - 1] == b->ground[i])
                throw std::invalid_argument("linear matroid: duplicate labels");
        b->rank = mfl::rank(rep);
        b->node = LinearM{std::move(rep)};
        return Matroid(std::move(b));
    }

    static Matroid oracle(std::vector<int> ground, std::function<bool(std::span<const int>)> pred) {
        auto g = canonical_ground(std::move(ground));
        auto b = std::make_shared<Body>();
        b->ground = g;
        b->has_oracle = true;
        b->node = OracleM{std::move(g), std::move(pred)};
        b->rank = -1;  // filled below via greedy once the body is viewable
        Matroid m(std::move(b));
        m.body_mutable().rank = m.greedy_rank_within(m.ground());
        return m;
    }

    Matroid dual() const {
        require_valid();
        auto b = std::make_shared<Body>();
        b->ground = ground();
        b->rank = static_cast<int>(ground().size()) - rank();
        b->has_oracle = has_oracle_node();
        b->node = DualM{std::make_shared<const Matroid>(*this)};
        return Matroid(std::move(b));
    }

    static Matroid direct_sum(std::vector<Matroid> children) {
        if (children.empty()) throw std::invalid_argument("direct_sum: no children");
        DirectSumM ds;
        std::vector<int> ground;
        int rank = 0;
        bool has_oracle = false;
        for (size_t ci = 0; ci < children.size(); ++ci) {
            const auto& c = children[ci];
            c.require_valid();
            rank += c.rank();
            has_oracle = has_oracle || c.has_oracle_node();
            for (int x : c.ground()) {
                if (!ds.elem_child.emplace(x, static_cast<int>(ci)).second)
                    throw std::invalid_argument("direct_sum: grounds overlap at " + std::to_string(x));
                ground.push_back(x);
            }
        }
        std::sort(ground.begin(), ground.end());
        ds.children = std::move(children);
        auto b = std::make_shared<Body>();
        b->ground = std::move(ground);
        b->rank = rank;
        b->has_oracle = has_oracle;
        b->node = std::move(ds);
        return Matroid(std::move(b));
    }

    Matroid restricted(std::vector<int> sub) const {
        require_valid();
        sub = canonical_ground(std::move(sub));
        if (!detail::subset_sorted(sub, ground()))
            throw std::invalid_argument("restriction: set not within ground");
        auto b = std::make_shared<Body>();
        b->ground = sub;
        b->has_oracle = has_oracle_node();
        b->node = RestrictionM{std::make_shared<const Matroid>(*this), std::move(sub)};
        Matroid m(std::move(b));
        m.body_mutable().rank = greedy_rank_within(m.ground());
        return m;
    }

    Matroid truncated(int k) const {
        require_valid();
        if (k < 0) throw std::invalid_argument("truncation: negative rank bound");
        auto b = std::make_shared<Body>();
        b->ground = ground();
        b->rank = std::min(k, rank());
        b->has_oracle = has_oracle_node();
        b->node = TruncationM{std::make_shared<const Matroid>(*this), k};
        return Matroid(std::move(b));
    }

    bool valid() const { return body_ != nullptr; }
    const std::vector<int>& ground() const { require_valid(); return body_->ground; }
    int rank() const { require_valid(); return body_->rank; }
    bool has_oracle_node() const { require_valid(); return body_->has_oracle; }

    const char* kind() const {
        require_valid();
        if (body_->multicolored_tag) return "multicolored";
        switch (body_->node.index()) {
            case 0: return "uniform";
            case 1: return "partition";
            case 2: return "free";
            case 3: return "graphic";
            case 4: return "bond";
            case 5: return "linear";
            case 6: return "oracle";
            case 7: return "dual";
            case 8: return "direct_sum";
            case 9: return "union_free";
            case 10: return "restriction";
            default: return "truncation";
        }
    }

    bool is_uniform() const { require_valid(); return body_->node.index() == 0; }
    int uniform_declared_rank() const { return std::get<UniformM>(body_->node).declared_rank; }

    // Exact independence test. `s` must be sorted and duplicate-free;
    // elements outside the ground set raise std::invalid_argument.
    bool is_independent(std::span<const int> s) const {
        require_valid();
        for (size_t i = 0; i < s.size(); ++i) {
            if (i > 0 && s[i - 1] >= s[i])
                throw std::invalid_argument("is_independent: set must be sorted and duplicate-free");
            if (!std::binary_search(body_->ground.begin(), body_->ground.end(), s[i]))
                throw std::invalid_argument("is_independent: element " + std::to_string(s[i]) + " outside ground set");
        }
        return indep_unchecked(s);
    }

    bool is_independent(const std::vector<int>& s) const {
        return is_independent(std::span<const int>(s.data(), s.size()));
    }

    // false (instead of throwing) when s is not contained in the ground set;
    // the solvers use this to realize "independent in a matroid over a
    // smaller ground" semantics.
    bool contains_and_independent(std::span<const int> s) const {
        require_valid();
        for (size_t i = 0; i < s.size(); ++i) {
            if (i > 0 && s[i - 1] >= s[i])
                throw std::invalid_argument("contains_and_independent: set must be sorted");
            if (!std::binary_search(body_->ground.begin(), body_->ground.end(), s[i])) return false;
        }
        return indep_unchecked(s);
    }
    bool contains_and_independent(const std::vector<int>& s) const {
        return contains_and_independent(std::span<const int>(s.data(), s.size()));
    }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& v) const { return std::visit(std::forward<Visitor>(v), body_->node); }

private:
    explicit Matroid(std::shared_ptr<Body> b) : body_(std::move(b)) {}

    Body& body_mutable() { return const_cast<Body&>(*body_); }

    void require_valid() const {
        if (!body_) throw std::logic_error("empty Matroid value");
    }

    static std::vector<int> canonical_ground(std::vector<int> g) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        return g;
    }

    static detail::GraphData make_graph(int num_vertices, std::vector<std::pair<int, int>> edges,
                                        std::vector<int> edge_labels) {
        if (edges.size() != edge_labels.size())
            throw std::invalid_argument("graph matroid: one label per edge required");
        detail::GraphData g;
        g.num_vertices = num_vertices;
        for (auto [u, v] : edges)
            if (u < 0 || u >= num_vertices || v < 0 || v >= num_vertices)
                throw std::invalid_argument("graph matroid: endpoint out of range");
        g.edges = std::move(edges);
        g.edge_labels = std::move(edge_labels);
        for (size_t e = 0; e < g.edge_labels.size(); ++e)
            if (!g.label_to_edge.emplace(g.edge_labels[e], static_cast<int>(e)).second)
                throw std::invalid_argument("graph matroid: duplicate edge label");
        return g;
    }

    // size of a maximal independent subset of `within` (sorted)
    int greedy_rank_within(std::span<const int> within) const {
        std::vector<int> acc;
        acc.reserve(within.size());
        for (int x : within) {
            auto pos = std::lower_bound(acc.begin(), acc.end(), x);
            acc.insert(pos, x);
            if (!indep_unchecked(acc)) acc.erase(std::lower_bound(acc.begin(), acc.end(), x));
        }
        return static_cast<int>(acc.size());
    }

    bool indep_unchecked(std::span<const int> s) const {
        const Node& node = body_->node;
        switch (node.index()) {
            case 0: {  // uniform
                const auto& m = std::get<UniformM>(node);
                return static_cast<int>(s.size()) <= m.declared_rank;
            }
            case 1: {  // partition
                const auto& m = std::get<PartitionM>(node);
                thread_local std::vector<int> counts;
                counts.assign(m.blocks.size(), 0);
                for (int x : s) {
                    int bi = m.elem_block.at(x);
                    if (++counts[static_cast<size_t>(bi)] > m.blocks[static_cast<size_t>(bi)].second)
                        return false;
                }
                return true;
            }
            case 2:  // free
                return true;
            case 3: {  // graphic: acyclic edge set
                const auto& m = std::get<GraphicM>(node);
                detail::Dsu dsu(m.g.num_vertices);
                for (int label : s) {
                    auto [u, v] = m.g.edges[static_cast<size_t>(m.g.label_to_edge.at(label))];
                    if (u == v || !dsu.join(u, v)) return false;
                }
                return true;
            }
            case 4: {  // bond: removal keeps the graph connected
                const auto& m = std::get<BondM>(node);
                return m.g.components_without(s) == 1;
            }
            case 5: {  // linear
                const auto& m = std::get<LinearM>(node);
                thread_local std::vector<int> tmp;
                tmp.assign(s.begin(), s.end());
                return columns_independent(m.rep, tmp);
            }
            case 6: {  // oracle
                const auto& m = std::get<OracleM>(node);
                return m.pred(s);
            }
            case 7: {  // dual: complement spans the child
                const auto& m = std::get<DualM>(node);
                std::vector<int> rest = detail::difference_sorted(body_->ground, std::vector<int>(s.begin(), s.end()));
                return m.child->greedy_rank_within(rest) == m.child->rank();
            }
            case 8: {  // direct sum; locals because children recurse
                const auto& m = std::get<DirectSumM>(node);
                std::vector<std::vector<int>> parts(m.children.size());
                for (int x : s) parts[static_cast<size_t>(m.elem_child.at(x))].push_back(x);
                for (size_t ci = 0; ci < m.children.size(); ++ci)
                    if (!parts[ci].empty() && !m.children[ci].indep_unchecked(parts[ci])) return false;
                return true;
            }
            case 9: {  // union with a free matroid on `extra`
                const auto& m = std::get<UnionFreeM>(node);
                std::vector<int> rest;
                for (int x : s)
                    if (!detail::contains_sorted(m.extra, x)) rest.push_back(x);
                // rest is within child's ground: body ground = child ∪ extra
                return m.child->indep_unchecked(rest);
            }
            case 10: {  // restriction
                const auto& m = std::get<RestrictionM>(node);
                return m.child->indep_unchecked(s);
            }
            default: {  // truncation
                const auto& m = std::get<TruncationM>(node);
                return static_cast<int>(s.size()) <= m.k && m.child->indep_unchecked(s);
            }
        }
    }

    friend Matroid union_with_free(const Matroid& m, std::vector<int> extra);
    friend class MatroidCompiler;

    std::shared_ptr<const Body> body_;
};

// M ∨ (X, 2^X): everything in X becomes free, the rest keeps the child's
// structure on the ground outside X.
inline Matroid union_with_free(const Matroid& m, std::vector<int> extra) {
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    if (extra.empty()) return m;
    auto b = std::make_shared<Matroid::Body>();
    b->ground = detail::union_sorted(m.ground(), extra);
    b->has_oracle = m.has_oracle_node();
    std::vector<int> outside = detail::difference_sorted(m.ground(), extra);
    b->node = Matroid::UnionFreeM{std::make_shared<const Matroid>(m), std::move(extra)};
    Matroid out(std::move(b));
    auto& uf = std::get<Matroid::UnionFreeM>(out.body_mutable().node);
    out.body_mutable().rank = m.greedy_rank_within(outside) + static_cast<int>(uf.extra.size());
    return out;
}

struct CompileOptions {
    double trunc_epsilon = 1e-9;
};

// Randomized rank-k truncation (Def. of k-truncation realized by a random
// k x r compression over a sufficiently large field): with probability at
// least 1 - eps_t the result represents { S independent : |S| <= k }.
inline GFMatrix truncate_randomized(const GFMatrix& rep, int k, Rng& rng, double eps_t = 1e-9) {
    if (eps_t <= 0 || eps_t >= 1) throw std::invalid_argument("truncate: eps_t must be in (0,1)");
    int r0 = rank(rep);
    if (k > r0) throw std::invalid_argument("truncate: k exceeds rank");
    if (k < 0) throw std::invalid_argument("truncate: negative k");

    // field large enough for a union bound over independent k-subsets
    long double need = 2.0L * static_cast<long double>(std::max(k, 1));
    for (int i = 1; i <= k; ++i)
        need *= static_cast<long double>(rep.cols() - k + i) / static_cast<long double>(i);
    need /= static_cast<long double>(eps_t);

    const Field& base = rep.field();
    long double fsize = base.size_approx();
    int s = 1;
    long double cur = fsize;
    while (cur < need) {
        cur *= fsize;
        ++s;
        if (s > 4096) throw std::runtime_error("truncate: extension degree blew up");
    }

    GFMatrix src = rep;
    Field fld = base;
    if (s > 1) {
        auto [ext, emb] = extend_and_embed(base, s, rng);
        src = map_entries(rep, emb);
        fld = ext;
    }
    int d = fld.degree();
    std::vector<u64> t(static_cast<size_t>(k) * static_cast<size_t>(src.rows()) * static_cast<size_t>(d));
    for (size_t i = 0; i < t.size(); i += static_cast<size_t>(d))
        fld.random(t.data() + i, rng);
    return multiply_left(t, k, src);
}

// Truncates every representation inside one shared field extension.
inline std::vector<GFMatrix> truncate_same_field(const std::vector<GFMatrix>& reps, int k, Rng& rng,
                                                 double eps_t = 1e-9) {
    if (reps.empty()) return {};
    if (eps_t <= 0 || eps_t >= 1) throw std::invalid_argument("truncate: eps_t must be in (0,1)");
    const Field& base = reps.front().field();
    long double need = 0;
    for (const auto& rep : reps) {
        if (!rep.field().same(base))
            throw std::invalid_argument("truncate_same_field: mixed base fields");
        if (k > rank(rep)) throw std::invalid_argument("truncate_same_field: k exceeds a rank");
        long double c = 2.0L * static_cast<long double>(std::max(k, 1));
        for (int i = 1; i <= k; ++i)
            c *= static_cast<long double>(rep.cols() - k + i) / static_cast<long double>(i);
        need += c;
    }
    need /= static_cast<long double>(eps_t);

    long double fsize = base.size_approx();
    int s = 1;
    long double cur = fsize;
    while (cur < need) {
        cur *= fsize;
        ++s;
        if (s > 4096) throw std::runtime_error("truncate: extension degree blew up");
    }
    Field fld = base;
    std::optional<FieldEmbedding> emb;
    if (s > 1) {
        auto [ext, e] = extend_and_embed(base, s, rng);
        fld = ext;
        emb = std::move(e);
    }
    std::vector<GFMatrix> out;
    out.reserve(reps.size());
    int d = fld.degree();
    for (const auto& rep : reps) {
        GFMatrix src = emb ? map_entries(rep, *emb) : rep;
        std::vector<u64> t(static_cast<size_t>(k) * static_cast<size_t>(src.rows()) * static_cast<size_t>(d));
        for (size_t i = 0; i < t.size(); i += static_cast<size_t>(d))
            fld.random(t.data() + i, rng);
        out.push_back(multiply_left(t, k, src));
    }
    return out;
}

class MatroidCompiler {
public:
    MatroidCompiler(Field target, Rng& rng, CompileOptions opts = {})
        : target_(std::move(target)), rng_(rng), opts_(opts) {}

    GFMatrix compile(const Matroid& m) {
        if (m.has_oracle_node())
            throw std::invalid_argument("compile_linear: matroid contains a black-box oracle");
        return m.visit([&](const auto& node) { return build(node); });
    }

private:
    using UniformM = Matroid::UniformM;
    using PartitionM = Matroid::PartitionM;
    using FreeM = Matroid::FreeM;
    using GraphicM = Matroid::GraphicM;
    using BondM = Matroid::BondM;
    using LinearM = Matroid::LinearM;
    using OracleM = Matroid::OracleM;
    using DualM = Matroid::DualM;
    using DirectSumM = Matroid::DirectSumM;
    using UnionFreeM = Matroid::UnionFreeM;
    using RestrictionM = Matroid::RestrictionM;
    using TruncationM = Matroid::TruncationM;

    GFMatrix build(const UniformM& m) {
        int n = static_cast<int>(m.ground.size());
        int r = std::min(m.declared_rank, n);
        auto size = target_.size_exact();
        if (size && static_cast<u64>(n) > *size)
            throw std::invalid_argument("compile_linear: field too small for uniform matroid on " +
                                        std::to_string(n) + " elements");
        GFMatrix out(target_, r, m.ground);  // ground is sorted; labels in that order
        int d = target_.degree();
        std::vector<u64> x(static_cast<size_t>(d)), pw(static_cast<size_t>(d));
        for (int j = 0; j < n; ++j) {
            target_.element_at(x.data(), static_cast<u64>(j));
            target_.set_one(pw.data());
            for (int i = 0; i < r; ++i) {
                std::copy(pw.begin(), pw.end(), out.at(i, j));
                std::vector<u64> nx(static_cast<size_t>(d));
                target_.mul(nx.data(), pw.data(), x.data());
                std::copy(nx.begin(), nx.end(), pw.begin());
            }
        }
        return out;
    }

    GFMatrix build(const PartitionM& m) {
        std::vector<GFMatrix> blocks;
        blocks.reserve(m.blocks.size());
        for (const auto& [g, cap] : m.blocks)
            blocks.push_back(build(UniformM{g, cap}));
        if (blocks.empty()) return GFMatrix(target_, 0, {});
        return block_diag(blocks);
    }

    GFMatrix build(const FreeM& m) {
        int n = static_cast<int>(m.ground.size());
        GFMatrix out(target_, n, m.ground);
        for (int i = 0; i < n; ++i) out.set_int(i, i, 1);
        return out;
    }

    GFMatrix incidence(const detail::GraphData& g) {
        GFMatrix out(target_, g.num_vertices, g.edge_labels);
        for (size_t e = 0; e < g.edges.size(); ++e) {
            auto [u, v] = g.edges[e];
            if (u == v) continue;  // loop -> zero column
            out.set_int(u, static_cast<int>(e), 1);
            out.set_int(v, static_cast<int>(e), target_.characteristic() - 1);
        }
        return row_reduced(out);
    }

    GFMatrix build(const GraphicM& m) { return incidence(m.g); }

    GFMatrix build(const BondM& m) { return dualize(incidence(m.g)); }

    GFMatrix build(const LinearM& m) {
        const Field& src = m.rep.field();
        if (src.same(target_)) return m.rep;
        if (src.characteristic() != target_.characteristic() ||
            target_.degree() % src.degree() != 0)
            throw std::invalid_argument("compile_linear: representation field does not embed into target");
        return map_entries(m.rep, embed_into(src, target_, rng_));
    }

    GFMatrix build(const OracleM&) {
        throw std::invalid_argument("compile_linear: oracle matroid has no representation");
    }

    GFMatrix build(const DualM& m) { return dualize(compile(*m.child)); }

    GFMatrix build(const DirectSumM& m) {
        std::vector<GFMatrix> blocks;
        blocks.reserve(m.children.size());
        for (const auto& c : m.children) blocks.push_back(compile(c));
        return block_diag(blocks);
    }

    GFMatrix build(const UnionFreeM& m) {
        std::vector<int> keep = detail::difference_sorted(m.child->ground(), m.extra);
        GFMatrix restricted = row_reduced(select_columns(compile(*m.child), keep));
        GFMatrix freepart = build(FreeM{m.extra});
        return block_diag({restricted, freepart});
    }

    GFMatrix build(const RestrictionM& m) {
        return row_reduced(select_columns(compile(*m.child), m.sub));
    }

    GFMatrix build(const TruncationM& m) {
        GFMatrix rep = compile(*m.child);
        if (m.k >= rep.rows()) return rep;
        return truncate_randomized(rep, m.k, rng_, opts_.trunc_epsilon);
    }

    Field target_;
    Rng& rng_;
    CompileOptions opts_;
};

inline GFMatrix compile_linear(const Matroid& m, const Field& target, Rng& rng, CompileOptions opts = {}) {
    return MatroidCompiler(target, rng, opts).compile(m);
}

// Exhaustive check of the three independence axioms; ground size <= 16.
inline AxiomsReport axioms_check(const Matroid& m) {
    const auto& g = m.ground();
    int n = static_cast<int>(g.size());
    if (n > 16) throw std::invalid_argument("axioms_check: ground set larger than 16");
    size_t total = 1ull << n;
    std::vector<char> indep(total);
    std::vector<int> buf;
    auto to_set = [&](unsigned mask) {
        buf.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) buf.push_back(g[static_cast<size_t>(i)]);
        return std::span<const int>(buf.data(), buf.size());
    };
    for (unsigned mask = 0; mask < total; ++mask)
        indep[mask] = m.is_independent(to_set(mask)) ? 1 : 0;

    AxiomsReport rep;
    auto fill_set = [&](unsigned mask) {
        std::vector<int> out;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) out.push_back(g[static_cast<size_t>(i)]);
        return out;
    };

    if (!indep[0]) {
        rep.ok = false;
        rep.failed_axiom = 1;
        return rep;
    }
    for (unsigned mask = 0; mask < total; ++mask) {
        if (!indep[mask]) continue;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            unsigned sub = mask & ~(1u << i);
            if (!indep[sub]) {
                rep.ok = false;
                rep.failed_axiom = 2;
                rep.witness_a = fill_set(sub);
                rep.witness_b = fill_set(mask);
                return rep;
            }
        }
    }

    // rank of every subset; exchange axiom holds iff every independent set
    // that is maximal inside Y has size rank(Y), checked via the largest
    // such Y per independent set
    std::vector<int> rk(total, 0);
    for (unsigned mask = 1; mask < total; ++mask) {
        if (indep[mask]) {
            rk[mask] = std::popcount(mask);
        } else {
            int best = 0;
            unsigned rest = mask;
            while (rest) {
                int i = std::countr_zero(rest);
                rest &= rest - 1;
                best = std::max(best, rk[mask & ~(1u << i)]);
            }
            rk[mask] = best;
        }
    }
    unsigned full = static_cast<unsigned>(total - 1);
    for (unsigned mask = 0; mask < total; ++mask) {
        if (!indep[mask]) continue;
        unsigned blocked = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) continue;
            if (!indep[mask | (1u << i)]) blocked |= 1u << i;
        }
        unsigned y = mask | blocked;
        (void)full;
        if (rk[y] > std::popcount(mask)) {
            // recover a maximum independent subset of y as the witness pair
            unsigned b = y;
            while (!indep[b]) {
                for (int i = 0; i < n; ++i) {
                    if ((b & (1u << i)) && rk[b & ~(1u << i)] == rk[b]) {
                        b &= ~(1u << i);
                        break;
                    }
                }
            }
            rep.ok = false;
            rep.failed_axiom = 3;
            rep.witness_a = fill_set(mask);
            rep.witness_b = fill_set(b);
            return rep;
        }
    }
    return rep;
}

}  // namespace mfl

#endif
