#ifndef MFL_FIELD_HPP
#define MFL_FIELD_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfl/detail/common.hpp"

namespace mfl {

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) {
    // extended Euclid; p prime, a != 0 mod p
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(p), nr = static_cast<i64>(a % p);
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += static_cast<i64>(p);
    return static_cast<u64>(t);
}

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

// Trial division for small inputs; deterministic Miller-Rabin above that
// (the linear-route solver picks base primes far beyond trial-division range).
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n < 2000000) {
        for (u64 f = 41; f * f <= n; f += 2)
            if (n % f == 0) return false;
        return true;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (miller_rabin_witness(n, a, d, s)) return false;
    return true;
}

inline u64 next_prime_at_least(u64 n) {
    if (n <= 2) return 2;
    if (n % 2 == 0) ++n;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> fs;
    for (u64 f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
        if (n % f == 0) {
            fs.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// --- dense polynomials over Z_p, coefficient lists constant term first ---

using ZpPoly = std::vector<u64>;

inline void zp_trim(ZpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int zp_deg(const ZpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline ZpPoly zp_mulmod(const ZpPoly& a, const ZpPoly& b, const ZpPoly& mod, u64 p) {
    if (a.empty() || b.empty()) return {};
    ZpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    // reduce modulo the monic polynomial `mod`
    int dm = zp_deg(mod);
    for (int i = zp_deg(c); i >= dm; --i) {
        u64 coef = c[i];
        if (coef == 0) continue;
        c[i] = 0;
        for (int j = 0; j < dm; ++j)
            c[i - dm + j] = (c[i - dm + j] + static_cast<unsigned __int128>(coef) * (p - mod[j] % p)) % p;
    }
    c.resize(dm);
    zp_trim(c);
    return c;
}

inline ZpPoly zp_powmod(ZpPoly base, u64 e, const ZpPoly& mod, u64 p) {
    ZpPoly r = {1};
    while (e) {
        if (e & 1) r = zp_mulmod(r, base, mod, p);
        base = zp_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

inline ZpPoly zp_sub(ZpPoly a, const ZpPoly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    zp_trim(a);
    return a;
}

inline ZpPoly zp_gcd(ZpPoly a, ZpPoly b, u64 p) {
    zp_trim(a); zp_trim(b);
    while (!b.empty()) {
        // a mod b
        int db = zp_deg(b);
        u64 lead_inv = invmod(b[db], p);
        while (zp_deg(a) >= db) {
            int da = zp_deg(a);
            u64 c = mulmod(a[da], lead_inv, p);
            for (int j = 0; j <= db; ++j)
                a[da - db + j] = (a[da - db + j] + p - mulmod(c, b[j], p)) % p;
            zp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// x^{p^j} mod f by iterated p-th powering
inline ZpPoly zp_frobenius_iterate(const ZpPoly& start, int times, const ZpPoly& mod, u64 p) {
    ZpPoly w = start;
    for (int j = 0; j < times; ++j) w = zp_powmod(w, p, mod, p);
    return w;
}

// Standard criterion: f monic of degree d is irreducible over Z_p iff
// x^{p^d} = x (mod f) and gcd(x^{p^{d/q}} - x, f) = 1 for each prime q | d.
inline bool zp_irreducible(const ZpPoly& f, u64 p) {
    int d = zp_deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    ZpPoly x = {0, 1};
    ZpPoly w = x;
    std::vector<u64> qs = prime_factors(static_cast<u64>(d));
    std::vector<int> checkpoints;
    for (u64 q : qs) checkpoints.push_back(d / static_cast<int>(q));
    std::sort(checkpoints.begin(), checkpoints.end());
    int step = 0;
    size_t ci = 0;
    while (step < d) {
        w = zp_powmod(w, p, f, p);
        ++step;
        while (ci < checkpoints.size() && checkpoints[ci] == step) {
            ZpPoly g = zp_gcd(zp_sub(w, x, p), f, p);
            if (zp_deg(g) != 0) return false;
            ++ci;
        }
    }
    return zp_sub(w, x, p).empty();
}

}  // namespace detail

struct FieldCtx {
    u64 p = 0;                 // prime characteristic
    int d = 1;                 // extension degree
    std::vector<u64> modulus;  // monic degree-d polynomial, constant term first; empty iff d == 1

    bool operator==(const FieldCtx& o) const { return p == o.p && d == o.d && modulus == o.modulus; }
};

class FieldElem;

// Handle to an immutable finite field GF(p^d). Elements are coefficient
// vectors of length d over Z_p (constant term first); all kernel operations
// work on raw coefficient spans so matrices can use flat storage.
class Field {
public:
    Field() = default;
    explicit Field(std::shared_ptr<const FieldCtx> ctx) : ctx_(std::move(ctx)) {}

    bool valid() const { return ctx_ != nullptr; }
    const FieldCtx& ctx() const { return *ctx_; }
    u64 characteristic() const { return ctx_->p; }
    int degree() const { return ctx_->d; }

    bool same(const Field& o) const {
        if (ctx_ == o.ctx_) return true;
        if (!ctx_ || !o.ctx_) return false;
        return *ctx_ == *o.ctx_;
    }

    // p^d as long double (for size comparisons; may exceed 2^64)
    long double size_approx() const {
        long double s = 1;
        for (int i = 0; i < ctx_->d; ++i) s *= static_cast<long double>(ctx_->p);
        return s;
    }

    // p^d if it fits in u64, otherwise nullopt
    std::optional<u64> size_exact() const {
        u64 s = 1;
        for (int i = 0; i < ctx_->d; ++i) {
            if (s > std::numeric_limits<u64>::max() / ctx_->p) return std::nullopt;
            s *= ctx_->p;
        }
        return s;
    }

    // --- kernel operations on coefficient spans of length d ---

    void set_zero(u64* out) const { std::fill(out, out + ctx_->d, 0); }
    void set_one(u64* out) const { set_zero(out); out[0] = 1 % ctx_->p; }

    bool is_zero(const u64* a) const {
        for (int i = 0; i < ctx_->d; ++i)
            if (a[i]) return false;
        return true;
    }

    bool eq(const u64* a, const u64* b) const {
        for (int i = 0; i < ctx_->d; ++i)
            if (a[i] != b[i]) return false;
        return true;
    }

    void add(u64* out, const u64* a, const u64* b) const {
        u64 p = ctx_->p;
        for (int i = 0; i < ctx_->d; ++i) {
            u64 s = a[i] + b[i];
            out[i] = s >= p ? s - p : s;
        }
    }

    void sub(u64* out, const u64* a, const u64* b) const {
        u64 p = ctx_->p;
        for (int i = 0; i < ctx_->d; ++i) {
            u64 s = a[i] + p - b[i];
            out[i] = s >= p ? s - p : s;
        }
    }

    void neg(u64* out, const u64* a) const {
        u64 p = ctx_->p;
        for (int i = 0; i < ctx_->d; ++i) out[i] = a[i] ? p - a[i] : 0;
    }

    void mul(u64* out, const u64* a, const u64* b) const {
        u64 p = ctx_->p;
        int d = ctx_->d;
        if (d == 1) {
            out[0] = detail::mulmod(a[0], b[0], p);
            return;
        }
        thread_local std::vector<u64> tmp;
        tmp.assign(static_cast<size_t>(2 * d - 1), 0);
        for (int i = 0; i < d; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < d; ++j)
                tmp[i + j] = static_cast<u64>((tmp[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p);
        }
        const auto& m = ctx_->modulus;
        for (int i = 2 * d - 2; i >= d; --i) {
            u64 c = tmp[i];
            if (c == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (m[j] == 0) continue;
                u64 sub_ = detail::mulmod(c, m[j], p);
                u64 cur = tmp[i - d + j];
                tmp[i - d + j] = cur >= sub_ ? cur - sub_ : cur + p - sub_;
            }
        }
        std::copy(tmp.begin(), tmp.begin() + d, out);
    }

    // out = a^-1; throws on zero
    void inv(u64* out, const u64* a) const {
        u64 p = ctx_->p;
        int d = ctx_->d;
        if (is_zero(a)) throw std::domain_error("field inverse of zero");
        if (d == 1) {
            out[0] = detail::invmod(a[0], p);
            return;
        }
        // extended Euclid in Z_p[x] against the modulus
        detail::ZpPoly r0(ctx_->modulus), r1(a, a + d);
        detail::zp_trim(r1);
        detail::ZpPoly t0 = {}, t1 = {1};
        while (!r1.empty() && detail::zp_deg(r1) > 0) {
            int d0 = detail::zp_deg(r0), d1 = detail::zp_deg(r1);
            detail::ZpPoly q(static_cast<size_t>(d0 - d1 + 1), 0);
            detail::ZpPoly rem = r0;
            u64 lead_inv = detail::invmod(r1[d1], p);
            for (int i = d0; i >= d1; --i) {
                if (detail::zp_deg(rem) < i) continue;
                u64 c = detail::mulmod(rem[i], lead_inv, p);
                if (c == 0) continue;
                q[i - d1] = c;
                for (int j = 0; j <= d1; ++j)
                    rem[i - d1 + j] = (rem[i - d1 + j] + p - detail::mulmod(c, r1[j], p)) % p;
                detail::zp_trim(rem);
            }
            // t_next = t0 - q*t1  (no modulus reduction needed: degrees stay < d)
            detail::ZpPoly qt((q.empty() || t1.empty()) ? 0 : q.size() + t1.size() - 1, 0);
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < t1.size(); ++j)
                    qt[i + j] = static_cast<u64>((qt[i + j] + static_cast<unsigned __int128>(q[i]) * t1[j]) % p);
            detail::ZpPoly tn = detail::zp_sub(t0, qt, p);
            r0 = std::move(r1); r1 = std::move(rem);
            t0 = std::move(t1); t1 = std::move(tn);
        }
        if (r1.empty()) throw std::domain_error("field inverse: not invertible");
        u64 c = detail::invmod(r1[0], p);
        set_zero(out);
        for (size_t i = 0; i < t1.size(); ++i) out[i] = detail::mulmod(t1[i], c, p);
    }

    void pow(u64* out, const u64* a, u64 e) const {
        int d = ctx_->d;
        std::vector<u64> base(a, a + d), acc(static_cast<size_t>(d));
        set_one(acc.data());
        while (e) {
            if (e & 1) {
                std::vector<u64> t(static_cast<size_t>(d));
                mul(t.data(), acc.data(), base.data());
                acc = std::move(t);
            }
            std::vector<u64> t(static_cast<size_t>(d));
            mul(t.data(), base.data(), base.data());
            base = std::move(t);
            e >>= 1;
        }
        std::copy(acc.begin(), acc.end(), out);
    }

    void random(u64* out, Rng& rng) const {
        for (int i = 0; i < ctx_->d; ++i) out[i] = rng.below(ctx_->p);
    }

    // element with index i under the lexicographic enumeration by coefficients
    void element_at(u64* out, u64 index) const {
        for (int i = 0; i < ctx_->d; ++i) {
            out[i] = index % ctx_->p;
            index /= ctx_->p;
        }
    }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_int(u64 v) const;
    FieldElem from_coeffs(std::vector<u64> coeffs) const;

private:
    std::shared_ptr<const FieldCtx> ctx_;
};

// A single field element: owning coefficient vector plus its field handle.
// Convenience layer over the span kernels; not used in matrix hot paths.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(Field f, std::vector<u64> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
        if (static_cast<int>(c_.size()) != field_.degree())
            throw std::invalid_argument("FieldElem: coefficient count != field degree");
        for (u64 x : c_)
            if (x >= field_.characteristic()) throw std::invalid_argument("FieldElem: coefficient out of range");
    }

    const Field& field() const { return field_; }
    const std::vector<u64>& coeffs() const { return c_; }
    const u64* data() const { return c_.data(); }
    bool is_zero() const { return field_.is_zero(c_.data()); }

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
        a.check(b);
        FieldElem r = a;
        a.field_.add(r.c_.data(), a.c_.data(), b.c_.data());
        return r;
    }
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
        a.check(b);
        FieldElem r = a;
        a.field_.sub(r.c_.data(), a.c_.data(), b.c_.data());
        return r;
    }
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
        a.check(b);
        FieldElem r = a;
        a.field_.mul(r.c_.data(), a.c_.data(), b.c_.data());
        return r;
    }
    friend bool operator==(const FieldElem& a, const FieldElem& b) {
        return a.field_.same(b.field_) && a.c_ == b.c_;
    }

    FieldElem inverse() const {
        FieldElem r = *this;
        field_.inv(r.c_.data(), c_.data());
        return r;
    }

    FieldElem pow(u64 e) const {
        FieldElem r = *this;
        field_.pow(r.c_.data(), c_.data(), e);
        return r;
    }

private:
    void check(const FieldElem& o) const {
        if (!field_.same(o.field_)) throw std::invalid_argument("field element context mismatch");
    }

    Field field_;
    std::vector<u64> c_;
};

inline FieldElem Field::zero() const { return FieldElem(*this, std::vector<u64>(static_cast<size_t>(degree()), 0)); }
inline FieldElem Field::one() const {
    std::vector<u64> c(static_cast<size_t>(degree()), 0);
    c[0] = 1 % characteristic();
    return FieldElem(*this, std::move(c));
}
inline FieldElem Field::from_int(u64 v) const {
    std::vector<u64> c(static_cast<size_t>(degree()), 0);
    c[0] = v % characteristic();
    return FieldElem(*this, std::move(c));
}
inline FieldElem Field::from_coeffs(std::vector<u64> coeffs) const {
    coeffs.resize(static_cast<size_t>(degree()), 0);
    return FieldElem(*this, std::move(coeffs));
}

// Random monic irreducible polynomial of degree d over Z_p, found by testing
// random candidates with the standard Frobenius/gcd criterion. Deterministic
// for a fixed rng state; expected O(d) candidates.
inline std::vector<u64> find_irreducible(u64 p, int d, Rng& rng) {
    if (!detail::is_prime_u64(p)) throw std::invalid_argument("find_irreducible: p is not prime");
    if (d < 1) throw std::invalid_argument("find_irreducible: degree must be >= 1");
    if (d == 1) return {rng.below(p), 1};
    while (true) {
        detail::ZpPoly f(static_cast<size_t>(d + 1));
        for (int i = 0; i < d; ++i) f[static_cast<size_t>(i)] = rng.below(p);
        f[static_cast<size_t>(d)] = 1;
        if (f[0] == 0) continue;  // divisible by x
        if (detail::zp_irreducible(f, p)) return f;
    }
}

inline Field field_new(u64 p, int d, std::optional<std::vector<u64>> modulus, Rng& rng) {
    if (!detail::is_prime_u64(p)) throw std::invalid_argument("field_new: p = " + std::to_string(p) + " is not prime");
    if (d < 1) throw std::invalid_argument("field_new: degree must be >= 1");
    auto ctx = std::make_shared<FieldCtx>();
    ctx->p = p;
    ctx->d = d;
    if (d == 1) {
        if (modulus && modulus->size() > 0)
            throw std::invalid_argument("field_new: prime field takes no modulus");
        return Field(ctx);
    }
    if (modulus) {
        auto& m = *modulus;
        if (static_cast<int>(m.size()) != d + 1 || m.back() % p != 1)
            throw std::invalid_argument("field_new: modulus must be monic of degree d");
        for (auto& c : m) c %= p;
        if (!detail::zp_irreducible(m, p))
            throw std::invalid_argument("field_new: supplied modulus is reducible");
        ctx->modulus = m;
    } else {
        ctx->modulus = find_irreducible(p, d, rng);
    }
    return Field(ctx);
}

inline Field field_new(u64 p, int d = 1, u64 seed = 0) {
    Rng rng(seed);
    return field_new(p, d, std::nullopt, rng);
}

namespace detail {

// --- dense polynomials with coefficients in an arbitrary Field, used only
// for root extraction inside extension fields (small degrees) ---

struct FPoly {
    // coefficient i occupies coeffs[i*d .. i*d+d)
    std::vector<u64> coeffs;
    int deg = -1;
};

inline FPoly fpoly_make(const Field& f, int deg) {
    FPoly r;
    r.deg = deg;
    r.coeffs.assign(static_cast<size_t>((deg + 1) * f.degree()), 0);
    return r;
}

inline u64* fpoly_at(const Field& f, FPoly& g, int i) { return g.coeffs.data() + static_cast<size_t>(i) * f.degree(); }
inline const u64* fpoly_at(const Field& f, const FPoly& g, int i) { return g.coeffs.data() + static_cast<size_t>(i) * f.degree(); }

inline void fpoly_trim(const Field& f, FPoly& g) {
    while (g.deg >= 0 && f.is_zero(fpoly_at(f, g, g.deg))) --g.deg;
    g.coeffs.resize(static_cast<size_t>((g.deg + 1) * f.degree()));
}

// rem of a by monic-ized b, in place
inline void fpoly_mod(const Field& f, FPoly& a, const FPoly& b) {
    int d = f.degree();
    std::vector<u64> lead_inv(static_cast<size_t>(d)), c(static_cast<size_t>(d)), t(static_cast<size_t>(d));
    f.inv(lead_inv.data(), fpoly_at(f, b, b.deg));
    while (a.deg >= b.deg && a.deg >= 0) {
        f.mul(c.data(), fpoly_at(f, a, a.deg), lead_inv.data());
        if (!f.is_zero(c.data())) {
            int shift = a.deg - b.deg;
            for (int j = 0; j <= b.deg; ++j) {
                f.mul(t.data(), c.data(), fpoly_at(f, b, j));
                f.sub(fpoly_at(f, a, shift + j), fpoly_at(f, a, shift + j), t.data());
            }
        }
        fpoly_trim(f, a);
        if (a.deg < 0) break;
    }
}

inline FPoly fpoly_mulmod(const Field& f, const FPoly& a, const FPoly& b, const FPoly& mod) {
    int d = f.degree();
    if (a.deg < 0 || b.deg < 0) return fpoly_make(f, -1);
    FPoly c = fpoly_make(f, a.deg + b.deg);
    std::vector<u64> t(static_cast<size_t>(d));
    for (int i = 0; i <= a.deg; ++i) {
        if (f.is_zero(fpoly_at(f, a, i))) continue;
        for (int j = 0; j <= b.deg; ++j) {
            f.mul(t.data(), fpoly_at(f, a, i), fpoly_at(f, b, j));
            f.add(fpoly_at(f, c, i + j), fpoly_at(f, c, i + j), t.data());
        }
    }
    fpoly_trim(f, c);
    fpoly_mod(f, c, mod);
    return c;
}

inline FPoly fpoly_powmod(const Field& f, FPoly base, u64 e, const FPoly& mod) {
    FPoly r = fpoly_make(f, 0);
    f.set_one(fpoly_at(f, r, 0));
    while (e) {
        if (e & 1) r = fpoly_mulmod(f, r, base, mod);
        base = fpoly_mulmod(f, base, base, mod);
        e >>= 1;
    }
    return r;
}

inline FPoly fpoly_gcd(const Field& f, FPoly a, FPoly b) {
    fpoly_trim(f, a);
    fpoly_trim(f, b);
    while (b.deg >= 0) {
        fpoly_mod(f, a, b);
        std::swap(a, b);
    }
    return a;
}

inline FPoly fpoly_sub(const Field& f, const FPoly& a, const FPoly& b) {
    FPoly r = fpoly_make(f, std::max(a.deg, b.deg));
    for (int i = 0; i <= a.deg; ++i) std::copy(fpoly_at(f, a, i), fpoly_at(f, a, i) + f.degree(), fpoly_at(f, r, i));
    for (int i = 0; i <= b.deg; ++i) f.sub(fpoly_at(f, r, i), fpoly_at(f, r, i), fpoly_at(f, b, i));
    fpoly_trim(f, r);
    return r;
}

// One root of g (squarefree product of distinct linear factors over ext)
// via Cantor-Zassenhaus style splitting; ext = GF(p^e).
inline std::vector<u64> fpoly_extract_root(const Field& ext, FPoly g, Rng& rng) {
    int d = ext.degree();
    u64 p = ext.characteristic();
    int e = d;  // ext has degree e over Z_p
    while (g.deg > 1) {
        // uniformly random residue mod g: by CRT its components at the roots
        // of g are independent, so each splitting attempt succeeds w.p. ~1/2
        FPoly u = fpoly_make(ext, g.deg - 1);
        for (int i = 0; i < g.deg; ++i) ext.random(fpoly_at(ext, u, i), rng);
        fpoly_trim(ext, u);
        if (u.deg < 0) continue;
        FPoly w;
        if (p == 2) {
            // trace map sum_{j<e} u^{2^j} splits components into {0,1}
            w = u;
            FPoly acc = u;
            for (int j = 1; j < e; ++j) {
                acc = fpoly_mulmod(ext, acc, acc, g);
                w = fpoly_sub(ext, w, acc);  // char 2: sub == add
            }
        } else {
            // u^{(p^e-1)/2} via norm product: v = prod_j u^{p^j}, then v^{(p-1)/2}
            FPoly v = u;
            FPoly acc = u;
            for (int j = 1; j < e; ++j) {
                acc = fpoly_powmod(ext, acc, p, g);
                v = fpoly_mulmod(ext, v, acc, g);
            }
            w = fpoly_powmod(ext, v, (p - 1) / 2, g);
            if (w.deg >= 0) {
                std::vector<u64> one(static_cast<size_t>(d), 0);
                one[0] = 1;
                ext.sub(fpoly_at(ext, w, 0), fpoly_at(ext, w, 0), one.data());
                fpoly_trim(ext, w);
            }
        }
        if (w.deg < 0) continue;
        FPoly h = fpoly_gcd(ext, w, g);
        if (h.deg >= 1 && h.deg < g.deg) {
            // keep the smaller side holding at least one root
            fpoly_trim(ext, h);
            g = std::move(h);
        }
    }
    if (g.deg != 1) throw std::runtime_error("root extraction failed");
    // root = -c0 / c1
    std::vector<u64> inv_lead(static_cast<size_t>(d)), root(static_cast<size_t>(d));
    ext.inv(inv_lead.data(), fpoly_at(ext, g, 1));
    ext.mul(root.data(), fpoly_at(ext, g, 0), inv_lead.data());
    ext.neg(root.data(), root.data());
    return root;
}

}  // namespace detail

// Injective field homomorphism descriptor: maps elements of `from` into `to`.
struct FieldEmbedding {
    Field from, to;
    // powers of the image of x_from inside `to`: powers[i] = r^i, i < d_from
    std::vector<std::vector<u64>> root_powers;

    void map(u64* out, const u64* in) const {
        int df = from.degree(), dt = to.degree();
        std::fill(out, out + dt, 0);
        std::vector<u64> t(static_cast<size_t>(dt));
        for (int i = 0; i < df; ++i) {
            if (in[i] == 0) continue;
            std::vector<u64> c(static_cast<size_t>(dt), 0);
            c[0] = in[i];
            to.mul(t.data(), root_powers[static_cast<size_t>(i)].data(), c.data());
            to.add(out, out, t.data());
        }
    }

    FieldElem map(const FieldElem& e) const {
        std::vector<u64> out(static_cast<size_t>(to.degree()));
        map(out.data(), e.data());
        return FieldElem(to, std::move(out));
    }
};

// Embedding of `base` into an already constructed field `ext` with
// deg(ext) a multiple of deg(base) and equal characteristic. For base degree
// 1 this is the constant embedding; otherwise a root of the base modulus is
// located inside ext (exhaustively for tiny fields, by random splitting
// otherwise).
inline FieldEmbedding embed_into(const Field& base, const Field& ext, Rng& rng) {
    if (base.characteristic() != ext.characteristic())
        throw std::invalid_argument("embed_into: characteristic mismatch");
    if (ext.degree() % base.degree() != 0)
        throw std::invalid_argument("embed_into: base degree does not divide extension degree");
    FieldEmbedding emb;
    emb.from = base;
    emb.to = ext;
    int df = base.degree(), dt = ext.degree();
    emb.root_powers.resize(static_cast<size_t>(df));
    for (auto& v : emb.root_powers) v.assign(static_cast<size_t>(dt), 0);
    emb.root_powers[0][0] = 1 % ext.characteristic();
    if (df == 1) return emb;
    if (base.same(ext)) {
        for (int i = 1; i < df; ++i) emb.root_powers[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        return emb;
    }

    // locate a root of base.modulus inside ext
    const auto& m = base.ctx().modulus;
    std::vector<u64> root(static_cast<size_t>(dt), 0);
    bool found = false;
    auto ext_size = ext.size_exact();
    if (ext_size && *ext_size <= (1u << 16)) {
        std::vector<u64> x(static_cast<size_t>(dt)), acc(static_cast<size_t>(dt)), pw(static_cast<size_t>(dt)), t(static_cast<size_t>(dt));
        for (u64 idx = 0; idx < *ext_size && !found; ++idx) {
            ext.element_at(x.data(), idx);
            // evaluate m at x by Horner
            std::fill(acc.begin(), acc.end(), 0);
            for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
                ext.mul(t.data(), acc.data(), x.data());
                std::fill(acc.begin(), acc.end(), 0);
                acc[0] = m[static_cast<size_t>(i)];
                ext.add(acc.data(), t.data(), acc.data());
            }
            if (ext.is_zero(acc.data())) {
                root = x;
                found = true;
            }
        }
        if (!found) throw std::runtime_error("embed_into: no root found (unexpected)");
    } else {
        detail::FPoly g = detail::fpoly_make(ext, df);
        for (int i = 0; i <= df; ++i) detail::fpoly_at(ext, g, i)[0] = m[static_cast<size_t>(i)];
        detail::fpoly_trim(ext, g);
        root = detail::fpoly_extract_root(ext, std::move(g), rng);
    }

    std::vector<u64> pw(root.size());
    std::copy(root.begin(), root.end(), pw.begin());
    emb.root_powers[1] = pw;
    for (int i = 2; i < df; ++i) {
        std::vector<u64> nx(static_cast<size_t>(dt));
        ext.mul(nx.data(), emb.root_powers[static_cast<size_t>(i - 1)].data(), root.data());
        emb.root_powers[static_cast<size_t>(i)] = std::move(nx);
    }
    return emb;
}

// GF(p^d) -> GF(p^{s*d}) together with the embedding; s = 1 returns the
// field itself with the identity embedding.
inline std::pair<Field, FieldEmbedding> extend_and_embed(const Field& base, int s, Rng& rng) {
    if (s < 1) throw std::invalid_argument("extend_and_embed: factor must be >= 1");
    if (s == 1) return {base, embed_into(base, base, rng)};
    Field ext = field_new(base.characteristic(), base.degree() * s, std::nullopt, rng);
    return {ext, embed_into(base, ext, rng)};
}

}  // namespace mfl

#endif
