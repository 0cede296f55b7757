#pragma once

// Independent brute-force references used by the unit and acceptance tests.
// Nothing here calls the enumeration code under test.

#include "hovelkit/rational.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using hovelkit::IMat;
using hovelkit::IVec;

inline IVec reflect(const IMat& a, std::size_t i, IVec q) {
    std::int64_t p = 0;
    for (std::size_t j = 0; j < q.size(); ++j) p += a[i][j] * q[j];
    q[i] -= p;
    return q;
}

inline std::int64_t ht(const IVec& v) {
    std::int64_t h = 0;
    for (auto x : v) h += x < 0 ? -x : x;
    return h;
}

/// Images of the simple roots under every word of length <= max_len, kept if ht <= cap.
inline std::set<IVec> real_roots_by_words(const IMat& a, std::int64_t cap, std::size_t max_len) {
    const std::size_t n = a.size();
    std::set<IVec> out;
    std::set<IVec> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        IVec e(n, 0);
        e[i] = 1;
        frontier.insert(e);
    }
    std::set<IVec> all = frontier;
    for (std::size_t len = 0; len < max_len; ++len) {
        std::set<IVec> next;
        for (const auto& v : frontier)
            for (std::size_t i = 0; i < n; ++i) {
                auto w = reflect(a, i, v);
                if (all.insert(w).second) next.insert(w);
            }
        frontier = std::move(next);
    }
    for (const auto& v : all)
        if (ht(v) <= cap) out.insert(v);
    return out;
}

/// Descent test: q is a positive imaginary root iff repeated reflections with
/// positive pairing keep it positive and end in the fundamental set.
inline bool is_positive_imaginary(const IMat& a, IVec q) {
    const std::size_t n = a.size();
    for (auto x : q)
        if (x < 0) return false;
    if (ht(q) == 0) return false;
    for (int guard = 0; guard < 100000; ++guard) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n && pick == n; ++i) {
            std::int64_t p = 0;
            for (std::size_t j = 0; j < n; ++j) p += a[i][j] * q[j];
            if (p > 0) pick = i;
        }
        if (pick == n) break;
        q = reflect(a, pick, q);
        for (auto x : q)
            if (x < 0) return false;
    }
    // Connected support.
    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < n; ++i)
        if (q[i] != 0) supp.push_back(i);
    if (supp.size() == 1) return false;  // a simple root: real
    std::set<std::size_t> reached{supp[0]};
    std::vector<std::size_t> stack{supp[0]};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : supp)
            if (a[v][w] != 0 && reached.insert(w).second) stack.push_back(w);
    }
    return reached.size() == supp.size();
}

inline std::set<IVec> imaginary_roots_by_scan(const IMat& a, std::int64_t cap) {
    const std::size_t n = a.size();
    std::set<IVec> out;
    IVec cur(n, 0);
    std::vector<std::int64_t> left(n + 1);
    auto rec = [&](auto&& self, std::size_t i, std::int64_t budget) -> void {
        if (i == n) {
            if (is_positive_imaginary(a, cur)) {
                out.insert(cur);
                IVec m = cur;
                for (auto& x : m) x = -x;
                out.insert(m);
            }
            return;
        }
        for (std::int64_t v = 0; v <= budget; ++v) {
            cur[i] = v;
            self(self, i + 1, budget - v);
        }
        cur[i] = 0;
    };
    rec(rec, 0, cap);
    return out;
}

/// Number of distinct group elements among all words of length <= len.
inline std::size_t weyl_count_by_words(const IMat& a, std::size_t len) {
    const std::size_t n = a.size();
    auto gen = [&](std::size_t i) {
        IMat s(n, IVec(n, 0));
        for (std::size_t r = 0; r < n; ++r) s[r][r] = 1;
        for (std::size_t c = 0; c < n; ++c) s[i][c] -= a[i][c];
        return s;
    };
    auto mul = [&](const IMat& x, const IMat& y) {
        IMat r(n, IVec(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) r[i][j] += x[i][k] * y[k][j];
        return r;
    };
    IMat id(n, IVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    std::set<IMat> all{id}, frontier{id};
    for (std::size_t l = 0; l < len; ++l) {
        std::set<IMat> next;
        for (const auto& x : frontier)
            for (std::size_t i = 0; i < n; ++i) {
                auto y = mul(x, gen(i));
                if (all.insert(y).second) next.insert(y);
            }
        frontier = std::move(next);
    }
    return all.size();
}

/// Weyl action on V^q coordinates (v_i = alpha_i(v)): s_j(v) = v - v_j * row_j.
inline std::vector<hovelkit::Q> reflect_q(const IMat& a, std::size_t j, std::vector<hovelkit::Q> v) {
    hovelkit::Q c = v[j];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * hovelkit::Q(static_cast<long>(a[j][i]));
    return v;
}

/// Extreme rays of the closure of w F(J) in V^q, computed from e_i by reflections.
inline std::vector<std::vector<hovelkit::Q>> facet_rays_q(const IMat& a, const std::vector<std::size_t>& word,
                                                        const std::vector<std::size_t>& J, char sign) {
    std::vector<std::vector<hovelkit::Q>> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::find(J.begin(), J.end(), i) != J.end()) continue;
        std::vector<hovelkit::Q> e(a.size(), 0);
        e[i] = sign == '-' ? -1 : 1;
        for (std::size_t k = word.size(); k-- > 0;) e = reflect_q(a, word[k], e);
        out.push_back(e);
    }
    return out;
}

/// Least integer lambda in [lo, hi] with form.p + lambda >= 0 on every sample, or hi + 1.
inline std::int64_t least_level_by_scan(const std::vector<hovelkit::Q>& form,
                                        const std::vector<std::vector<hovelkit::Q>>& samples, std::int64_t lo,
                                        std::int64_t hi) {
    for (std::int64_t l = lo; l <= hi; ++l) {
        bool ok = true;
        for (const auto& p : samples) {
            hovelkit::Q v = static_cast<long>(l);
            for (std::size_t k = 0; k < p.size(); ++k) v += form[k] * p[k];
            if (sgn(v) < 0) ok = false;
        }
        if (ok) return l;
    }
    return hi + 1;
}

/// p-adic valuation of a nonzero rational by repeated division.
inline std::int64_t val(const hovelkit::Q& q, std::int64_t p) {
    if (sgn(q) == 0) return 1'000'000;
    std::int64_t v = 0;
    mpz_class n = q.get_num(), d = q.get_den();
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    while (d % p == 0) {
        d /= p;
        --v;
    }
    return v;
}

inline hovelkit::Q ppow(std::int64_t p, std::int64_t k) {
    hovelkit::Q r = 1;
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) r *= p;
    return k < 0 ? 1 / r : r;
}

// Lattice classes of M Z_p^2, keyed by the Hermite form [[1, c], [0, p^e]] with c taken mod Z_(p).
struct LatticeKey {
    std::int64_t e;
    hovelkit::Q c;
    bool operator<(const LatticeKey& o) const { return e != o.e ? e < o.e : c < o.c; }
    bool operator==(const LatticeKey& o) const { return e == o.e && c == o.c; }
};

inline hovelkit::Q frac_part(const hovelkit::Q& c, std::int64_t p) {
    if (sgn(c) == 0 || val(c, p) >= 0) return 0;
    std::int64_t e = -val(c, p);
    mpz_class mod = ppow(p, e).get_num();
    mpz_class den = c.get_den();
    while (den % p == 0) den /= p;
    // c = num / (p^e den); brute-force inverse of den modulo p^e.
    mpz_class inv = 1;
    while ((den * inv - 1) % mod != 0) ++inv;
    mpz_class num = (c.get_num() * inv) % mod;
    if (num < 0) num += mod;
    return hovelkit::Q(num) / hovelkit::Q(mod);
}

inline LatticeKey lattice_key(hovelkit::Mat m, std::int64_t p) {
    if (sgn(m[1][0]) != 0 && (sgn(m[1][1]) == 0 || val(m[1][0], p) < val(m[1][1], p)))
        for (auto& row : m) std::swap(row[0], row[1]);
    hovelkit::Q f = m[1][0] / m[1][1];
    for (auto& row : m) row[0] -= f * row[1];
    std::int64_t a = val(m[0][0], p), b = val(m[1][1], p);
    hovelkit::Q unit2 = m[1][1] / ppow(p, b);
    hovelkit::Q c = m[0][1] / unit2;
    return {b - a, frac_part(c / ppow(p, a), p)};
}

inline hovelkit::Mat key_matrix(const LatticeKey& k, std::int64_t p) { return {{hovelkit::Q(1), k.c}, {hovelkit::Q(0), ppow(p, k.e)}}; }

// Adjacent classes: after scaling, M1^-1 M2 is integral with elementary divisors (1, p).
inline bool lattice_adjacent(const LatticeKey& k1, const LatticeKey& k2, std::int64_t p) {
    hovelkit::Mat a = hovelkit::mul(*hovelkit::inverse(key_matrix(k1, p)), key_matrix(k2, p));
    std::int64_t mn = 1000;
    for (const auto& r : a)
        for (const auto& x : r)
            if (sgn(x) != 0) mn = std::min(mn, val(x, p));
    hovelkit::Q det = hovelkit::determinant(a) * ppow(p, -2 * mn);
    return val(det, p) == 1;
}

}  // namespace oracle
