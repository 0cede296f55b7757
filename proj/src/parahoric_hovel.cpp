#include "hovelkit/parahoric_hovel.hpp"

#include "hovelkit/errors.hpp"
#include "hovelkit/vectorial.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>
#include <sstream>

namespace hovelkit {

namespace {

Mat diag_mat(const Vec& d) {
    Mat m = zero_mat(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
    return m;
}

Q pow_p(std::int64_t p, std::int64_t k) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k < 0 ? -k : k));
    return k >= 0 ? Q(pk) : Q(1) / Q(pk);
}

bool is_integer(const Q& q) { return q.get_den() == 1; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

ValuationReport report(const std::string& axiom, const ParahoricFamily& fam, std::uint64_t seed) {
    ValuationReport r;
    r.axiom = axiom;
    r.instance = fam.instance().name();
    r.seed = seed;
    return r;
}

nlohmann::json mat_json(const Mat& g) { return lmat_to_json(lmat_from(g)); }

Shape shape_of(const std::vector<Vec>& pts) { return pts.size() == 1 ? Shape::point(pts[0]) : Shape::finite_set(pts); }

std::int64_t entry_height(const Mat& g) {
    std::int64_t h = 0;
    for (const auto& row : g)
        for (const auto& x : row) {
            mpz_class a = abs(x.get_num());
            if (a > 1'000'000 || x.get_den() > 1'000'000) return 1'000'000;
            h = std::max<std::int64_t>(h, std::max(a.get_si(), x.get_den().get_si()));
        }
    return h;
}


// Matrices over Z[1/p] for the word search: entry = m p^e with p not dividing m.
struct PMat {
    std::size_t n = 0;
    std::array<std::int64_t, 9> m{};
    std::array<std::int32_t, 9> e{};
    bool operator==(const PMat& o) const { return n == o.n && m == o.m && e == o.e; }
};

struct PMatHash {
    std::size_t operator()(const PMat& a) const {
        std::size_t h = a.n;
        for (std::size_t k = 0; k < a.n * a.n; ++k) {
            h = h * 1000003u ^ static_cast<std::size_t>(a.m[k]);
            h = h * 1000003u ^ static_cast<std::size_t>(a.e[k]);
        }
        return h;
    }
};

std::optional<PMat> to_pmat(const Mat& g, std::int64_t p) {
    PMat a;
    a.n = g.size();
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j) {
            const Q& x = g[i][j];
            if (sgn(x) == 0) continue;
            std::int64_t v = vp_finite(x, p);
            Q u = x / pow_p(p, v);
            if (u.get_den() != 1 || !u.get_num().fits_slong_p()) return std::nullopt;
            a.m[i * a.n + j] = u.get_num().get_si();
            a.e[i * a.n + j] = static_cast<std::int32_t>(v);
        }
    return a;
}

Mat from_pmat(const PMat& a, std::int64_t p) {
    Mat g = zero_mat(a.n, a.n);
    for (std::size_t k = 0; k < a.n * a.n; ++k)
        if (a.m[k] != 0) g[k / a.n][k % a.n] = Q(static_cast<long>(a.m[k])) * pow_p(p, a.e[k]);
    return g;
}

/// Product, or nullopt when an entry leaves the height bound max(|num|, den) <= cap.
std::optional<PMat> pmat_mul(const PMat& a, const PMat& b, std::int64_t p, std::int64_t cap) {
    PMat c;
    c.n = a.n;
    const std::size_t n = a.n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t tm[3];
            std::int32_t te[3];
            std::size_t terms = 0;
            for (std::size_t k = 0; k < n; ++k) {
                std::int64_t x = a.m[i * n + k], y = b.m[k * n + j];
                if (x == 0 || y == 0) continue;
                tm[terms] = x * y;  // both factors are bounded by cap <= 5e5
                te[terms] = a.e[i * n + k] + b.e[k * n + j];
                ++terms;
            }
            if (terms == 0) continue;
            std::int32_t emin = *std::min_element(te, te + terms);
            __int128 sum = 0;
            for (std::size_t t = 0; t < terms; ++t) {
                __int128 term = tm[t];
                for (std::int32_t d = te[t] - emin; d > 0; --d) {
                    term *= p;
                    if (term > (__int128(1) << 100) || term < -(__int128(1) << 100)) return std::nullopt;
                }
                sum += term;
            }
            std::int32_t e = emin;
            if (sum == 0) continue;
            while (sum % p == 0) {
                sum /= p;
                ++e;
            }
            __int128 mag = sum < 0 ? -sum : sum;
            if (mag > cap) return std::nullopt;
            // numerator |m| p^e when e >= 0, denominator p^-e otherwise
            __int128 other = 1;
            for (std::int32_t d = (e < 0 ? -e : e); d > 0; --d) {
                other *= p;
                if (other > cap) return std::nullopt;
            }
            if (e > 0 && mag * other > cap) return std::nullopt;
            c.m[i * n + j] = static_cast<std::int64_t>(sum);
            c.e[i * n + j] = e;
        }
    return c;
}
}  // namespace

ParahoricFamily::ParahoricFamily(std::shared_ptr<const SLnInstance> inst) : inst_(std::move(inst)) {
    const auto& m = model().matrix();
    for (const auto& w : weyl_elements(m, 64)) {
        LMat g = inst_->identity();
        for (std::size_t i : w.word) {
            IVec a(m.size, 0);
            a[i] = 1;
            g = inst_->mul(g, inst_->m_of(a, inst_->x(a, Q(1))));
        }
        lifts_.emplace_back(w, *lmat_constant(g));
    }
}

ExtQ ParahoricFamily::threshold(const Shape& omega, const IVec& root) const {
    return level_for(model(), omega, root, LevelPolicy::Lambda);
}

std::vector<std::vector<ExtQ>> ParahoricFamily::thresholds(const Shape& omega) const {
    bool memo = omega.kind == ShapeKind::Point || omega.kind == ShapeKind::Segment || omega.kind == ShapeKind::FiniteSet;
    std::pair<int, std::vector<Vec>> key{static_cast<int>(omega.kind), omega.points};
    if (memo) {
        std::lock_guard<std::mutex> lock(memoMutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    std::vector<std::vector<ExtQ>> t(n(), std::vector<ExtQ>(n(), ExtQ::finite(0)));
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < n(); ++j)
            if (i != j) t[i][j] = threshold(omega, inst_->root_at(i, j));
    if (memo) {
        std::lock_guard<std::mutex> lock(memoMutex_);
        if (memo_.size() > 100'000) memo_.clear();
        memo_.emplace(std::move(key), t);
    }
    return t;
}

bool ParahoricFamily::contains(const Mat& g, const Shape& omega) const { return contains(g, thresholds(omega)); }

bool ParahoricFamily::contains(const Mat& g, const std::vector<std::vector<ExtQ>>& need) const {
    if (g.size() != n() || determinant(g) != 1) return false;
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = 0; j < n(); ++j)
            if (vp(g[i][j], inst_->prime()) < need[i][j]) return false;
    return true;
}

std::optional<Mat> ParahoricFamily::torus_for(const Vec& tau) const {
    Vec y = inst_->weights(tau);
    Vec d;
    for (const auto& yi : y) {
        if (!is_integer(yi)) return std::nullopt;
        d.push_back(pow_p(inst_->prime(), -yi.get_num().get_si()));
    }
    return diag_mat(d);
}

std::vector<Mat> ParahoricFamily::n_candidates(const Vec& x, const Vec& y) const {
    std::vector<Mat> out;
    for (const auto& [w, L] : lifts_) {
        Vec wx = model().real.apply(w, x);
        auto t = torus_for(sub(y, wx));
        if (t) out.push_back(mul(*t, L));
    }
    return out;
}

std::vector<Mat> ParahoricFamily::stabilizer_in_N(const std::vector<Vec>& pts) const {
    std::vector<Mat> out;
    for (const auto& n : stabilizer_in_N(pts.at(0))) {
        auto a = nu(n);
        bool ok = std::all_of(pts.begin(), pts.end(), [&](const Vec& p) { return apply(model(), a, p) == p; });
        if (ok) out.push_back(n);
    }
    return out;
}

std::vector<Mat> ParahoricFamily::generators(const Vec& x) const {
    std::vector<Mat> out;
    Shape pt = Shape::point(x);
    for (const auto& a : inst_->roots()) {
        ExtQ l = threshold(pt, a);
        Q base = pow_p(inst_->prime(), l.value.get_num().get_si());
        for (long s : {1, -1, 2, -2, 4, -4}) out.push_back(*lmat_constant(inst_->x(a, base * Q(s))));
    }
    for (const auto& n : stabilizer_in_N(x)) {
        out.push_back(n);
        out.push_back(*inverse(n));
    }
    // Sign matrices of Z0.
    for (std::size_t i = 0; i + 1 < n(); ++i) {
        Vec d(n(), Q(1));
        d[i] = -1;
        d[n() - 1] = -1;
        out.push_back(diag_mat(d));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Mat ParahoricFamily::sample_Z0(std::mt19937_64& rng) const {
    Vec d;
    Q prod = 1;
    for (std::size_t i = 0; i + 1 < n(); ++i) {
        d.push_back(sample_padic(rng, inst_->prime(), 0, 0));
        prod *= d.back();
    }
    d.push_back(1 / prod);
    return diag_mat(d);
}

Mat ParahoricFamily::sample_member(const std::vector<Vec>& pts, std::mt19937_64& rng, std::size_t len) const {
    Shape omega = shape_of(pts);
    auto roots = inst_->roots();
    auto stab = stabilizer_in_N(pts);
    Mat g = sample_Z0(rng);
    std::size_t count = 1 + pick(rng, len);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t kind = pick(rng, 5);
        if (kind == 0 && !stab.empty()) {
            g = mul(g, stab[pick(rng, stab.size())]);
        } else if (kind == 1) {
            g = mul(g, sample_Z0(rng));
        } else {
            const IVec& a = roots[pick(rng, roots.size())];
            ExtQ l = threshold(omega, a);
            if (!l.is_finite()) continue;
            std::int64_t lo = l.value.get_num().get_si();
            g = mul(g, *lmat_constant(inst_->x(a, sample_padic(rng, inst_->prime(), lo, lo + 3))));
        }
    }
    return g;
}

Mat ParahoricFamily::sample_N(std::mt19937_64& rng) const {
    Vec k(n());
    std::int64_t sum = 0;
    for (std::size_t i = 0; i + 1 < n(); ++i) {
        std::int64_t e = std::uniform_int_distribution<std::int64_t>(-2, 2)(rng);
        k[i] = pow_p(inst_->prime(), e);
        sum += e;
    }
    k[n() - 1] = pow_p(inst_->prime(), -sum);
    return mul(mul(diag_mat(k), lifts_[pick(rng, lifts_.size())].second), sample_Z0(rng));
}

bool ParahoricFamily::in_NQ(const Mat& g, const Shape& omega) const {
    const std::size_t N = n();
    auto need = thresholds(omega);
    for (const auto& [w, L] : lifts_) {
        // Row i of L^-1 t^-1 g is +- row pi(i) of g divided by t_pi(i).
        Mat Linv = *inverse(L);
        bool feasible = true;
        Q total = 0;
        for (std::size_t i = 0; i < N && feasible; ++i) {
            std::size_t src = 0;
            while (sgn(Linv[i][src]) == 0) ++src;
            std::optional<Q> bound;
            for (std::size_t j = 0; j < N; ++j) {
                if (sgn(g[src][j]) == 0) continue;
                if (!need[i][j].is_finite()) {
                    feasible = false;
                    break;
                }
                Q b = Q(static_cast<long>(vp_finite(g[src][j], inst_->prime()))) - need[i][j].value;
                if (!bound || b < *bound) bound = b;
            }
            if (feasible) total += floor_q(*bound);
        }
        if (feasible && total >= 0) return true;
    }
    return false;
}

Q padic_reduce(const Q& r, std::int64_t p, std::int64_t m) {
    if (sgn(r) == 0) return 0;
    std::int64_t s = vp_finite(r, p);
    if (s >= m) return 0;
    Q u = r / pow_p(p, s);
    mpz_class mod = pow_p(p, m - s).get_num();
    mpz_class inv;
    mpz_class den = u.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class c = (u.get_num() * inv) % mod;
    if (c < 0) c += mod;
    return pow_p(p, s) * Q(c);
}

HovelPoint canonical(const ParahoricFamily& fam, const HovelPoint& pt) {
    const auto& inst = fam.instance();
    auto d = iwasawa_decompose(inst, pt.g, pt.x);
    Vec y = apply(fam.model(), d.nu, pt.x);
    Mat u = d.factors[0];
    Shape py = Shape::point(y);
    auto level = [&](std::size_t i, std::size_t j) {
        return fam.threshold(py, inst.root_at(i, j)).value.get_num().get_si();
    };
    std::int64_t p = inst.prime();
    const std::size_t N = fam.n();
    if (N == 2) {
        u[0][1] = padic_reduce(u[0][1], p, level(0, 1));
    } else {
        // (a, b, c) * (a', b', c') = (a + a', b + b', c + a b' + c').
        Q a = u[0][1], b = u[1][2], c = u[0][2];
        Q b2 = padic_reduce(b, p, level(1, 2));
        Q a2 = padic_reduce(a, p, level(0, 1));
        Q c2 = padic_reduce(c + a * (b2 - b), p, level(0, 2));
        u[0][1] = a2;
        u[1][2] = b2;
        u[0][2] = c2;
    }
    return HovelPoint{u, y};
}

bool same_hovel_point(const ParahoricFamily& fam, const HovelPoint& a, const HovelPoint& b) {
    Mat gh = mul(*inverse(a.g), b.g);
    for (const auto& n : fam.n_candidates(a.x, b.x))
        if (fam.contains(mul(gh, n), a.x)) return true;
    return false;
}

std::vector<Vec> sample_points(const ApartmentModel& m, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto dv = m.real.dual_vectors();
    std::uniform_int_distribution<int> num(-8, 8), den(1, 4);
    std::vector<Vec> out{zero_vec(m.dim())};
    while (out.size() < count) {
        Vec x = zero_vec(m.dim());
        for (const auto& v : dv) {
            Q c(num(rng), den(rng));
            c.canonicalize();
            x = add(x, scale(c, v));
        }
        out.push_back(x);
    }
    return out;
}

namespace {

/// h' = u d v (eps = '+') or l d r (eps = '-') in the big cell, with all parts in Q(Omega).
bool qdec_standard(const ParahoricFamily& fam, const Mat& h, const Shape& omega, char eps) {
    const std::size_t N = fam.n();
    Mat J = zero_mat(N, N);
    for (std::size_t i = 0; i < N; ++i) J[i][N - 1 - i] = 1;
    for (const auto& [w, L] : fam.weyl_lifts()) {
        Mat g = mul(h, *inverse(L));
        std::optional<std::array<Mat, 3>> f;
        if (eps == '+') {
            f = udl_decompose(g);
        } else {
            f = udl_decompose(mul(mul(J, g), J));
            if (f)
                for (auto& m : *f) m = mul(mul(J, m), J);
        }
        if (!f) continue;
        const auto& [u, d, v] = *f;
        Mat dv = mul(mul(d, v), *inverse(d));
        Mat dn = mul(d, L);
        if (fam.contains(u, omega) && fam.contains(dv, omega) && fam.contains(dn, omega)) return true;
    }
    return false;
}

}  // namespace

bool in_Qdec(const ParahoricFamily& fam, const Mat& h, const Shape& omega, const WeylElement& w, char eps) {
    for (const auto& [w0, L] : fam.weyl_lifts()) {
        if (!(w0 == w)) continue;
        auto back = invert(fam.model(), fam.nu(L));
        Mat hp = mul(mul(*inverse(L), h), L);
        return qdec_standard(fam, hp, apply(fam.model(), back, omega), eps);
    }
    throw std::invalid_argument("Weyl element has no lift");
}

std::vector<ValuationReport> check_parahoric_axioms(const ParahoricFamily& fam, const std::vector<Vec>& points,
                                                    const CheckPlan& plan) {
    const auto& model = fam.model();
    const auto& inst = fam.instance();
    std::mt19937_64 rng(plan.seed);
    auto roots = inst.roots();
    std::int64_t p = inst.prime();

    auto P1 = report("P1", fam, plan.seed);
    P1.note = "main-facade points: U(F^v(x)) = {1} and P(F^v(x)) = G";
    auto P2 = report("P2", fam, plan.seed), P3 = report("P3", fam, plan.seed), P4 = report("P4", fam, plan.seed),
         P5 = report("P5", fam, plan.seed), P8 = report("P8", fam, plan.seed), P10 = report("P10", fam, plan.seed);
    auto P6 = report("P6", fam, plan.seed), P7 = report("P7", fam, plan.seed), P9 = report("P9", fam, plan.seed);
    P6.status = P7.status = P9.status = CheckStatus::Skipped;
    P6.note = "Q(x) = P(x) at main-facade points is what the oracle certification compares";
    P7.note = "needs parahorics at non-main facade points, which are not implemented";
    P9.note = "mixes facades through the closure of x + F^v; unverified";

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Vec& x = points[pi];
        Shape px = Shape::point(x);
        nlohmann::json where = {{"point", vec_to_json(x)}, {"point_index", pi}};
        auto stab = fam.stabilizer_in_N(x);

        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++P1.samples;
            Mat q = fam.sample_member(x, rng);
            if (determinant(q) != 1 || !fam.contains(q, x)) {
                auto w = where;
                w["index"] = s;
                w["g"] = mat_json(q);
                P1.fail(w);
            }
        }

        for (const auto& n : stab) {
            for (std::size_t s = 0; s < 5; ++s) {
                ++P2.samples;
                Mat nz = mul(n, fam.sample_Z0(rng));
                if (!fam.contains(nz, x) || apply(model, fam.nu(nz), x) != x) {
                    auto w = where;
                    w["n"] = mat_json(nz);
                    P2.fail(w);
                }
            }
        }

        for (const auto& a : roots) {
            std::int64_t l = fam.threshold(px, a).value.get_num().get_si();
            for (std::int64_t k = -1; k <= 3; ++k) {
                ++P3.samples;
                Q r = sample_padic(rng, p, l + k, l + k);
                Mat u = *lmat_constant(inst.x(a, r));
                bool inside = (model.real.eval_root(a, x) + Q(static_cast<long>(l + k))) >= 0;
                if (fam.contains(u, x) != inside) {
                    auto w = where;
                    w["root"] = a;
                    w["r"] = to_string(r);
                    w["reason"] = inside ? "U_{a,l} with x in D(a,l) not in Q(x)" : "U_a cap Q(x) larger than U_a(x)";
                    P3.fail(w);
                }
            }
        }

        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++P4.samples;
            Mat n = fam.sample_N(rng);
            Mat ninv = *inverse(n);
            Vec nx = apply(model, fam.nu(n), x);
            Mat q = fam.sample_member(x, rng);
            const IVec& a = roots[pick(rng, roots.size())];
            std::int64_t l = fam.threshold(px, a).value.get_num().get_si();
            Mat out = mul(q, *lmat_constant(inst.x(a, sample_padic(rng, p, l - 2, l - 1))));
            bool ok = fam.contains(mul(mul(n, q), ninv), nx) && !fam.contains(mul(mul(n, out), ninv), nx) &&
                      fam.contains(mul(mul(ninv, fam.sample_member(nx, rng)), n), x);
            if (!ok) {
                auto w = where;
                w["index"] = s;
                w["n"] = mat_json(n);
                w["q"] = mat_json(q);
                P4.fail(w);
            }
        }

        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++P5.samples;
            Mat n = (s % 2 == 0 && !stab.empty()) ? mul(stab[pick(rng, stab.size())], fam.sample_Z0(rng)) : fam.sample_N(rng);
            bool fixes = apply(model, fam.nu(n), x) == x;
            if (fam.contains(n, x) != fixes) {
                auto w = where;
                w["index"] = s;
                w["n"] = mat_json(n);
                w["fixes"] = fixes;
                P5.fail(w);
            }
        }

        for (std::size_t s = 0; s < plan.samples; ++s) {
            ++P8.samples;
            Mat h = fam.sample_member(x, rng);
            for (const auto& [w, L] : fam.weyl_lifts())
                for (char eps : {'+', '-'})
                    if (!in_Qdec(fam, h, px, w, eps)) {
                        auto wit = where;
                        wit["index"] = s;
                        wit["h"] = mat_json(h);
                        wit["chamber"] = weyl_to_json(w);
                        wit["sign"] = std::string(1, eps);
                        P8.fail(wit);
                    }
        }

        auto others = sample_points(model, 4, plan.seed + 1000 + pi);
        for (std::size_t oi = 1; oi < others.size(); ++oi) {
            const Vec& y = others[oi];
            if (y == x) continue;
            for (std::size_t s = 0; s < plan.samples / 4 + 1; ++s) {
                ++P10.samples;
                Mat g;
                switch (s % 3) {
                    case 0: g = fam.sample_member(y, rng); break;
                    case 1: g = fam.sample_member(std::vector<Vec>{x, y}, rng); break;
                    default: {
                        const IVec& a = roots[pick(rng, roots.size())];
                        std::int64_t l = fam.threshold(px, a).value.get_num().get_si();
                        g = mul(fam.sample_member(y, rng), *lmat_constant(inst.x(a, sample_padic(rng, p, l - 1, l - 1))));
                    }
                }
                bool all = true;
                for (int k = 0; k <= 16 && all; ++k) {
                    Vec z = add(x, scale(pow_p(2, -k), sub(y, x)));
                    all = fam.contains(g, z);
                }
                if (all && !fam.contains(g, x)) {
                    auto w = where;
                    w["y"] = vec_to_json(y);
                    w["g"] = mat_json(g);
                    P10.fail(w);
                }
            }
        }
    }
    return {P1, P2, P3, P4, P5, P6, P7, P8, P9, P10};
}

ValuationReport precertify_oracle(const ParahoricFamily& fam, const std::vector<Vec>& points, std::size_t max_len) {
    auto rep = report("oracle-certification", fam, 0);
    const auto& inst = fam.instance();
    std::int64_t p = inst.prime();
    const std::size_t nodeCap = fam.n() == 2 ? 400'000 : 100'000;
    std::mt19937_64 rng(0);
    auto roots = inst.roots();
    std::size_t disagreements = 0, windowMembers = 0, windowPoints = 0, fullLength = max_len, nodes = 0;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Vec& x = points[pi];
        Shape px = Shape::point(x);
        // SL3 words use the scalars +-p^l only, which keeps length 4 within the node budget.
        std::vector<Mat> gens;
        for (const auto& g : fam.generators(x)) {
            bool rootElement = g.size() == 3 && std::all_of(g.begin(), g.end(), [](const Vec& r) {
                return std::count_if(r.begin(), r.end(), [](const Q& q) { return sgn(q) != 0; }) <= 2;
            });
            if (fam.n() == 3 && rootElement) continue;
            gens.push_back(g);
        }
        if (fam.n() == 3)
            for (const auto& a : roots) {
                Q base = pow_p(p, fam.threshold(px, a).value.get_num().get_si());
                for (long s : {1, -1}) gens.push_back(*lmat_constant(inst.x(a, base * Q(s))));
            }
        std::int64_t genHeight = 1;
        for (const auto& g : gens) genHeight = std::max(genHeight, entry_height(g));
        const std::int64_t heightCap = std::max<std::int64_t>(64, std::min<std::int64_t>(genHeight * genHeight, 500'000));

        std::vector<PMat> pgens;
        for (const auto& g : gens) pgens.push_back(*to_pmat(g, p));
        PMat one = *to_pmat(identity_mat(fam.n()), p);
        std::unordered_set<PMat, PMatHash> seen{one};
        std::vector<PMat> frontier{one};
        for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
            std::vector<PMat> next;
            bool capped = false;
            for (const auto& g : frontier) {
                for (const auto& s : pgens) {
                    auto h = pmat_mul(g, s, p, heightCap);
                    if (!h || seen.count(*h)) continue;
                    if (seen.size() >= nodeCap) {
                        capped = true;
                        break;
                    }
                    seen.insert(*h);
                    next.push_back(*h);
                }
                if (capped) break;
            }
            if (capped) {
                fullLength = std::min(fullLength, len - 1);
                break;
            }
            frontier = std::move(next);
        }
        nodes += seen.size();
        auto need = fam.thresholds(px);
        std::vector<Mat> pool;
        pool.reserve(seen.size());
        for (const auto& a : seen) {
            pool.push_back(from_pmat(a, p));
            ++rep.samples;
            if (!fam.contains(pool.back(), need)) {
                ++disagreements;
                rep.fail({{"point", vec_to_json(x)}, {"g", mat_json(pool.back())}, {"reason", "generator word rejected by the oracle"}});
            }
        }
        // Controls: words with one root factor inside or outside the threshold.
        for (std::size_t s = 0; s < 200; ++s) {
            const Mat& g1 = pool[pick(rng, pool.size())];
            const Mat& g2 = pool[pick(rng, pool.size())];
            const IVec& a = roots[pick(rng, roots.size())];
            std::int64_t l = fam.threshold(px, a).value.get_num().get_si();
            bool inside = s % 2 == 0;
            Q r = sample_padic(rng, p, inside ? l : l - 3, inside ? l + 2 : l - 1);
            Mat g = mul(mul(g1, *lmat_constant(inst.x(a, r))), g2);
            ++rep.samples;
            if (fam.contains(g, x) != inside) {
                ++disagreements;
                rep.fail({{"point", vec_to_json(x)}, {"g", mat_json(g)}, {"reason", "control misclassified"}});
            }
        }
        // Completeness on a window of small matrices, where short words reach every member.
        bool near = std::all_of(roots.begin(), roots.end(), [&](const IVec& a) {
            Q l = fam.threshold(px, a).value;
            return l >= -2 && l <= 2;
        });
        if (fam.n() == 2 && p == 2 && near) {
            ++windowPoints;
            std::vector<Q> S = {0, 1, -1, 2, -2, Q(1, 2), Q(-1, 2), 4, -4};
            for (const auto& a : S)
                for (const auto& b : S)
                    for (const auto& c : S)
                        for (const auto& d : S) {
                            if (a * d - b * c != 1) continue;
                            Mat g = {{a, b}, {c, d}};
                            bool in = fam.contains(g, x);
                            windowMembers += in;
                            ++rep.samples;
                            auto pg = to_pmat(g, p);
                            if (in != (pg && seen.count(*pg) > 0)) {
                                ++disagreements;
                                rep.fail({{"point", vec_to_json(x)},
                                          {"g", mat_json(g)},
                                          {"oracle", in},
                                          {"reason", "oracle and word search disagree on the window"}});
                            }
                        }
        }
    }
    rep.note = "p=" + std::to_string(p) + ", " + std::to_string(nodes) + " words, complete to length " +
               std::to_string(fullLength) + " (cap " + std::to_string(max_len) + "), window at " +
               std::to_string(windowPoints) + " points with " + std::to_string(windowMembers) +
               " members, disagreements " + std::to_string(disagreements);
    return rep;
}

GoodFixatorReport good_fixator_check(const ParahoricFamily& fam, const Shape& omega, const CheckPlan& plan) {
    if (omega.kind != ShapeKind::Point && omega.kind != ShapeKind::Segment && omega.kind != ShapeKind::FiniteSet)
        throw UnsupportedShape("good fixators are checked for points, segments and finite sets");
    const auto& inst = fam.instance();
    std::mt19937_64 rng(plan.seed);
    auto pts = omega.points;
    auto roots = inst.roots();
    std::int64_t p = inst.prime();
    GoodFixatorReport out{report("GF+", fam, plan.seed), report("GF-", fam, plan.seed), report("TF", fam, plan.seed)};
    auto e = weyl_identity(fam.model().matrix());
    auto stab = fam.stabilizer_in_N(pts);
    for (std::size_t s = 0; s < plan.samples; ++s) {
        Mat h = fam.sample_member(pts, rng);
        const IVec& a = roots[pick(rng, roots.size())];
        ExtQ l = fam.threshold(omega, a);
        Mat outside = h;
        if (l.is_finite()) {
            std::int64_t li = l.value.get_num().get_si();
            outside = mul(h, *lmat_constant(inst.x(a, sample_padic(rng, p, li - 2, li - 1))));
        }
        bool outsideIn = fam.contains(outside, omega);
        // Inclusion Q^dec in Q from random factors.
        Mat up = identity_mat(fam.n()), down = identity_mat(fam.n());
        for (const auto& b : roots) {
            ExtQ lb = fam.threshold(omega, b);
            if (!lb.is_finite()) continue;
            std::int64_t li = lb.value.get_num().get_si();
            Mat xb = *lmat_constant(inst.x(b, sample_padic(rng, p, li, li + 2)));
            if (is_nonneg(b)) up = mul(up, xb);
            else down = mul(down, xb);
        }
        Mat nz = stab.empty() ? fam.sample_Z0(rng) : mul(stab[pick(rng, stab.size())], fam.sample_Z0(rng));
        for (char eps : {'+', '-'}) {
            auto& rep = eps == '+' ? out.gfPlus : out.gfMinus;
            ++rep.samples;
            Mat built = eps == '+' ? mul(mul(up, down), nz) : mul(mul(down, up), nz);
            bool okIn = in_Qdec(fam, h, omega, e, eps);
            bool okOut = in_Qdec(fam, outside, omega, e, eps) == outsideIn;
            bool okBuilt = fam.contains(built, omega) && in_Qdec(fam, built, omega, e, eps);
            if (!okIn || !okOut || !okBuilt)
                rep.fail({{"index", s}, {"h", mat_json(h)}, {"in", okIn}, {"out", okOut}, {"built", okBuilt}});
        }
        // TF: g maps Omega into A iff it maps every vertex of Omega into A, and then g is in N Q(Omega).
        std::vector<Mat> cands = {h, mul(fam.sample_N(rng), h), fam.sample_member(pts[0], rng),
                                  fam.sample_member(pts.back(), rng), inst.sample_element(rng, 3)};
        for (const auto& g : cands) {
            ++out.tf.samples;
            bool all = std::all_of(pts.begin(), pts.end(), [&](const Vec& z) { return fam.in_NQ(g, Shape::point(z)); });
            if (all != fam.in_NQ(g, omega)) out.tf.fail({{"index", s}, {"g", mat_json(g)}, {"vertices_in_A", all}});
        }
    }
    return out;
}

ValuationReport apartment_fixator_check(const ParahoricFamily& fam) {
    auto rep = report("Q(A)=Z0", fam, 0);
    Shape whole = Shape::convex({});
    std::int64_t p = fam.instance().prime();
    auto is_unit_diag = [&](const Mat& g) {
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (i != j && sgn(g[i][j]) != 0) return false;
                if (i == j && vp(g[i][i], p) != ExtQ::finite(0)) return false;
            }
        return determinant(g) == 1;
    };
    std::vector<Q> S = {0, 1, -1, 2, -2, 3, -3, Q(1, 2), Q(-1, 2), Q(1, 3), Q(-1, 3), 4, Q(1, 4)};
    auto check = [&](const Mat& g) {
        ++rep.samples;
        if (fam.contains(g, whole) != is_unit_diag(g)) rep.fail({{"g", mat_json(g)}});
    };
    if (fam.n() == 2) {
        for (const auto& a : S)
            for (const auto& b : S)
                for (const auto& c : S)
                    for (const auto& d : S)
                        if (a * d - b * c == 1) check({{a, b}, {c, d}});
    } else {
        for (const auto& a : S)
            for (const auto& b : S) {
                if (sgn(a) == 0 || sgn(b) == 0) continue;
                check({{a, 0, 0}, {0, b, 0}, {0, 0, 1 / (a * b)}});
                check({{a, 1, 0}, {0, b, 0}, {0, 0, 1 / (a * b)}});
            }
        std::mt19937_64 rng(0);
        for (int s = 0; s < 500; ++s) check(fam.instance().sample_element(rng, 2));
    }
    return rep;
}

ValuationReport chamber_independence_check(const ParahoricFamily& fam, const Shape& omega, const CheckPlan& plan) {
    auto rep = report("Qdec-chamber-independence", fam, plan.seed);
    std::mt19937_64 rng(plan.seed);
    auto pts = omega.points;
    for (std::size_t s = 0; s < plan.samples; ++s) {
        Mat h = (s % 3 == 2) ? fam.instance().sample_element(rng, 3) : fam.sample_member(pts, rng);
        for (char eps : {'+', '-'}) {
            ++rep.samples;
            std::set<bool> verdicts;
            for (const auto& [w, L] : fam.weyl_lifts()) verdicts.insert(in_Qdec(fam, h, omega, w, eps));
            if (verdicts.size() != 1)
                rep.fail({{"index", s}, {"h", mat_json(h)}, {"sign", std::string(1, eps)}});
        }
    }
    return rep;
}

std::vector<ValuationReport> iwasawa_and_bbi_checks(const ParahoricFamily& fam, const CheckPlan& plan) {
    const auto& inst = fam.instance();
    auto iw = report("Iwasawa", fam, plan.seed), bb = report("BBI", fam, plan.seed);
    std::mt19937_64 rng(plan.seed);
    auto pts = sample_points(fam.model(), 16, plan.seed + 7);
    auto identity = identity_mat(fam.n());
    for (std::size_t s = 0; s < plan.samples; ++s) {
        Mat g = s == 0 ? identity : inst.sample_element(rng, 2 + pick(rng, 6));
        const Vec& x1 = pts[pick(rng, pts.size())];
        const Vec& x2 = pts[pick(rng, pts.size())];
        ++iw.samples;
        auto d = iwasawa_decompose(inst, g, x1);
        const Mat& u = d.factors[0];
        bool uOk = true;
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j) uOk = uOk && u[i][j] == (i == j ? 1 : 0);
        if (!(d.product() == g) || !uOk || !fam.contains(d.factors[2], x1))
            iw.fail({{"index", s}, {"g", mat_json(g)}, {"x", vec_to_json(x1)}});
        ++bb.samples;
        auto b = bbi_decompose(inst, g, x1, x2);
        if (!(b.product() == g) || !fam.contains(b.factors[0], x1) || !fam.contains(b.factors[2], x2))
            bb.fail({{"index", s}, {"g", mat_json(g)}, {"x1", vec_to_json(x1)}, {"x2", vec_to_json(x2)}});
    }
    return {iw, bb};
}

std::pair<Q, std::int64_t> tree_key(const ParahoricFamily& fam, const Mat& g, std::int64_t k) {
    Vec x = scale(Q(static_cast<long>(k)), fam.model().real.dual_vectors()[0]);
    auto c = canonical(fam, HovelPoint{g, x});
    Q kk = fam.model().real.eval_simple(0, c.x);
    if (!is_integer(kk)) throw std::logic_error("tree vertex left the vertex set");
    return {c.g[0][1], kk.get_num().get_si()};
}

std::vector<std::size_t> Tree::sphere_sizes() const {
    std::vector<std::size_t> out(depth + 1, 0);
    for (const auto& v : vertices) ++out[v.depth];
    return out;
}

std::vector<std::vector<std::size_t>> Tree::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

std::string Tree::to_dot() const {
    std::ostringstream os;
    os << "graph tree {\n";
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& v = vertices[i];
        os << "  v" << i << " [label=\"" << to_string(v.r) << "|" << v.k << "\"";
        if (v.onApartment) os << ", style=bold";
        os << "];\n";
    }
    for (const auto& [a, b] : edges) {
        os << "  v" << a << " -- v" << b;
        if (vertices[a].onApartment && vertices[b].onApartment) os << " [style=bold, color=blue]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json Tree::to_json() const {
    auto vs = nlohmann::json::array();
    for (const auto& v : vertices)
        vs.push_back({{"r", to_string(v.r)}, {"k", v.k}, {"depth", v.depth}, {"apartment", v.onApartment}});
    return {{"p", p}, {"depth", depth}, {"sphere_sizes", sphere_sizes()}, {"vertices", vs}, {"edges", edges}};
}

Tree build_tree(std::int64_t p, std::size_t depth) {
    if (p > 5 || depth > 6)
        throw BudgetExceeded("tree budget is p <= 5 and depth <= 6 (got p=" + std::to_string(p) +
                             ", depth=" + std::to_string(depth) + ")");
    ParahoricFamily fam(sl2_instance(p));
    Tree t;
    t.p = p;
    t.depth = depth;
    std::map<std::pair<Q, std::int64_t>, std::size_t> index;
    t.vertices.push_back(TreeVertex{Q(0), 0, 0, std::nullopt, true});
    index[{Q(0), 0}] = 0;
    for (std::size_t head = 0; head < t.vertices.size(); ++head) {
        TreeVertex v = t.vertices[head];
        if (v.depth == depth) continue;
        Mat g = {{Q(1), v.r}, {Q(0), Q(1)}};
        std::vector<std::pair<Q, std::int64_t>> nbrs{tree_key(fam, g, v.k - 1)};
        for (std::int64_t c = 0; c < p; ++c) {
            Mat h = mul(g, Mat{{Q(1), Q(0)}, {Q(static_cast<long>(c)) * pow_p(p, v.k), Q(1)}});
            nbrs.push_back(tree_key(fam, h, v.k + 1));
        }
        for (const auto& key : nbrs) {
            auto it = index.find(key);
            if (it != index.end()) {
                if (v.parent && it->second == *v.parent) continue;
                throw std::logic_error("cycle in the tree construction");
            }
            std::size_t id = t.vertices.size();
            index[key] = id;
            t.vertices.push_back(TreeVertex{key.first, key.second, v.depth + 1, head, sgn(key.first) == 0});
            t.edges.emplace_back(head, id);
        }
    }
    return t;
}

ValuationReport check_MAO(const ParahoricFamily& fam, std::size_t trials, std::uint64_t seed, std::size_t grid) {
    auto rep = report("MAO", fam, seed);
    const auto& model = fam.model();
    std::mt19937_64 rng(seed);
    std::size_t negatives = 0;
    for (std::size_t s = 0; s < trials; ++s) {
        auto pts = sample_points(model, 3, seed * 7919 + s);
        const Vec& a = pts[1];
        const Vec& b = pts[2];
        Mat g = fam.instance().sample_element(rng, 4);
        Mat u = fam.sample_member(a, rng);
        Mat v = fam.sample_member(std::vector<Vec>{a, b}, rng);
        Mat n = fam.sample_N(rng);
        Mat A1 = mul(g, u), A2 = mul(mul(A1, v), n);
        auto back = invert(model, fam.nu(n));
        bool ok = same_hovel_point(fam, {g, a}, {A2, apply(model, back, a)});
        for (std::size_t k = 0; k <= grid && ok; ++k) {
            Vec z = add(a, scale(Q(static_cast<long>(k), static_cast<long>(grid)), sub(b, a)));
            ok = same_hovel_point(fam, {A1, z}, {A2, apply(model, back, z)});
        }
        ++rep.samples;
        if (!ok) rep.fail({{"index", s}, {"a", vec_to_json(a)}, {"b", vec_to_json(b)}, {"g", mat_json(g)}});
        if (a != b && same_hovel_point(fam, {A1, a}, {A1, b})) {
            ++negatives;
            rep.fail({{"index", s}, {"reason", "distinct points of one apartment identified"}});
        }
    }
    if (negatives == 0) rep.note = "grid " + std::to_string(grid + 1) + " points per segment";
    return rep;
}

bool ResidueSystem::closed(const ApartmentModel& m) const {
    std::set<IVec> in(roots.begin(), roots.end());
    std::set<IVec> slice;
    for (const auto& r : m.realSlice.roots) slice.insert(r.coords);
    for (const auto& a : roots) {
        if (!in.count(ineg(a))) return false;
        for (const auto& b : roots) {
            IVec c = root_reflection(m.matrix(), a, b);
            if (slice.count(c) && !in.count(c)) return false;
        }
    }
    return true;
}

nlohmann::json ResidueSystem::to_json() const {
    return {{"x", vec_to_json(x)}, {"roots", roots}, {"special", special}, {"count", roots.size()}};
}

ResidueSystem residue_roots(const ApartmentModel& m, const Vec& x) {
    ResidueSystem rs;
    rs.x = x;
    for (const auto& r : m.realSlice.roots)
        if (m.lambda_of(r.coords).contains(-m.real.eval_root(r.coords, x))) rs.roots.push_back(r.coords);
    rs.special = rs.roots.size() == m.realSlice.roots.size();
    return rs;
}

}  // namespace hovelkit
