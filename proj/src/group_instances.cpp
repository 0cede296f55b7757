#include "hovelkit/group_instances.hpp"

#include "hovelkit/errors.hpp"
#include "hovelkit/vectorial.hpp"

#include <functional>

namespace hovelkit {

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

std::int64_t count_factor(mpz_class v, std::int64_t p) {
    std::int64_t k = 0;
    mpz_class pp(static_cast<long>(p));
    while (v % pp == 0) {
        v /= pp;
        ++k;
    }
    return k;
}

void require_prime(std::int64_t p) {
    if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
}

}  // namespace

ExtQ vp(const Q& q, std::int64_t p) {
    if (sgn(q) == 0) return ExtQ::pos_inf();
    return ExtQ::finite(Q(static_cast<long>(vp_finite(q, p))));
}

std::int64_t vp_finite(const Q& q, std::int64_t p) {
    if (sgn(q) == 0) throw std::domain_error("v_p(0) is infinite");
    return count_factor(abs(q.get_num()), p) - count_factor(q.get_den(), p);
}

Q sample_padic(std::mt19937_64& rng, std::int64_t p, std::int64_t vmin, std::int64_t vmax) {
    std::uniform_int_distribution<std::int64_t> kd(vmin, vmax), ad(1, 9), bd(1, 5), sd(0, 1);
    std::int64_t a = 0, b = 0;
    do a = ad(rng);
    while (a % p == 0);
    do b = bd(rng);
    while (b % p == 0);
    std::int64_t k = kd(rng);
    Q r(static_cast<long>(a), static_cast<long>(b));
    r.canonicalize();
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k < 0 ? -k : k));
    if (k >= 0)
        r *= Q(pk);
    else
        r /= Q(pk);
    return sd(rng) ? r : Q(-r);
}

SLnInstance::SLnInstance(std::size_t n, std::int64_t p) : n_(n), p_(p) {
    require_prime(p);
    if (n != 2 && n != 3) throw DimensionMismatch("SL_n instances exist for n = 2, 3");
    model_ = std::make_shared<const ApartmentModel>(parse_model(n == 2 ? "a1,Z" : "a2,Z", 6));
}

std::pair<std::size_t, std::size_t> SLnInstance::position(const IVec& root) const {
    if (root.size() != n_ - 1) throw DimensionMismatch("root has the wrong rank");
    bool negative = is_nonpos(root);
    std::optional<std::size_t> first, last;
    for (std::size_t k = 0; k < root.size(); ++k) {
        std::int64_t c = negative ? -root[k] : root[k];
        if (c != 0 && c != 1) throw std::invalid_argument("not a root of type A");
        if (c == 1) {
            if (last && *last + 1 != k) throw std::invalid_argument("not a root of type A");
            if (!first) first = k;
            last = k;
        }
    }
    if (!first) throw std::invalid_argument("zero is not a root");
    std::size_t i = *first, j = *last + 1;
    return negative ? std::make_pair(j, i) : std::make_pair(i, j);
}

IVec SLnInstance::root_at(std::size_t i, std::size_t j) const {
    if (i == j || i >= n_ || j >= n_) throw IndexOutOfRange("no root at a diagonal or outside position");
    IVec r(n_ - 1, 0);
    std::size_t lo = std::min(i, j), hi = std::max(i, j);
    for (std::size_t k = lo; k < hi; ++k) r[k] = i < j ? 1 : -1;
    return r;
}

LMat SLnInstance::x(const IVec& root, const Q& r) const {
    auto [i, j] = position(root);
    LMat g = identity();
    g[i][j] = LaurentPoly(r);
    return g;
}

std::optional<RootElement> SLnInstance::as_root_element(const LMat& g) const {
    auto c = lmat_constant(g);
    if (!c || c->size() != n_) return std::nullopt;
    std::optional<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            const Q& v = (*c)[i][j];
            if (i == j) {
                if (v != 1) return std::nullopt;
            } else if (sgn(v) != 0) {
                if (pos) return std::nullopt;
                pos = {i, j};
            }
        }
    if (!pos) return std::nullopt;
    return RootElement{root_at(pos->first, pos->second), (*c)[pos->first][pos->second]};
}

bool SLnInstance::in_Z(const LMat& g) const {
    auto c = lmat_constant(g);
    if (!c || c->size() != n_) return false;
    Q det = 1;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (i != j && sgn((*c)[i][j]) != 0) return false;
            if (i == j) det *= (*c)[i][i];
        }
    return det == 1;
}

LMat SLnInstance::sample_Z(std::mt19937_64& rng) const {
    LMat g = identity();
    Q prod = 1;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
        Q c = sample_padic(rng, p_, -2, 2);
        g[i][i] = LaurentPoly(c);
        prod *= c;
    }
    g[n_ - 1][n_ - 1] = LaurentPoly(Q(1 / prod));
    return g;
}

Q SLnInstance::sample_scalar(std::mt19937_64& rng, std::int64_t vmin, std::int64_t vmax) const {
    return sample_padic(rng, p_, vmin, vmax);
}

std::optional<bool> SLnInstance::in_ZUplus(const LMat& g) const {
    auto c = lmat_constant(g);
    if (!c) return false;
    return bruhat_cell(*this, *c, '+') == weyl_identity(model().matrix());
}

Vec SLnInstance::weights(const Vec& x) const {
    Vec s(n_, Q(0));
    for (std::size_t i = n_ - 1; i-- > 0;) s[i] = s[i + 1] + model().real.eval_simple(i, x);
    Q total = 0;
    for (const auto& v : s) total += v;
    Q c = -total / Q(static_cast<long>(n_));
    for (auto& v : s) v += c;
    return s;
}

Mat SLnInstance::sample_element(std::mt19937_64& rng, std::size_t factors, std::int64_t vmin, std::int64_t vmax) const {
    auto rs = roots();
    LMat g = sample_Z(rng);
    std::uniform_int_distribution<std::size_t> rd(0, rs.size() - 1);
    for (std::size_t k = 0; k < factors; ++k) g = mul(g, x(rs[rd(rng)], sample_padic(rng, p_, vmin, vmax)));
    return *lmat_constant(g);
}

LoopSL2Instance::LoopSL2Instance(std::int64_t p, std::int64_t cap) : p_(p) {
    require_prime(p);
    model_ = std::make_shared<const ApartmentModel>(parse_model("aff_a1,Z", cap));
}

LMat LoopSL2Instance::x(const IVec& root, const Q& r) const {
    if (root.size() != 2) throw DimensionMismatch("affine A1 roots have two coordinates");
    LMat g = identity();
    if (root[1] == root[0] + 1)
        g[0][1] = LaurentPoly::monomial(r, root[0]);
    else if (root[1] == root[0] - 1)
        g[1][0] = LaurentPoly::monomial(r, root[0]);
    else
        throw std::invalid_argument("not a real root of affine A1");
    return g;
}

std::optional<RootElement> LoopSL2Instance::as_root_element(const LMat& g) const {
    if (g.size() != 2 || !(g[0][0] == LaurentPoly(Q(1))) || !(g[1][1] == LaurentPoly(Q(1)))) return std::nullopt;
    bool up = !g[0][1].is_zero(), down = !g[1][0].is_zero();
    if (up == down) return std::nullopt;
    auto mono = (up ? g[0][1] : g[1][0]).as_monomial();
    if (!mono) return std::nullopt;
    auto [c, e] = *mono;
    return RootElement{up ? IVec{e, e + 1} : IVec{e, e - 1}, c};
}

bool LoopSL2Instance::in_Z(const LMat& g) const {
    auto c = lmat_constant(g);
    if (!c || c->size() != 2) return false;
    return sgn((*c)[0][1]) == 0 && sgn((*c)[1][0]) == 0 && (*c)[0][0] * (*c)[1][1] == 1;
}

LMat LoopSL2Instance::sample_Z(std::mt19937_64& rng) const {
    Q c = sample_padic(rng, p_, -2, 2);
    LMat g = identity();
    g[0][0] = LaurentPoly(c);
    g[1][1] = LaurentPoly(Q(1 / c));
    return g;
}

Q LoopSL2Instance::sample_scalar(std::mt19937_64& rng, std::int64_t vmin, std::int64_t vmax) const {
    return sample_padic(rng, p_, vmin, vmax);
}

LMat LoopSL2Instance::loop_torus(std::int64_t k) const {
    LMat g = identity();
    g[0][0] = LaurentPoly::monomial(Q(1), k);
    g[1][1] = LaurentPoly::monomial(Q(1), -k);
    return g;
}

std::shared_ptr<const SLnInstance> sl2_instance(std::int64_t p) { return std::make_shared<const SLnInstance>(2, p); }
std::shared_ptr<const SLnInstance> sl3_instance(std::int64_t p) { return std::make_shared<const SLnInstance>(3, p); }
std::shared_ptr<const LoopSL2Instance> loop_sl2_instance(std::int64_t p, std::int64_t cap) {
    return std::make_shared<const LoopSL2Instance>(p, cap);
}

std::shared_ptr<const RootDatumInstance> make_instance(const std::string& name, std::int64_t p, std::int64_t cap) {
    if (name == "sl2") return sl2_instance(p);
    if (name == "sl3") return sl3_instance(p);
    if (name == "loop_sl2") return loop_sl2_instance(p, cap);
    throw ParseError("unknown instance '" + name + "' (sl2, sl3, loop_sl2)");
}

Mat Decomposition::product() const { return mul(mul(factors[0], factors[1]), factors[2]); }

nlohmann::json Decomposition::to_json() const {
    auto fs = nlohmann::json::array();
    for (const auto& f : factors) fs.push_back(lmat_to_json(lmat_from(f)));
    return {{"kind", kind},
            {"factors", fs},
            {"cell", weyl_to_json(cell)},
            {"translation", vec_to_json(nu.translation)}};
}

namespace {

struct Reducer {
    Mat A, L, R;  // A = L g R
    std::vector<bool> usedRow, usedCol;

    explicit Reducer(const Mat& g)
        : A(g), L(identity_mat(g.size())), R(identity_mat(g.size())), usedRow(g.size()), usedCol(g.size()) {}

    void row_add(std::size_t r, std::size_t p, const Q& c) {  // row r += c row p
        for (std::size_t k = 0; k < A.size(); ++k) {
            A[r][k] += c * A[p][k];
            L[r][k] += c * L[p][k];
        }
    }
    void col_add(std::size_t k, std::size_t j, const Q& c) {  // col k += c col j
        for (std::size_t i = 0; i < A.size(); ++i) {
            A[i][k] += c * A[i][j];
            R[i][k] += c * R[i][j];
        }
    }
    void eliminate(std::size_t r, std::size_t j) {
        for (std::size_t k = 0; k < A.size(); ++k)
            if (!usedCol[k] && k != j && sgn(A[r][k]) != 0) col_add(k, j, -A[r][k] / A[r][j]);
        for (std::size_t s = 0; s < A.size(); ++s)
            if (!usedRow[s] && s != r && sgn(A[s][j]) != 0) row_add(s, r, -A[s][j] / A[r][j]);
        usedRow[r] = usedCol[j] = true;
    }
};

using Chooser = std::function<std::pair<std::size_t, std::size_t>(const Reducer&, std::size_t step)>;

Decomposition run(const SLnInstance& inst, const Mat& g, const std::string& kind, const Chooser& choose) {
    if (g.size() != inst.matrix_size()) throw DimensionMismatch("matrix size does not match the instance");
    if (determinant(g) != 1) throw std::invalid_argument("matrix is not in SL_n");
    Reducer red(g);
    for (std::size_t step = 0; step < g.size(); ++step) {
        auto [r, j] = choose(red, step);
        red.eliminate(r, j);
    }
    Decomposition d;
    d.kind = kind;
    d.factors = {*inverse(red.L), red.A, *inverse(red.R)};
    d.nu = nu_of(inst, lmat_from(red.A));
    d.cell = d.nu.linear;
    return d;
}

Mat reversal(std::size_t n) {
    Mat j = zero_mat(n, n);
    for (std::size_t i = 0; i < n; ++i) j[i][n - 1 - i] = 1;
    return j;
}

/// Lowest unused row with a nonzero entry in column j.
std::size_t lowest_pivot(const Reducer& red, std::size_t j) {
    for (std::size_t r = red.A.size(); r-- > 0;)
        if (!red.usedRow[r] && sgn(red.A[r][j]) != 0) return r;
    throw std::logic_error("singular matrix in reduction");
}

ExtQ shifted(const Q& v, std::int64_t p, const Q& shift) {
    ExtQ e = vp(v, p);
    return e.is_finite() ? ExtQ::finite(e.value + shift) : e;
}

}  // namespace

Decomposition bruhat_decompose(const SLnInstance& inst, const Mat& g, char sign) {
    if (sign == '-') {
        Mat J = reversal(g.size());
        Mat gj = mul(mul(J, g), J);
        if (determinant(gj) != 1) throw std::invalid_argument("matrix is not in SL_n");
        Decomposition d = bruhat_decompose(inst, gj, '+');
        for (auto& f : d.factors) f = mul(mul(J, f), J);
        d.kind = "bruhat-";
        d.nu = nu_of(inst, lmat_from(d.factors[1]));
        d.cell = d.nu.linear;
        return d;
    }
    return run(inst, g, "bruhat+", [](const Reducer& red, std::size_t step) {
        return std::make_pair(lowest_pivot(red, step), step);
    });
}

Decomposition birkhoff_decompose(const SLnInstance& inst, const Mat& g) {
    return run(inst, g, "birkhoff", [](const Reducer& red, std::size_t step) {
        std::size_t j = red.A.size() - 1 - step;
        return std::make_pair(lowest_pivot(red, j), j);
    });
}

Decomposition iwasawa_decompose(const SLnInstance& inst, const Mat& g, const Vec& x) {
    Vec y = inst.weights(x);
    std::int64_t p = inst.prime();
    return run(inst, g, "iwasawa", [y, p](const Reducer& red, std::size_t step) {
        std::size_t r = red.A.size() - 1 - step;
        std::optional<std::size_t> best;
        ExtQ bestVal = ExtQ::pos_inf();
        for (std::size_t j = 0; j < red.A.size(); ++j) {
            if (red.usedCol[j] || sgn(red.A[r][j]) == 0) continue;
            ExtQ v = shifted(red.A[r][j], p, -y[j]);
            if (!best || v < bestVal) {
                best = j;
                bestVal = v;
            }
        }
        if (!best) throw std::logic_error("singular matrix in reduction");
        return std::make_pair(r, *best);
    });
}

Decomposition iwasawa_decompose(const SLnInstance& inst, const Mat& g) {
    return iwasawa_decompose(inst, g, zero_vec(inst.model().dim()));
}

Decomposition bbi_decompose(const SLnInstance& inst, const Mat& g, const Vec& x1, const Vec& x2) {
    Vec y1 = inst.weights(x1), y2 = inst.weights(x2);
    std::int64_t p = inst.prime();
    return run(inst, g, "bbi", [y1, y2, p](const Reducer& red, std::size_t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        ExtQ bestVal = ExtQ::pos_inf();
        for (std::size_t r = 0; r < red.A.size(); ++r)
            for (std::size_t j = 0; j < red.A.size(); ++j) {
                if (red.usedRow[r] || red.usedCol[j] || sgn(red.A[r][j]) == 0) continue;
                ExtQ v = shifted(red.A[r][j], p, y1[r] - y2[j]);
                if (!best || v < bestVal) {
                    best = {r, j};
                    bestVal = v;
                }
            }
        if (!best) throw std::logic_error("singular matrix in reduction");
        return *best;
    });
}

WeylElement bruhat_cell(const SLnInstance& inst, const Mat& g, char sign) { return bruhat_decompose(inst, g, sign).cell; }

WeylElement birkhoff_cell(const SLnInstance& inst, const Mat& g) { return birkhoff_decompose(inst, g).cell; }

std::optional<std::array<Mat, 3>> udl_decompose(const Mat& g) {
    const std::size_t n = g.size();
    Mat J = reversal(n);
    Mat a = mul(mul(J, g), J);
    // Doolittle LDU of a without pivoting.
    Mat Lw = identity_mat(n), U = identity_mat(n), D = zero_mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        Q dk = a[k][k];
        for (std::size_t s = 0; s < k; ++s) dk -= Lw[k][s] * D[s][s] * U[s][k];
        if (sgn(dk) == 0) return std::nullopt;
        D[k][k] = dk;
        for (std::size_t j = k + 1; j < n; ++j) {
            Q u = a[k][j];
            for (std::size_t s = 0; s < k; ++s) u -= Lw[k][s] * D[s][s] * U[s][j];
            U[k][j] = u / dk;
            Q l = a[j][k];
            for (std::size_t s = 0; s < k; ++s) l -= Lw[j][s] * D[s][s] * U[s][k];
            Lw[j][k] = l / dk;
        }
    }
    return std::array<Mat, 3>{mul(mul(J, Lw), J), mul(mul(J, D), J), mul(mul(J, U), J)};
}

bool in_fixator(const SLnInstance& inst, const Mat& g, const Vec& x) {
    if (g.size() != inst.matrix_size() || determinant(g) != 1) return false;
    Vec y = inst.weights(x);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            ExtQ v = vp(g[i][j], inst.prime());
            if (v < ExtQ::finite(y[j] - y[i])) return false;
        }
    return true;
}

}  // namespace hovelkit
