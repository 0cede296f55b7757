#include "hovelkit/vectorial.hpp"

#include "hovelkit/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace hovelkit {

namespace {

Mat coroot_qmat(const IMat& c) { return to_qmat(c); }

bool forms_integral(const Mat& forms) {
    for (const auto& r : forms)
        for (const auto& x : r)
            if (x.get_den() != 1) return false;
    return true;
}

// gcd of the maximal minors of an integral |I| x n matrix; zero when rank < n.
mpz_class maximal_minor_gcd(const Mat& forms, std::size_t n) {
    const std::size_t k = forms.size();
    if (k < n) return 0;
    mpz_class g = 0;
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        Mat sub;
        for (std::size_t i = 0; i < k; ++i)
            if (pick[i]) sub.push_back(forms[i]);
        Q d = determinant(sub);
        mpz_class dn = d.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), dn.get_mpz_t());
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return g;
}

std::vector<std::size_t> normalize_J(std::vector<std::size_t> J, std::size_t n) {
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    for (auto j : J)
        if (j >= n) throw IndexOutOfRange("facet type index " + std::to_string(j));
    return J;
}

bool support_within(const IVec& q, const std::vector<std::size_t>& J) {
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0 && !std::binary_search(J.begin(), J.end(), i)) return false;
    return true;
}

// Reduces x by right descents s_j, j in J, until x is minimal in x W(J).
IMat reduce_right_coset(const KacMoodyMatrix& m, IMat action, const std::vector<std::size_t>& J) {
    for (bool changed = true; changed;) {
        changed = false;
        for (auto j : J) {
            bool negative = false;
            for (std::size_t r = 0; r < m.size; ++r)
                if (action[r][j] < 0) negative = true;
            if (negative) {
                action = imat_mul(action, reflection_matrix(m, j));
                changed = true;
            }
        }
    }
    return action;
}

}  // namespace

RootGeneratingSystem make_rgs(const KacMoodyMatrix& m, const Mat& forms, const IMat& coroots) {
    validate_gcm(m);
    if (forms.size() != m.size || coroots.size() != m.size) throw DimensionMismatch("need one form and one coroot per index");
    const std::size_t n = forms.empty() ? 0 : forms[0].size();
    for (std::size_t i = 0; i < m.size; ++i) {
        if (forms[i].size() != n || coroots[i].size() != n) throw DimensionMismatch("form/coroot length differs from rank of Y");
    }
    Mat cq = coroot_qmat(coroots);
    for (std::size_t i = 0; i < m.size; ++i)
        for (std::size_t j = 0; j < m.size; ++j)
            if (dot(forms[j], cq[i]) != m(i, j))
                throw std::invalid_argument("alpha_" + std::to_string(j) + "(alpha_" + std::to_string(i) + "^vee) differs from a[" +
                                            std::to_string(i) + "][" + std::to_string(j) + "]");
    RootGeneratingSystem s;
    s.matrix = m;
    s.rankY = n;
    s.simpleRootForms = forms;
    s.simpleCoroots = coroots;
    s.free = rank(forms) == m.size;
    s.adjoint = forms_integral(forms) && maximal_minor_gcd(forms, n) == 1;
    return s;
}

RootGeneratingSystem minimal_adjoint_rgs(const KacMoodyMatrix& m) {
    Mat forms = to_qmat(identity_imat(m.size));
    return make_rgs(m, forms, m.entries);
}

RootGeneratingSystem simply_connected_rgs(const KacMoodyMatrix& m) {
    Mat forms = zero_mat(m.size, m.size);
    for (std::size_t j = 0; j < m.size; ++j)
        for (std::size_t i = 0; i < m.size; ++i) forms[j][i] = static_cast<long>(m(i, j));
    return make_rgs(m, forms, identity_imat(m.size));
}

std::string to_string(RealizationKind k) {
    switch (k) {
        case RealizationKind::Q: return "q";
        case RealizationKind::X: return "x";
        case RealizationKind::XL: return "xl";
        case RealizationKind::Quotient: return "quotient";
    }
    return "?";
}

void Realization::check_dim(const Vec& v) const {
    if (v.size() != dim) throw DimensionMismatch("point of dimension " + std::to_string(v.size()) + " in a realization of dimension " + std::to_string(dim));
}

Q Realization::eval_simple(std::size_t i, const Vec& v) const {
    check_dim(v);
    return dot(rootForms.at(i), v);
}

Vec Realization::form_of(const IVec& root) const {
    if (root.size() != rank()) throw DimensionMismatch("root length");
    Vec f = zero_vec(dim);
    for (std::size_t i = 0; i < root.size(); ++i)
        if (root[i] != 0) f = add(f, scale(Q(static_cast<long>(root[i])), rootForms[i]));
    return f;
}

Q Realization::eval_root(const IVec& root, const Vec& v) const {
    check_dim(v);
    Q s = 0;
    for (std::size_t i = 0; i < root.size(); ++i)
        if (root[i] != 0) s += Q(static_cast<long>(root[i])) * dot(rootForms[i], v);
    return s;
}

Vec Realization::coroot_vector(const IVec& real_root) const {
    auto d = real_root_descent(matrix(), real_root);
    Vec c = apply_word(d.word, corootVectors[d.simple]);
    return d.negative ? neg(c) : c;
}

Vec Realization::reflect_simple(std::size_t i, const Vec& v) const {
    Q a = eval_simple(i, v);
    if (sgn(a) == 0) return v;
    return sub(v, scale(a, corootVectors[i]));
}

Vec Realization::apply_word(const std::vector<std::size_t>& word, const Vec& v) const {
    Vec r = v;
    for (auto it = word.rbegin(); it != word.rend(); ++it) r = reflect_simple(*it, r);
    return r;
}

Vec Realization::apply(const WeylElement& w, const Vec& v) const { return apply_word(w.word, v); }

Vec Realization::apply_inverse(const WeylElement& w, const Vec& v) const {
    Vec r = v;
    for (auto i : w.word) r = reflect_simple(i, r);
    return r;
}

Mat Realization::dual_vectors() const {
    Mat out;
    for (std::size_t i = 0; i < rank(); ++i) {
        Vec e = zero_vec(rank());
        e[i] = 1;
        auto s = solve(rootForms, e, dim);
        if (!s) throw NotFreeRGS("root forms are dependent; no dual vectors");
        out.push_back(*s);
    }
    return out;
}

Realization build_realization(const RootGeneratingSystem& rgs, RealizationKind kind) {
    Realization r;
    r.rgs = rgs;
    r.kind = kind;
    const std::size_t I = rgs.matrix.size;
    switch (kind) {
        case RealizationKind::Q:
            r.dim = I;
            r.rootForms = to_qmat(identity_imat(I));
            r.corootVectors = to_qmat(rgs.matrix.entries);
            break;
        case RealizationKind::X:
            if (!rgs.free) throw NotFreeRGS("kind x needs a free root generating system");
            r.dim = rgs.rankY;
            r.rootForms = rgs.simpleRootForms;
            r.corootVectors = to_qmat(rgs.simpleCoroots);
            break;
        case RealizationKind::XL: {
            r.dim = rgs.rankY + I;
            Mat cq = to_qmat(rgs.simpleCoroots);
            for (std::size_t i = 0; i < I; ++i) {
                Vec f = rgs.simpleRootForms[i], c = cq[i];
                for (std::size_t k = 0; k < I; ++k) {
                    f.emplace_back(k == i ? 1 : 0);
                    c.emplace_back(0);
                }
                r.rootForms.push_back(f);
                r.corootVectors.push_back(c);
            }
            break;
        }
        case RealizationKind::Quotient:
            throw std::invalid_argument("use quotient_realization for quotients");
    }
    r.V0basis = kernel(r.rootForms, r.dim);
    return r;
}

Realization quotient_realization(const Realization& base, const Mat& V00) {
    for (const auto& u : V00) {
        base.check_dim(u);
        for (std::size_t i = 0; i < base.rank(); ++i)
            if (sgn(base.eval_simple(i, u)) != 0) throw std::invalid_argument("quotient subspace must lie in V0");
    }
    Realization r;
    r.rgs = base.rgs;
    r.kind = RealizationKind::Quotient;
    Mat P = V00.empty() ? identity_mat(base.dim) : kernel(V00, base.dim);
    r.dim = P.size();
    r.quotientMap = P;
    Mat PT = transpose(P);
    for (std::size_t i = 0; i < base.rank(); ++i) {
        auto g = solve(PT, base.rootForms[i], r.dim);
        if (!g) throw InconsistentSystem("root form does not factor through the quotient");
        r.rootForms.push_back(*g);
        r.corootVectors.push_back(mul(P, base.corootVectors[i]));
    }
    r.V0basis = kernel(r.rootForms, r.dim);
    return r;
}

Realization essentialize(const Realization& r) { return quotient_realization(r, r.V0basis); }

VectorialFacet canonical_facet(const KacMoodyMatrix& m, char sign, const std::vector<std::size_t>& word,
                               std::vector<std::size_t> J) {
    if (sign != '+' && sign != '-') throw std::invalid_argument("facet sign must be + or -");
    J = normalize_J(std::move(J), m.size);
    IMat a = reduce_right_coset(m, action_of_word(m, word), J);
    // Strip right descents to recover a word for the reduced action.
    std::vector<std::size_t> w, rev;
    IMat x = a;
    for (;;) {
        std::size_t found = m.size;
        for (std::size_t j = 0; j < m.size && found == m.size; ++j) {
            bool negative = false;
            for (std::size_t r = 0; r < m.size; ++r)
                if (x[r][j] < 0) negative = true;
            if (negative) found = j;
        }
        if (found == m.size) break;
        rev.push_back(found);
        x = imat_mul(x, reflection_matrix(m, found));
    }
    // a = s_rev[k-1] ... s_rev[0]
    w.assign(rev.rbegin(), rev.rend());
    VectorialFacet f;
    f.sign = sign;
    f.wrep = canonical_element(m, w);
    f.J = J;
    f.spherical = is_spherical(m, J);
    return f;
}

VectorialFacet trivial_facet(const KacMoodyMatrix& m, char sign) {
    std::vector<std::size_t> all(m.size);
    std::iota(all.begin(), all.end(), 0);
    return canonical_facet(m, sign, {}, all);
}

VectorialFacet fundamental_chamber(const KacMoodyMatrix& m, char sign) { return canonical_facet(m, sign, {}, {}); }

bool is_chamber(const VectorialFacet& f) { return f.J.empty(); }
bool is_trivial(const KacMoodyMatrix& m, const VectorialFacet& f) { return f.J.size() == m.size; }

bool fundamental_facet_membership(const Realization& r, char sign, const std::vector<std::size_t>& J, const Vec& v) {
    r.check_dim(v);
    auto Js = normalize_J(J, r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Q a = r.eval_simple(i, v);
        if (sign == '-') a = -a;
        bool inJ = std::binary_search(Js.begin(), Js.end(), i);
        if (inJ ? sgn(a) != 0 : sgn(a) <= 0) return false;
    }
    return true;
}

bool facet_membership(const Realization& r, const VectorialFacet& f, const Vec& v) {
    return fundamental_facet_membership(r, f.sign, f.J, r.apply_inverse(f.wrep, v));
}

std::string to_string(TitsVerdict::Kind k) {
    switch (k) {
        case TitsVerdict::Kind::InPositive: return "in-positive";
        case TitsVerdict::Kind::InNegative: return "in-negative";
        case TitsVerdict::Kind::Outside: return "outside";
        case TitsVerdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

IVec null_root(const KacMoodyMatrix& block) {
    auto ker = kernel(to_qmat(block.entries), block.size);
    if (ker.size() != 1) throw std::invalid_argument("matrix is not of affine type (corank " + std::to_string(ker.size()) + ")");
    Vec d = ker[0];
    mpz_class l = 1;
    for (auto& x : d) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    mpz_class g = 0;
    IVec out;
    std::vector<mpz_class> ints;
    for (auto& x : d) {
        mpz_class v = x.get_num() * (l / x.get_den());
        ints.push_back(v);
        mpz_class av = abs(v);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), av.get_mpz_t());
    }
    bool negative = ints[0] < 0;
    for (auto& v : ints) {
        mpz_class q = v / g;
        if (negative) q = -q;
        out.push_back(q.get_si());
    }
    return out;
}

namespace {

enum class ConeTest { Yes, No, Maybe };

// Exact pre-test of v in T+ using the block decomposition.
ConeTest tits_pretest(const Realization& r, const Vec& v, const Classification& cls) {
    bool maybe = false;
    for (const auto& b : cls.blocks) {
        if (b.type == BlockType::Finite) continue;
        if (b.type == BlockType::Indefinite) {
            maybe = true;
            continue;
        }
        IVec delta = null_root(submatrix(r.matrix(), b.indices));
        Q d = 0;
        bool on_v0 = true;
        for (std::size_t k = 0; k < b.indices.size(); ++k) {
            Q a = r.eval_simple(b.indices[k], v);
            d += Q(static_cast<long>(delta[k])) * a;
            if (sgn(a) != 0) on_v0 = false;
        }
        if (sgn(d) < 0) return ConeTest::No;
        if (sgn(d) == 0 && !on_v0) return ConeTest::No;
    }
    return maybe ? ConeTest::Maybe : ConeTest::Yes;
}

struct Descent {
    bool done = false;
    std::vector<std::size_t> word;
    std::vector<std::size_t> J;
    std::size_t steps = 0;
};

Descent descend(const Realization& r, Vec v, std::size_t step_cap) {
    Descent d;
    for (;;) {
        std::size_t pick = r.rank();
        for (std::size_t i = 0; i < r.rank(); ++i)
            if (sgn(r.eval_simple(i, v)) < 0) {
                pick = i;
                break;
            }
        if (pick == r.rank()) break;
        if (d.steps >= step_cap) return d;
        v = r.reflect_simple(pick, v);
        d.word.push_back(pick);
        ++d.steps;
    }
    for (std::size_t i = 0; i < r.rank(); ++i)
        if (sgn(r.eval_simple(i, v)) == 0) d.J.push_back(i);
    d.done = true;
    return d;
}

}  // namespace

TitsVerdict locate_in_tits_cone(const Realization& r, const Vec& v, std::size_t step_cap) {
    r.check_dim(v);
    if (step_cap < 1) throw std::invalid_argument("step cap must be positive");
    auto cls = validate_and_classify(r.matrix());
    TitsVerdict out;
    bool unknown = false;
    for (int pass = 0; pass < 2; ++pass) {
        Vec p = pass == 0 ? v : neg(v);
        auto pre = tits_pretest(r, p, cls);
        if (pre == ConeTest::No) continue;
        auto d = descend(r, p, step_cap);
        out.steps += d.steps;
        if (!d.done) {
            unknown = true;
            continue;
        }
        out.kind = pass == 0 ? TitsVerdict::Kind::InPositive : TitsVerdict::Kind::InNegative;
        out.facet = canonical_facet(r.matrix(), pass == 0 ? '+' : '-', d.word, d.J);
        return out;
    }
    out.kind = unknown ? TitsVerdict::Kind::Unknown : TitsVerdict::Kind::Outside;
    return out;
}

std::optional<bool> in_positive_tits_cone(const Realization& r, const Vec& v, std::size_t step_cap) {
    r.check_dim(v);
    auto cls = validate_and_classify(r.matrix());
    auto pre = tits_pretest(r, v, cls);
    if (pre == ConeTest::No) return false;
    auto d = descend(r, v, step_cap);
    if (!d.done) return std::nullopt;
    return true;
}

FacetGenerators facet_generators(const Realization& r, const VectorialFacet& f) {
    FacetGenerators g;
    if (f.J.size() < r.rank()) {
        Mat dual = r.dual_vectors();
        for (std::size_t i = 0; i < r.rank(); ++i)
            if (!std::binary_search(f.J.begin(), f.J.end(), i)) {
                Vec v = r.apply(f.wrep, dual[i]);
                g.rays.push_back(f.sign == '-' ? neg(v) : v);
            }
    }
    g.lines = r.V0basis;
    return g;
}

int form_sign_on_facet(const Realization& r, const Vec& form, const VectorialFacet& f) {
    auto g = facet_generators(r, f);
    for (const auto& l : g.lines)
        if (sgn(dot(form, l)) != 0) return 2;
    bool pos = false, negative = false;
    for (const auto& v : g.rays) {
        int s = sgn(dot(form, v));
        if (s > 0) pos = true;
        if (s < 0) negative = true;
    }
    if (pos && negative) return 2;
    return pos ? 1 : (negative ? -1 : 0);
}

int root_sign_on_facet(const KacMoodyMatrix& m, const IVec& root, const VectorialFacet& f) {
    IVec b = weyl_apply_inverse(m, f.wrep, root);
    int s = 0;
    if (!support_within(b, f.J)) s = is_nonneg(b) ? 1 : -1;
    return f.sign == '-' ? -s : s;
}

Vec facet_interior_point(const Realization& r, const VectorialFacet& f) {
    Vec p = zero_vec(r.dim);
    if (f.J.size() < r.rank()) {
        Mat dual = r.dual_vectors();
        for (std::size_t i = 0; i < r.rank(); ++i)
            if (!std::binary_search(f.J.begin(), f.J.end(), i)) p = add(p, dual[i]);
    }
    p = r.apply(f.wrep, p);
    return f.sign == '-' ? neg(p) : p;
}

Mat facet_span_basis(const Realization& r, const VectorialFacet& f) {
    Mat eqs;
    for (auto j : f.J) eqs.push_back(r.rootForms[j]);
    Mat basis = eqs.empty() ? identity_mat(r.dim) : kernel(eqs, r.dim);
    for (auto& b : basis) b = r.apply(f.wrep, b);
    return basis;
}

bool in_star(const KacMoodyMatrix& m, const VectorialFacet& F, const VectorialFacet& F1) {
    // V0 lies in the closure of every facet of either sign.
    if (F.J.size() == m.size) return true;
    if (F.sign != F1.sign) return false;
    if (!std::includes(F.J.begin(), F.J.end(), F1.J.begin(), F1.J.end())) return false;
    auto winv = weyl_inverse(m, F.wrep);
    auto x = weyl_mul(m, winv, F1.wrep);
    IMat red = reduce_right_coset(m, x.action, F.J);
    return red == identity_imat(m.size);
}

std::vector<VectorialFacet> facet_star(const KacMoodyMatrix& m, const VectorialFacet& F, std::size_t length_cap) {
    auto sub = submatrix(m, F.J);
    std::vector<WeylElement> WJ;
    if (F.J.empty())
        WJ.push_back(weyl_identity(m));
    else
        WJ = weyl_elements(sub, F.spherical ? std::numeric_limits<std::size_t>::max() : length_cap);
    std::vector<VectorialFacet> out;
    std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
    const std::size_t k = F.J.size();
    for (const auto& u : WJ) {
        std::vector<std::size_t> word = F.wrep.word;
        for (auto i : u.word) word.push_back(F.J.empty() ? i : F.J[i]);
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            std::vector<std::size_t> J1;
            for (std::size_t t = 0; t < k; ++t)
                if (mask >> t & 1) J1.push_back(F.J[t]);
            auto f = canonical_facet(m, F.sign, word, J1);
            if (seen.insert({f.wrep.word, f.J}).second) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), [](const VectorialFacet& a, const VectorialFacet& b) {
        if (a.J.size() != b.J.size()) return a.J.size() > b.J.size();
        if (a.wrep.word.size() != b.wrep.word.size()) return a.wrep.word.size() < b.wrep.word.size();
        if (a.wrep.word != b.wrep.word) return a.wrep.word < b.wrep.word;
        return a.J < b.J;
    });
    return out;
}

nlohmann::json facet_to_json(const VectorialFacet& f) {
    return {{"sign", std::string(1, f.sign)}, {"word", f.wrep.word}, {"J", f.J}};
}

VectorialFacet facet_from_json(const KacMoodyMatrix& m, const nlohmann::json& j) {
    std::string s = j.value("sign", "+");
    if (s != "+" && s != "-") throw ParseError("facet sign must be '+' or '-'");
    return canonical_facet(m, s[0], j.value("word", std::vector<std::size_t>{}), j.value("J", std::vector<std::size_t>{}));
}

nlohmann::json vec_to_json(const Vec& v) {
    auto a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

Vec vec_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("point must be an array");
    Vec v;
    for (const auto& x : j) {
        if (x.is_string())
            v.push_back(parse_rational(x.get<std::string>()));
        else if (x.is_number_integer())
            v.emplace_back(static_cast<long>(x.get<std::int64_t>()));
        else
            throw ParseError("point coordinates must be integers or rational strings");
    }
    return v;
}

}  // namespace hovelkit
