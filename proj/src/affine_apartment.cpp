#include "hovelkit/affine_apartment.hpp"

#include "hovelkit/errors.hpp"
#include "hovelkit/lp.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace hovelkit {

namespace {

Q mod_positive(const Q& x, const Q& step) {
    Q k = floor_q(x / step);
    return x - k * step;
}

bool vec_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Q& x, const Q& y) { return cmp(x, y) < 0; });
}

}  // namespace

LambdaSet LambdaSet::discrete(const Q& step, const Q& offset) {
    if (sgn(step) <= 0) throw std::invalid_argument("value group generator must be positive");
    return LambdaSet{Kind::Coset, mod_positive(offset, step), step};
}

bool LambdaSet::contains(const Q& x) const {
    if (kind == Kind::Full) return true;
    Q t = (x - offset) / step;
    return t.get_den() == 1;
}

LambdaSet LambdaSet::negated() const {
    if (kind == Kind::Full) return *this;
    return discrete(step, -offset);
}

ExtQ LambdaSet::least_from(const ExtQ& s, bool strict) const {
    if (!s.is_finite()) return s;
    if (kind == Kind::Full) return s;
    Q k = ceil_q((s.value - offset) / step);
    Q l = offset + k * step;
    if (strict && l == s.value) l += step;
    return ExtQ::finite(l);
}

bool LambdaSet::operator==(const LambdaSet& o) const {
    if (kind != o.kind) return false;
    return kind == Kind::Full || (offset == o.offset && step == o.step);
}

std::string to_string(const LambdaSet& l) {
    if (l.kind == LambdaSet::Kind::Full) return "R";
    std::string s = (l.step == 1 ? std::string() : to_string(l.step)) + "Z";
    if (sgn(l.offset) != 0) s = to_string(l.offset) + "+" + s;
    return s;
}

LambdaSet ApartmentModel::lambda_of(const IVec& root) const {
    auto it = overrides.find(root);
    return it == overrides.end() ? valueGroup : it->second;
}

void ApartmentModel::set_lambda(const IVec& root, const LambdaSet& l) {
    overrides[root] = l;
    overrides[ineg(root)] = l.negated();
}

bool ApartmentModel::is_true_wall(const IVec& root, const Q& level) const { return lambda_of(root).contains(level); }

ApartmentModel make_model(const Realization& real, const LambdaSet& valueGroup, std::int64_t heightCap) {
    if (heightCap < 1) throw std::invalid_argument("height cap must be positive");
    ApartmentModel m;
    m.real = real;
    m.valueGroup = valueGroup;
    m.heightCap = heightCap;
    m.realSlice = real_roots(real.matrix(), heightCap);
    m.imagSlice = imaginary_roots(real.matrix(), heightCap);
    return m;
}

ApartmentModel parse_model(const std::string& text, std::int64_t heightCap) {
    auto comma = text.rfind(',');
    std::string mat = comma == std::string::npos ? text : text.substr(0, comma);
    std::string grp = comma == std::string::npos ? "Z" : text.substr(comma + 1);
    KacMoodyMatrix m;
    if (auto named = named_matrix(mat))
        m = *named;
    else {
        try {
            m = matrix_from_json(nlohmann::json::parse(mat));
        } catch (const nlohmann::json::exception&) {
            throw ParseError("unknown matrix '" + mat + "'");
        }
    }
    validate_gcm(m);
    LambdaSet l;
    if (grp == "R" || grp == "Q") {
        l = LambdaSet::full();
    } else if (!grp.empty() && grp.back() == 'Z') {
        std::string g = grp.substr(0, grp.size() - 1);
        l = LambdaSet::discrete(g.empty() ? Q(1) : parse_rational(g));
    } else {
        throw ParseError("value group must look like Z, 1/2Z or R");
    }
    return make_model(build_realization(minimal_adjoint_rgs(m), RealizationKind::Q), l, heightCap);
}

bool lambda_symmetric(const ApartmentModel& m) {
    for (const auto* s : {&m.realSlice, &m.imagSlice})
        for (const auto& r : s->roots)
            if (!(m.lambda_of(r.coords) == m.lambda_of(ineg(r.coords)).negated())) return false;
    return true;
}

HalfSpace root_half_space(const ApartmentModel& m, const IVec& root, const Q& level) {
    return HalfSpace{m.real.form_of(root), level, root};
}

std::string to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::Point: return "point";
        case ShapeKind::Segment: return "segment";
        case ShapeKind::OpenSegmentGerm: return "segment-germ";
        case ShapeKind::Ray: return "ray";
        case ShapeKind::RayGerm: return "ray-germ";
        case ShapeKind::LocalFacet: return "local-facet";
        case ShapeKind::SectorFace: return "sector-face";
        case ShapeKind::SectorFaceGerm: return "sector-face-germ";
        case ShapeKind::Chimney: return "chimney";
        case ShapeKind::ChimneyGerm: return "chimney-germ";
        case ShapeKind::FiniteSet: return "finite-set";
        case ShapeKind::ConvexIntersection: return "convex";
    }
    return "?";
}

Shape Shape::point(Vec x) {
    Shape s;
    s.kind = ShapeKind::Point;
    s.points = {std::move(x)};
    return s;
}

Shape Shape::segment(Vec x, Vec y) {
    Shape s;
    s.kind = ShapeKind::Segment;
    s.points = {std::move(x), std::move(y)};
    return s;
}

Shape Shape::segment_germ(Vec x, Vec y) {
    if (x == y) throw std::invalid_argument("segment germ needs two distinct points");
    Shape s = segment(std::move(x), std::move(y));
    s.kind = ShapeKind::OpenSegmentGerm;
    return s;
}

Shape Shape::ray(Vec x, Vec dir) {
    Shape s;
    s.kind = ShapeKind::Ray;
    s.points = {std::move(x)};
    s.dir = std::move(dir);
    return s;
}

Shape Shape::ray_germ(Vec x, Vec dir) {
    Shape s = ray(std::move(x), std::move(dir));
    s.kind = ShapeKind::RayGerm;
    return s;
}

Shape Shape::local_facet(Vec x, VectorialFacet f) {
    Shape s = point(std::move(x));
    s.kind = ShapeKind::LocalFacet;
    s.facet = std::move(f);
    return s;
}

Shape Shape::sector_face(Vec x, VectorialFacet f) {
    Shape s = local_facet(std::move(x), std::move(f));
    s.kind = ShapeKind::SectorFace;
    return s;
}

Shape Shape::sector_face_germ(Vec x, VectorialFacet f) {
    Shape s = local_facet(std::move(x), std::move(f));
    s.kind = ShapeKind::SectorFaceGerm;
    return s;
}

Shape Shape::chimney(Shape base, VectorialFacet f) {
    Shape s;
    s.kind = ShapeKind::Chimney;
    s.base = std::make_shared<const Shape>(std::move(base));
    s.facet = std::move(f);
    return s;
}

Shape Shape::chimney_germ(Shape base, VectorialFacet f) {
    Shape s = chimney(std::move(base), std::move(f));
    s.kind = ShapeKind::ChimneyGerm;
    return s;
}

Shape Shape::finite_set(std::vector<Vec> pts) {
    if (pts.empty()) throw std::invalid_argument("finite set must be non-empty");
    Shape s;
    s.kind = ShapeKind::FiniteSet;
    s.points = std::move(pts);
    return s;
}

Shape Shape::convex(std::vector<HalfSpace> closed, std::vector<HalfSpace> open) {
    Shape s;
    s.kind = ShapeKind::ConvexIntersection;
    s.closed = std::move(closed);
    s.open = std::move(open);
    return s;
}

bool Shape::is_germ() const {
    switch (kind) {
        case ShapeKind::OpenSegmentGerm:
        case ShapeKind::RayGerm:
        case ShapeKind::LocalFacet:
        case ShapeKind::SectorFaceGerm:
        case ShapeKind::ChimneyGerm: return true;
        case ShapeKind::Chimney: return base->is_germ();
        default: return false;
    }
}

namespace {

SupValue fin(const Q& q, bool strict = false) { return SupValue{ExtQ::finite(q), strict}; }
SupValue pinf() { return SupValue{ExtQ::pos_inf(), false}; }
SupValue ninf() { return SupValue{ExtQ::neg_inf(), false}; }

Q neg_eval(const Vec& form, const Vec& x) { return -dot(form, x); }

// Rows of -form for every half-space, as constraints -form.x <= level.
void push_constraints(const std::vector<HalfSpace>& hs, Mat& A, Vec& b, std::size_t extra_cols, bool with_t) {
    for (const auto& h : hs) {
        Vec row = neg(h.form);
        for (std::size_t k = 0; k < extra_cols; ++k) row.emplace_back(with_t ? 1 : 0);
        A.push_back(row);
        b.push_back(h.level);
    }
}

SupValue sup_convex(const Realization& r, const Shape& s, const Vec& form) {
    const std::size_t d = r.dim;
    if (!s.open.empty()) {
        // The set is non-empty iff some point satisfies the open constraints strictly.
        Mat A;
        Vec b;
        push_constraints(s.closed, A, b, 1, false);
        push_constraints(s.open, A, b, 1, true);
        Vec cap = zero_vec(d + 1);
        cap[d] = 1;
        A.push_back(cap);
        b.emplace_back(1);
        Vec c = zero_vec(d + 1);
        c[d] = 1;
        auto res = lp_maximize(c, A, b);
        if (res.status != LPResult::Status::Optimal || sgn(res.value) <= 0) return ninf();
    }
    Mat A;
    Vec b;
    push_constraints(s.closed, A, b, 0, false);
    push_constraints(s.open, A, b, 0, false);
    if (A.empty()) return is_zero(form) ? fin(0) : pinf();
    auto res = lp_maximize(neg(form), A, b);
    if (res.status == LPResult::Status::Infeasible) return ninf();
    if (res.status == LPResult::Status::Unbounded) return pinf();
    if (s.open.empty()) return fin(res.value);
    // Attained iff some optimal point keeps the open constraints strict.
    Mat A2;
    Vec b2;
    push_constraints(s.closed, A2, b2, 1, false);
    push_constraints(s.open, A2, b2, 1, true);
    Vec eq = form;
    eq.emplace_back(0);
    A2.push_back(eq);
    b2.push_back(-res.value);
    A2.push_back(neg(eq));
    b2.push_back(res.value);
    Vec cap = zero_vec(d + 1);
    cap[d] = 1;
    A2.push_back(cap);
    b2.emplace_back(1);
    auto att = lp_maximize(cap, A2, b2);
    bool attained = att.status == LPResult::Status::Optimal && sgn(att.value) > 0;
    return fin(res.value, !attained);
}

}  // namespace

SupValue sup_neg_form(const Realization& r, const Shape& s, const Vec& form) {
    switch (s.kind) {
        case ShapeKind::Point: return fin(neg_eval(form, s.points[0]));
        case ShapeKind::Segment:
        case ShapeKind::FiniteSet: {
            Q best = neg_eval(form, s.points[0]);
            for (const auto& p : s.points) best = std::max(best, neg_eval(form, p));
            return fin(best);
        }
        case ShapeKind::OpenSegmentGerm: {
            Q slope = dot(form, sub(s.points[1], s.points[0]));
            return fin(neg_eval(form, s.points[0]), sgn(slope) < 0);
        }
        case ShapeKind::Ray: {
            if (sgn(dot(form, s.dir)) < 0) return pinf();
            return fin(neg_eval(form, s.points[0]));
        }
        case ShapeKind::RayGerm: {
            int sg = sgn(dot(form, s.dir));
            if (sg < 0) return pinf();
            if (sg > 0) return ninf();
            return fin(neg_eval(form, s.points[0]));
        }
        case ShapeKind::LocalFacet: {
            int sg = form_sign_on_facet(r, form, *s.facet);
            return fin(neg_eval(form, s.points[0]), sg == -1 || sg == 2);
        }
        case ShapeKind::SectorFace: {
            int sg = form_sign_on_facet(r, form, *s.facet);
            if (sg == -1 || sg == 2) return pinf();
            return fin(neg_eval(form, s.points[0]));
        }
        case ShapeKind::SectorFaceGerm: {
            int sg = form_sign_on_facet(r, form, *s.facet);
            if (sg == -1 || sg == 2) return pinf();
            if (sg == 1) return ninf();
            return fin(neg_eval(form, s.points[0]));
        }
        case ShapeKind::Chimney: {
            int sg = form_sign_on_facet(r, form, *s.facet);
            if (sg == -1 || sg == 2) return pinf();
            return sup_neg_form(r, *s.base, form);
        }
        case ShapeKind::ChimneyGerm: {
            int sg = form_sign_on_facet(r, form, *s.facet);
            if (sg == -1 || sg == 2) return pinf();
            if (sg == 1) return ninf();
            return sup_neg_form(r, *s.base, form);
        }
        case ShapeKind::ConvexIntersection: return sup_convex(r, s, form);
    }
    throw std::logic_error("unhandled shape kind");
}

std::string to_string(const EnclosureSpec& s) {
    if (s.family == RootFamily::DeltaTi) return "conv";
    std::string f = s.family == RootFamily::Phi ? "cl_phi" : s.family == RootFamily::Delta ? "cl_delta" : "cl_sharp";
    if (s.policy == LevelPolicy::Real) f += "_R";
    if (s.policy == LevelPolicy::Ma) f += "_ma";
    return f;
}

EnclosureSpec parse_spec(const std::string& name) {
    static const std::map<std::string, EnclosureSpec> table = {
        {"cl_phi", {RootFamily::Phi, LevelPolicy::Lambda}},
        {"cl_phi_R", {RootFamily::Phi, LevelPolicy::Real}},
        {"cl_delta", {RootFamily::Delta, LevelPolicy::Lambda}},
        {"cl_delta_ma", {RootFamily::Delta, LevelPolicy::Ma}},
        {"cl_delta_R", {RootFamily::Delta, LevelPolicy::Real}},
        {"cl_sharp", {RootFamily::Sharp, LevelPolicy::Lambda}},
        {"cl_sharp_R", {RootFamily::Sharp, LevelPolicy::Real}},
        {"conv", {RootFamily::DeltaTi, LevelPolicy::Real}},
        {"cl_ti_R", {RootFamily::DeltaTi, LevelPolicy::Real}},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ParseError("unknown enclosure spec '" + name + "'");
    return it->second;
}

ExtQ level_for(const ApartmentModel& m, const Shape& s, const IVec& root, LevelPolicy policy) {
    auto sup = sup_neg_form(m.real, s, m.real.form_of(root));
    bool real_root = m.realSlice.contains(root) || is_real_root(m.matrix(), root);
    bool use_lambda = policy == LevelPolicy::Lambda || (policy == LevelPolicy::Ma && real_root);
    if (!use_lambda) return sup.value;
    return m.lambda_of(root).least_from(sup.value, sup.strict);
}

namespace {

Vec primitive_scale(const Vec& f, Q& factor) {
    factor = 1;
    for (const auto& x : f)
        if (sgn(x) != 0) {
            factor = abs(x);
            break;
        }
    Vec out;
    for (const auto& x : f) out.push_back(x / factor);
    return out;
}

bool implied_by(const HalfSpace& h, const std::vector<HalfSpace>& others) {
    if (others.empty()) return is_zero(h.form) && sgn(h.level) >= 0;
    Mat A;
    Vec b;
    push_constraints(others, A, b, 0, false);
    auto res = lp_maximize(neg(h.form), A, b);
    if (res.status == LPResult::Status::Infeasible) return true;
    if (res.status == LPResult::Status::Unbounded) return false;
    return res.value <= h.level;
}

std::vector<HalfSpace> dedupe(const std::vector<HalfSpace>& hs) {
    std::vector<HalfSpace> out;
    for (const auto& h : hs) {
        Q f;
        Vec form = primitive_scale(h.form, f);
        HalfSpace n{form, h.level / f, h.root};
        if (is_zero(form)) {
            if (sgn(h.level) >= 0) continue;
            n.level = -1;
        }
        auto it = std::find_if(out.begin(), out.end(), [&](const HalfSpace& o) { return o.form == n.form; });
        if (it == out.end())
            out.push_back(n);
        else if (n.level < it->level)
            *it = n;
    }
    return out;
}

void sort_halfspaces(std::vector<HalfSpace>& hs) {
    std::sort(hs.begin(), hs.end(), [](const HalfSpace& a, const HalfSpace& b) {
        if (a.form != b.form) return vec_less(a.form, b.form);
        return a.level < b.level;
    });
}

// Drops half-spaces implied by the rest, scanning from the back.
std::vector<HalfSpace> irredundant(std::vector<HalfSpace> hs) {
    for (std::size_t k = hs.size(); k-- > 0;) {
        std::vector<HalfSpace> rest;
        for (std::size_t j = 0; j < hs.size(); ++j)
            if (j != k) rest.push_back(hs[j]);
        if (implied_by(hs[k], rest)) hs.erase(hs.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return hs;
}

}  // namespace

std::vector<HalfSpace> normalize(std::vector<HalfSpace> hs) {
    auto d = dedupe(hs);
    sort_halfspaces(d);
    d = irredundant(std::move(d));
    sort_halfspaces(d);
    return d;
}

bool region_contains(const std::vector<HalfSpace>& outer, const std::vector<HalfSpace>& inner) {
    for (const auto& h : outer)
        if (!implied_by(h, inner)) return false;
    return true;
}

bool same_region(const std::vector<HalfSpace>& a, const std::vector<HalfSpace>& b) {
    return region_contains(a, b) && region_contains(b, a);
}

bool region_contains_point(const std::vector<HalfSpace>& hs, const Vec& x) {
    return std::all_of(hs.begin(), hs.end(), [&](const HalfSpace& h) { return h.contains(x); });
}

std::vector<HalfSpace> convex_hull(const Realization& r, const Shape& s) {
    const std::size_t d = r.dim;
    Mat gens;
    auto add_point = [&](const Vec& p) {
        r.check_dim(p);
        Vec g = p;
        g.emplace_back(1);
        gens.push_back(g);
    };
    auto add_dir = [&](const Vec& v) {
        Vec g = v;
        g.emplace_back(0);
        gens.push_back(g);
    };
    switch (s.kind) {
        case ShapeKind::Point:
        case ShapeKind::Segment:
        case ShapeKind::FiniteSet:
            for (const auto& p : s.points) add_point(p);
            break;
        case ShapeKind::Ray:
            add_point(s.points[0]);
            add_dir(s.dir);
            break;
        case ShapeKind::SectorFace: {
            add_point(s.points[0]);
            auto g = facet_generators(r, *s.facet);
            for (const auto& v : g.rays) add_dir(v);
            for (const auto& l : g.lines) {
                add_dir(l);
                add_dir(neg(l));
            }
            break;
        }
        case ShapeKind::Chimney: {
            if (s.base->kind != ShapeKind::Point) throw UnsupportedShape("convex hull of a chimney needs a point base");
            add_point(s.base->points[0]);
            auto g = facet_generators(r, *s.facet);
            for (const auto& v : g.rays) add_dir(v);
            for (const auto& l : g.lines) {
                add_dir(l);
                add_dir(neg(l));
            }
            break;
        }
        case ShapeKind::ConvexIntersection: return normalize(s.closed);
        default: throw UnsupportedShape("convex hull is not defined for " + to_string(s.kind));
    }
    const std::size_t D = d + 1;
    Mat eqs = kernel(gens, D);
    std::vector<HalfSpace> out;
    auto push = [&](const Vec& n) {
        Vec form(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(d));
        out.push_back(HalfSpace{form, n[d], std::nullopt});
    };
    for (const auto& n : eqs) {
        push(n);
        push(neg(n));
    }
    std::size_t k = D - eqs.size();  // dimension of the generated cone's span
    // Facets: hyperplanes through k-1 independent generators with all generators on one side.
    std::vector<std::size_t> idx(k - 1);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k - 1) {
            Mat sub;
            for (auto i : idx) sub.push_back(gens[i]);
            if (!sub.empty() && rank(sub) != k - 1) return;
            Mat cand = sub.empty() ? identity_mat(D) : kernel(sub, D);
            for (const auto& n : cand) {
                if (in_span(n, eqs)) continue;
                bool pos_side = false, neg_side = false;
                for (const auto& g : gens) {
                    int sg = sgn(dot(n, g));
                    if (sg > 0) pos_side = true;
                    if (sg < 0) neg_side = true;
                }
                if (pos_side && neg_side) return;
                if (pos_side) push(n);
                if (neg_side) push(neg(n));
                return;
            }
            return;
        }
        for (std::size_t i = start; i < gens.size(); ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    if (k >= 1) rec(0, 0);
    return normalize(out);
}

Enclosure enclosure(const ApartmentModel& m, const EnclosureSpec& spec, const Shape& s) {
    Enclosure e;
    e.spec = spec;
    e.cap = m.heightCap;
    if (spec.family == RootFamily::DeltaTi) {
        if (spec.policy != LevelPolicy::Real) throw UnsupportedShape("totally imaginary family needs real levels");
        if (s.is_germ()) throw UnsupportedShape("convex hull of a germ");
        e.halfSpaces = convex_hull(m.real, s);
        return e;
    }
    std::vector<Root> roots = m.realSlice.roots;
    if (spec.family == RootFamily::Delta) {
        roots.insert(roots.end(), m.imagSlice.roots.begin(), m.imagSlice.roots.end());
        sort_roots(roots);
    }
    std::vector<HalfSpace> hs;
    for (const auto& r : roots) {
        ExtQ l = level_for(m, s, r.coords, spec.policy);
        e.certificates.push_back({r.coords, l});
        if (l.is_finite()) hs.push_back(root_half_space(m, r.coords, l.value));
    }
    if (spec.family == RootFamily::Sharp) {
        // Keep the earliest roots: drop from the back while the rest still implies them.
        std::vector<HalfSpace> kept = irredundant(hs);
        std::vector<Certificate> certs;
        for (const auto& h : kept) certs.push_back({*h.root, ExtQ::finite(h.level)});
        e.certificates = certs;
        e.halfSpaces = kept;
        return e;
    }
    e.halfSpaces = normalize(hs);
    return e;
}

ChainReport enclosure_chain(const ApartmentModel& m, const Shape& s) {
    ChainReport rep;
    const std::vector<std::string> names = {"cl_sharp", "cl_phi", "cl_delta", "cl_delta_ma", "cl_delta_R", "conv"};
    for (const auto& n : names) rep.links.push_back({n, enclosure(m, parse_spec(n), s).halfSpaces});
    for (std::size_t i = 0; i + 1 < rep.links.size(); ++i)
        if (!region_contains(rep.links[i].region, rep.links[i + 1].region))
            throw ChainViolation(rep.links[i].name + " does not contain " + rep.links[i + 1].name);
    // Pointwise check on a grid around the shape.
    if (m.dim() <= 3) {
        Vec lo, hi;
        for (std::size_t k = 0; k < m.dim(); ++k) {
            Q a = 0, b = 0;
            for (const auto& p : s.points) {
                a = std::min(a, p[k]);
                b = std::max(b, p[k]);
            }
            lo.push_back(floor_q(a) - 2);
            hi.push_back(ceil_q(b) + 2);
        }
        Vec x = lo;
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == m.dim()) {
                ++rep.gridPoints;
                bool inside = true;
                for (std::size_t i = rep.links.size(); i-- > 0;) {
                    bool here = region_contains_point(rep.links[i].region, x);
                    if (inside && !here && i + 1 < rep.links.size())
                        throw ChainViolation(rep.links[i].name + " misses a grid point of " + rep.links[i + 1].name);
                    inside = here;
                }
                return;
            }
            for (Q t = lo[k]; t <= hi[k]; t += Q(1, 2)) {
                x[k] = t;
                rec(k + 1);
            }
        };
        rec(0);
    }
    return rep;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

Verdict preorder_leq(const ApartmentModel& m, const Vec& x, const Vec& y, std::size_t step_cap) {
    auto r = in_positive_tits_cone(m.real, sub(y, x), step_cap);
    if (!r) return Verdict::Unknown;
    return *r ? Verdict::Yes : Verdict::No;
}

AffineWeylElement affine_identity(const ApartmentModel& m) { return {weyl_identity(m.matrix()), zero_vec(m.dim())}; }

AffineWeylElement translation(const ApartmentModel& m, const Vec& t) {
    m.real.check_dim(t);
    return {weyl_identity(m.matrix()), t};
}

WeylElement root_reflection_element(const KacMoodyMatrix& m, const IVec& root) {
    auto d = real_root_descent(m, root);
    std::vector<std::size_t> w = d.word;
    w.push_back(d.simple);
    w.insert(w.end(), d.word.rbegin(), d.word.rend());
    return canonical_element(m, w);
}

AffineWeylElement reflection(const ApartmentModel& m, const IVec& root, const Q& level) {
    if (!is_real_root(m.matrix(), root)) throw std::invalid_argument("reflections need a real root");
    if (!m.is_true_wall(root, level))
        throw GhostWall("level " + to_string(level) + " is not in Lambda for root " + to_string(to_qvec(root)));
    return {root_reflection_element(m.matrix(), root), scale(-level, m.real.coroot_vector(root))};
}

Vec apply(const ApartmentModel& m, const AffineWeylElement& g, const Vec& x) {
    return add(m.real.apply(g.linear, x), g.translation);
}

AffineWeylElement compose(const ApartmentModel& m, const AffineWeylElement& a, const AffineWeylElement& b) {
    return {weyl_mul(m.matrix(), a.linear, b.linear), add(m.real.apply(a.linear, b.translation), a.translation)};
}

AffineWeylElement invert(const ApartmentModel& m, const AffineWeylElement& a) {
    auto w = weyl_inverse(m.matrix(), a.linear);
    return {w, neg(m.real.apply(w, a.translation))};
}

HalfSpace apply(const ApartmentModel& m, const AffineWeylElement& g, const HalfSpace& h) {
    const std::size_t d = m.dim();
    Vec f;
    for (std::size_t k = 0; k < d; ++k) {
        Vec e = zero_vec(d);
        e[k] = 1;
        f.push_back(dot(h.form, m.real.apply_inverse(g.linear, e)));
    }
    HalfSpace out{f, h.level - dot(f, g.translation), std::nullopt};
    if (h.root) out.root = weyl_apply(g.linear, *h.root);
    return out;
}

std::pair<IVec, Q> map_wall(const ApartmentModel& m, const AffineWeylElement& g, const IVec& root, const Q& level) {
    IVec r = weyl_apply(g.linear, root);
    return {r, level - m.real.eval_root(r, g.translation)};
}

Shape apply(const ApartmentModel& m, const AffineWeylElement& g, const Shape& s) {
    Shape out = s;
    for (auto& p : out.points) p = apply(m, g, p);
    if (!s.dir.empty()) out.dir = m.real.apply(g.linear, s.dir);
    if (s.facet) {
        std::vector<std::size_t> word = g.linear.word;
        word.insert(word.end(), s.facet->wrep.word.begin(), s.facet->wrep.word.end());
        out.facet = canonical_facet(m.matrix(), s.facet->sign, word, s.facet->J);
    }
    if (s.base) out.base = std::make_shared<const Shape>(apply(m, g, *s.base));
    for (auto& h : out.closed) h = apply(m, g, h);
    for (auto& h : out.open) h = apply(m, g, h);
    return out;
}

std::optional<bool> vanishing_roots_finite(const Realization& r, const Mat& basis) {
    const auto& mat = r.matrix();
    // Root coordinates q with sum_i q_i alpha_i(b) = 0 for every basis vector b.
    Mat eqs;
    for (const auto& b : basis) {
        Vec row;
        for (std::size_t i = 0; i < r.rank(); ++i) row.push_back(r.eval_simple(i, b));
        eqs.push_back(row);
    }
    auto vanishes = [&](const IVec& q) {
        Vec v = to_qvec(q);
        return std::all_of(eqs.begin(), eqs.end(), [&](const Vec& e) { return sgn(dot(e, v)) == 0; });
    };
    auto cls = validate_and_classify(mat);
    bool unknown = false;
    for (const auto& b : cls.blocks) {
        if (b.type == BlockType::Finite) continue;
        auto sub = submatrix(mat, b.indices);
        auto lift = [&](const IVec& q) {
            IVec full(r.rank(), 0);
            for (std::size_t k = 0; k < b.indices.size(); ++k) full[b.indices[k]] = q[k];
            return full;
        };
        if (b.type == BlockType::Affine) {
            IVec delta = null_root(sub);
            if (!vanishes(lift(delta))) continue;
            // Every class of real roots modulo delta has a representative of height <= ht(delta).
            for (const auto& a : real_roots(sub, height(delta)).roots)
                if (vanishes(lift(a.coords))) return false;
            continue;
        }
        std::int64_t cap = 12;
        bool any = false;
        for (const auto& a : real_roots(sub, cap).roots)
            if (vanishes(lift(a.coords))) any = true;
        if (any) unknown = true;
    }
    if (unknown) return std::nullopt;
    return true;
}

ChimneyInfo chimney(const ApartmentModel& m, const Shape& base, const VectorialFacet& direction,
                    const EnclosureSpec& spec) {
    VectorialFacet base_dir;
    if (base.kind == ShapeKind::Point)
        base_dir = trivial_facet(m.matrix(), '+');
    else if (base.kind == ShapeKind::LocalFacet)
        base_dir = *base.facet;
    else
        throw UnsupportedShape("chimney base must be a point or a local facet");
    ChimneyInfo c;
    c.shape = Shape::chimney(base, direction);
    c.germ = Shape::chimney_germ(base, direction);
    c.closure = enclosure(m, spec, c.shape);
    c.splayed = direction.spherical;
    Mat S = facet_span_basis(m.real, base_dir);
    for (const auto& v : facet_span_basis(m.real, direction)) S.push_back(v);
    c.full = rank(S) == m.dim();
    c.solid = vanishing_roots_finite(m.real, S);
    return c;
}

nlohmann::json halfspace_to_json(const HalfSpace& h) {
    nlohmann::json j{{"form", vec_to_json(h.form)}, {"level", to_string(h.level)}};
    if (h.root) j["root"] = *h.root;
    return j;
}

HalfSpace halfspace_from_json(const nlohmann::json& j) {
    HalfSpace h;
    h.form = vec_from_json(j.at("form"));
    const auto& l = j.at("level");
    h.level = l.is_string() ? parse_rational(l.get<std::string>()) : Q(static_cast<long>(l.get<std::int64_t>()));
    if (j.contains("root")) h.root = j["root"].get<IVec>();
    return h;
}

nlohmann::json shape_to_json(const Shape& s) {
    nlohmann::json j{{"kind", to_string(s.kind)}};
    if (!s.points.empty()) {
        auto pts = nlohmann::json::array();
        for (const auto& p : s.points) pts.push_back(vec_to_json(p));
        j["points"] = pts;
    }
    if (!s.dir.empty()) j["dir"] = vec_to_json(s.dir);
    if (s.facet) j["facet"] = facet_to_json(*s.facet);
    if (s.base) j["base"] = shape_to_json(*s.base);
    if (s.kind == ShapeKind::ConvexIntersection) {
        j["closed"] = nlohmann::json::array();
        j["open"] = nlohmann::json::array();
        for (const auto& h : s.closed) j["closed"].push_back(halfspace_to_json(h));
        for (const auto& h : s.open) j["open"].push_back(halfspace_to_json(h));
    }
    return j;
}

Shape shape_from_json(const KacMoodyMatrix& m, const nlohmann::json& j) {
    static const std::map<std::string, ShapeKind> kinds = {
        {"point", ShapeKind::Point},
        {"segment", ShapeKind::Segment},
        {"segment-germ", ShapeKind::OpenSegmentGerm},
        {"ray", ShapeKind::Ray},
        {"ray-germ", ShapeKind::RayGerm},
        {"local-facet", ShapeKind::LocalFacet},
        {"sector-face", ShapeKind::SectorFace},
        {"sector-face-germ", ShapeKind::SectorFaceGerm},
        {"chimney", ShapeKind::Chimney},
        {"chimney-germ", ShapeKind::ChimneyGerm},
        {"finite-set", ShapeKind::FiniteSet},
        {"convex", ShapeKind::ConvexIntersection},
    };
    auto it = kinds.find(j.value("kind", ""));
    if (it == kinds.end()) throw ParseError("unknown shape kind");
    Shape s;
    s.kind = it->second;
    if (j.contains("points"))
        for (const auto& p : j["points"]) s.points.push_back(vec_from_json(p));
    if (j.contains("dir")) s.dir = vec_from_json(j["dir"]);
    if (j.contains("facet")) s.facet = facet_from_json(m, j["facet"]);
    if (j.contains("base")) s.base = std::make_shared<const Shape>(shape_from_json(m, j["base"]));
    if (j.contains("closed"))
        for (const auto& h : j["closed"]) s.closed.push_back(halfspace_from_json(h));
    if (j.contains("open"))
        for (const auto& h : j["open"]) s.open.push_back(halfspace_from_json(h));
    return s;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

Vec parse_point(const std::string& s) {
    Vec v;
    for (const auto& c : split(s, ',')) v.push_back(parse_rational(c));
    if (v.empty()) throw ParseError("empty point");
    return v;
}

}  // namespace

Shape parse_shape(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("shape must look like kind:coords");
    std::string kind = text.substr(0, colon);
    std::vector<Vec> pts;
    for (const auto& p : split(text.substr(colon + 1), ';')) pts.push_back(parse_point(p));
    auto need = [&](std::size_t n) {
        if (pts.size() != n) throw ParseError(kind + " needs " + std::to_string(n) + " point(s)");
    };
    if (kind == "point") {
        need(1);
        return Shape::point(pts[0]);
    }
    if (kind == "segment") {
        need(2);
        return Shape::segment(pts[0], pts[1]);
    }
    if (kind == "germ") {
        need(2);
        return Shape::segment_germ(pts[0], pts[1]);
    }
    if (kind == "ray") {
        need(2);
        return Shape::ray(pts[0], pts[1]);
    }
    if (kind == "raygerm") {
        need(2);
        return Shape::ray_germ(pts[0], pts[1]);
    }
    if (kind == "finite") return Shape::finite_set(pts);
    throw ParseError("unknown shape kind '" + kind + "'");
}

nlohmann::json enclosure_to_json(const Enclosure& e) {
    nlohmann::json j{{"spec", to_string(e.spec)}, {"cap", e.cap}};
    j["certificates"] = nlohmann::json::array();
    for (const auto& c : e.certificates) j["certificates"].push_back({{"root", c.root}, {"level", to_string(c.level)}});
    j["halfspaces"] = nlohmann::json::array();
    for (const auto& h : e.halfSpaces) j["halfspaces"].push_back(halfspace_to_json(h));
    return j;
}

std::string describe_region(const std::vector<HalfSpace>& hs, std::size_t dim) {
    if (dim == 1) {
        ExtQ lo = ExtQ::neg_inf(), hi = ExtQ::pos_inf();
        for (const auto& h : hs) {
            int s = sgn(h.form[0]);
            if (s > 0) lo = max(lo, ExtQ::finite(-h.level / h.form[0]));
            if (s < 0) {
                ExtQ b = ExtQ::finite(h.level / -h.form[0]);
                if (b < hi) hi = b;
            }
        }
        return "[" + to_string(lo) + "," + to_string(hi) + "]";
    }
    std::string out;
    for (const auto& h : hs) {
        if (!out.empty()) out += " ; ";
        out += to_string(h.form) + ".x + " + to_string(h.level) + " >= 0";
    }
    return out.empty() ? "everything" : out;
}

}  // namespace hovelkit
