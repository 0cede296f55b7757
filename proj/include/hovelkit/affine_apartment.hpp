#pragma once

#include "hovelkit/vectorial.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hovelkit {

/// A subset of the line: all of it, or offset + step*Z.
struct LambdaSet {
    enum class Kind { Full, Coset };
    Kind kind = Kind::Coset;
    Q offset = 0;
    Q step = 1;

    static LambdaSet full() { return LambdaSet{Kind::Full, 0, 1}; }
    static LambdaSet discrete(const Q& step, const Q& offset = 0);

    bool contains(const Q& x) const;
    LambdaSet negated() const;
    /// Least element >= s (or > s when strict). Full sets return s itself.
    ExtQ least_from(const ExtQ& s, bool strict) const;
    bool operator==(const LambdaSet& o) const;
};
std::string to_string(const LambdaSet& l);

struct ApartmentModel {
    Realization real;
    LambdaSet valueGroup;
    std::map<IVec, LambdaSet> overrides;  // both a root and its negative are stored
    std::int64_t heightCap = 6;
    RootSlice realSlice;
    RootSlice imagSlice;

    const KacMoodyMatrix& matrix() const { return real.matrix(); }
    std::size_t dim() const { return real.dim; }
    LambdaSet lambda_of(const IVec& root) const;
    /// Sets Lambda_alpha and Lambda_{-alpha} = -Lambda_alpha together.
    void set_lambda(const IVec& root, const LambdaSet& l);
    bool is_true_wall(const IVec& root, const Q& level) const;
};

ApartmentModel make_model(const Realization& real, const LambdaSet& valueGroup, std::int64_t heightCap);
/// "a2,Z", "aff_a1,1/2Z", "a1,R": matrix alias, value group; realization of kind q.
ApartmentModel parse_model(const std::string& text, std::int64_t heightCap = 6);
/// Lambda_alpha = -Lambda_{-alpha} on every enumerated root.
bool lambda_symmetric(const ApartmentModel& m);

/// D(form, level) = {x : form(x) + level >= 0}.
struct HalfSpace {
    Vec form;
    Q level;
    std::optional<IVec> root;

    bool contains(const Vec& x) const { return sgn(dot(form, x) + level) >= 0; }
    bool contains_strictly(const Vec& x) const { return sgn(dot(form, x) + level) > 0; }
};
HalfSpace root_half_space(const ApartmentModel& m, const IVec& root, const Q& level);

enum class ShapeKind {
    Point,
    Segment,
    OpenSegmentGerm,
    Ray,
    RayGerm,
    LocalFacet,
    SectorFace,
    SectorFaceGerm,
    Chimney,
    ChimneyGerm,
    FiniteSet,
    ConvexIntersection
};
std::string to_string(ShapeKind k);

/// Finite descriptor of a subset or filter of the apartment.
///  Point(x); Segment [x,y]; OpenSegmentGerm: germ at x of ]x,y);
///  Ray x + R>=0 dir; RayGerm: germ at infinity of the ray;
///  LocalFacet: germ at x of x + F^v; SectorFace x + F^v;
///  SectorFaceGerm: germ at infinity of x + F^v;
///  Chimney: base + F^v; ChimneyGerm: its germ at infinity;
///  ConvexIntersection: closed and open half-spaces.
struct Shape {
    ShapeKind kind = ShapeKind::Point;
    std::vector<Vec> points;
    Vec dir;
    std::optional<VectorialFacet> facet;
    std::shared_ptr<const Shape> base;
    std::vector<HalfSpace> closed;
    std::vector<HalfSpace> open;

    static Shape point(Vec x);
    static Shape segment(Vec x, Vec y);
    static Shape segment_germ(Vec x, Vec y);
    static Shape ray(Vec x, Vec dir);
    static Shape ray_germ(Vec x, Vec dir);
    static Shape local_facet(Vec x, VectorialFacet f);
    static Shape sector_face(Vec x, VectorialFacet f);
    static Shape sector_face_germ(Vec x, VectorialFacet f);
    static Shape chimney(Shape base, VectorialFacet f);
    static Shape chimney_germ(Shape base, VectorialFacet f);
    static Shape finite_set(std::vector<Vec> pts);
    static Shape convex(std::vector<HalfSpace> closed, std::vector<HalfSpace> open = {});

    bool is_germ() const;
};

/// sup of -form over the shape. strict: the sup is approached but every
/// member of the filter needs a level strictly above it.
struct SupValue {
    ExtQ value;
    bool strict = false;
};
SupValue sup_neg_form(const Realization& r, const Shape& s, const Vec& form);

enum class RootFamily { Phi, Delta, DeltaTi, Sharp };
enum class LevelPolicy { Lambda, Real, Ma };
struct EnclosureSpec {
    RootFamily family = RootFamily::Phi;
    LevelPolicy policy = LevelPolicy::Lambda;
};
std::string to_string(const EnclosureSpec& s);
/// cl_phi, cl_phi_R, cl_delta, cl_delta_ma, cl_delta_R, cl_sharp, conv.
EnclosureSpec parse_spec(const std::string& name);

/// Least admissible level of a half-space D(root, .) containing the shape.
ExtQ level_for(const ApartmentModel& m, const Shape& s, const IVec& root, LevelPolicy policy);

struct Certificate {
    IVec root;
    ExtQ level;
};

struct Enclosure {
    EnclosureSpec spec;
    std::int64_t cap = 0;
    std::vector<Certificate> certificates;  // one per root of the family, slice order
    std::vector<HalfSpace> halfSpaces;      // normal form
    Shape region() const { return Shape::convex(halfSpaces); }
};

Enclosure enclosure(const ApartmentModel& m, const EnclosureSpec& spec, const Shape& s);
/// Closed convex hull of points, segments, finite sets, rays and sector faces.
std::vector<HalfSpace> convex_hull(const Realization& r, const Shape& s);

/// Tightest level per direction, LP-redundant half-spaces dropped, sorted.
std::vector<HalfSpace> normalize(std::vector<HalfSpace> hs);
/// outer contains inner (both as closed convex sets).
bool region_contains(const std::vector<HalfSpace>& outer, const std::vector<HalfSpace>& inner);
bool same_region(const std::vector<HalfSpace>& a, const std::vector<HalfSpace>& b);
bool region_contains_point(const std::vector<HalfSpace>& hs, const Vec& x);

struct ChainLink {
    std::string name;
    std::vector<HalfSpace> region;
};
struct ChainReport {
    std::vector<ChainLink> links;  // outermost first
    std::size_t gridPoints = 0;
};
/// cl_sharp, cl_phi, cl_delta, cl_delta_ma, cl_delta_R, conv. Throws ChainViolation.
ChainReport enclosure_chain(const ApartmentModel& m, const Shape& s);

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);
Verdict preorder_leq(const ApartmentModel& m, const Vec& x, const Vec& y, std::size_t step_cap = kDefaultStepCap);

/// x -> linear(x) + translation.
struct AffineWeylElement {
    WeylElement linear;
    Vec translation;
    bool operator==(const AffineWeylElement& o) const { return linear == o.linear && translation == o.translation; }
};
AffineWeylElement affine_identity(const ApartmentModel& m);
AffineWeylElement translation(const ApartmentModel& m, const Vec& t);
/// s_{alpha,lambda}: x -> x - (alpha(x) + lambda) alpha^vee. Throws GhostWall.
AffineWeylElement reflection(const ApartmentModel& m, const IVec& root, const Q& level);
/// Linear part s_alpha as a Weyl element.
WeylElement root_reflection_element(const KacMoodyMatrix& m, const IVec& root);
Vec apply(const ApartmentModel& m, const AffineWeylElement& g, const Vec& x);
AffineWeylElement compose(const ApartmentModel& m, const AffineWeylElement& a, const AffineWeylElement& b);
AffineWeylElement invert(const ApartmentModel& m, const AffineWeylElement& a);
/// Image of a half-space; root data follow the linear part.
HalfSpace apply(const ApartmentModel& m, const AffineWeylElement& g, const HalfSpace& h);
Shape apply(const ApartmentModel& m, const AffineWeylElement& g, const Shape& s);
/// Image of the wall M(root, level): (w root, level - (w root)(t)).
std::pair<IVec, Q> map_wall(const ApartmentModel& m, const AffineWeylElement& g, const IVec& root, const Q& level);

struct ChimneyInfo {
    Shape shape;   // base + F^v
    Shape germ;
    Enclosure closure;
    bool splayed = false;
    std::optional<bool> solid;  // nullopt when an indefinite block prevents a decision
    bool full = false;
};
/// base: Point or LocalFacet.
ChimneyInfo chimney(const ApartmentModel& m, const Shape& base, const VectorialFacet& direction,
                    const EnclosureSpec& spec = {});
/// Finiteness of the group of real roots vanishing on span(basis).
std::optional<bool> vanishing_roots_finite(const Realization& r, const Mat& basis);

nlohmann::json halfspace_to_json(const HalfSpace& h);
HalfSpace halfspace_from_json(const nlohmann::json& j);
nlohmann::json shape_to_json(const Shape& s);
Shape shape_from_json(const KacMoodyMatrix& m, const nlohmann::json& j);
/// "point:0.3", "point:1,2", "segment:0;1", "germ:0;1", "ray:0;1", "raygerm:0;1", "finite:0;1;1/2".
Shape parse_shape(const std::string& text);
nlohmann::json enclosure_to_json(const Enclosure& e);
/// Interval text for rank-one regions, "[0,1]"; otherwise the half-space list.
std::string describe_region(const std::vector<HalfSpace>& hs, std::size_t dim);

}  // namespace hovelkit
