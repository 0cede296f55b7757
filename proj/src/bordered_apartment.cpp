#include "hovelkit/bordered_apartment.hpp"

#include "hovelkit/errors.hpp"

namespace hovelkit {

std::string to_string(FacadeMode m) { return m == FacadeMode::NE ? "ne" : "e"; }

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::Strong: return "strong";
        case Flavor::Essential: return "essential";
        case Flavor::Injective: return "injective";
    }
    return "?";
}

Flavor parse_flavor(const std::string& s) {
    if (s == "strong") return Flavor::Strong;
    if (s == "essential") return Flavor::Essential;
    if (s == "injective") return Flavor::Injective;
    throw ParseError("unknown flavor '" + s + "'");
}

Vec Facade::canonical(const Vec& x) const {
    model->real.check_dim(x);
    return mode == FacadeMode::E ? reduce_mod_span(x, quotientBasis) : x;
}

Facade make_facade(std::shared_ptr<const ApartmentModel> model, const VectorialFacet& direction, FacadeMode mode) {
    Facade f;
    f.direction = direction;
    f.mode = mode;
    f.model = std::move(model);
    const auto& m = *f.model;
    if (mode == FacadeMode::E) {
        Mat span = facet_span_basis(m.real, direction);
        auto piv = rref(span);
        span.resize(piv.size());
        f.quotientBasis = span;
    }
    for (const auto& r : m.realSlice.roots)
        if (root_sign_on_facet(m.matrix(), r.coords, direction) == 0) f.realRoots.push_back(r.coords);
    for (const auto& r : m.imagSlice.roots)
        if (root_sign_on_facet(m.matrix(), r.coords, direction) == 0) f.imagRoots.push_back(r.coords);
    return f;
}

bool FacadePoint::operator==(const FacadePoint& o) const {
    return facade->direction == o.facade->direction && facade->mode == o.facade->mode &&
           facade->canonical(rep) == o.facade->canonical(o.rep);
}

BorderedApartment::BorderedApartment(std::shared_ptr<const ApartmentModel> model, Flavor flavor)
    : model_(std::move(model)), flavor_(flavor) {}

FacadeMode BorderedApartment::mode_for(const VectorialFacet& direction) const {
    switch (flavor_) {
        case Flavor::Strong: return FacadeMode::NE;
        case Flavor::Essential: return FacadeMode::E;
        case Flavor::Injective: return is_trivial(model_->matrix(), direction) ? FacadeMode::NE : FacadeMode::E;
    }
    return FacadeMode::NE;
}

std::shared_ptr<const Facade> BorderedApartment::facade(const VectorialFacet& direction) const {
    auto key = facet_to_json(direction).dump();
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    auto f = std::make_shared<const Facade>(make_facade(model_, direction, mode_for(direction)));
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, f).first->second;
}

std::shared_ptr<const Facade> BorderedApartment::main_facade() const {
    return facade(trivial_facet(model_->matrix(), '+'));
}

FacadePoint BorderedApartment::point(const Vec& x, const VectorialFacet& direction) const {
    auto f = facade(direction);
    return FacadePoint{f, f->canonical(x)};
}

std::size_t BorderedApartment::cached_facades() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

FacadePoint project(const BorderedApartment& b, const FacadePoint& p, const VectorialFacet& F1) {
    if (!in_star(b.model().matrix(), p.facade->direction, F1))
        throw NotInStar("target facet is not in the star of the facade direction");
    return b.point(p.rep, F1);
}

std::string to_string(TraceKind k) {
    switch (k) {
        case TraceKind::Projected: return "projected";
        case TraceKind::Empty: return "empty";
        case TraceKind::Full: return "full";
    }
    return "?";
}

WallTrace wall_trace(const Facade& f, const IVec& root, const Q& level, bool half) {
    int s = root_sign_on_facet(f.model->matrix(), root, f.direction);
    WallTrace t;
    if (s == 0) {
        t.kind = TraceKind::Projected;
        t.halfSpace = root_half_space(*f.model, root, level);
    } else {
        t.kind = (half && s > 0) ? TraceKind::Full : TraceKind::Empty;
    }
    return t;
}

FacadePoint germ_to_point(const BorderedApartment& b, const Shape& germ) {
    if (b.flavor() != Flavor::Essential) throw WrongFlavor("germ/point correspondence needs the essential flavor");
    if (germ.kind != ShapeKind::SectorFaceGerm) throw UnsupportedShape("expected a sector-face germ");
    return b.point(germ.points.at(0), *germ.facet);
}

Shape point_to_germ(const BorderedApartment& b, const FacadePoint& p) {
    if (b.flavor() != Flavor::Essential) throw WrongFlavor("germ/point correspondence needs the essential flavor");
    return Shape::sector_face_germ(p.facade->canonical(p.rep), p.facade->direction);
}

bool same_germ(const Realization& r, const Shape& a, const Shape& b) {
    if (a.kind != ShapeKind::SectorFaceGerm || b.kind != ShapeKind::SectorFaceGerm) return false;
    if (!(*a.facet == *b.facet)) return false;
    return in_span(sub(a.points[0], b.points[0]), facet_span_basis(r, *a.facet));
}

FacadeClosedFacet chimney_germ_to_closed_facet(const BorderedApartment& b, const Shape& chimneyGerm) {
    if (chimneyGerm.kind != ShapeKind::ChimneyGerm && chimneyGerm.kind != ShapeKind::Chimney)
        throw UnsupportedShape("expected a chimney germ");
    const auto& m = b.model();
    const Shape& base = *chimneyGerm.base;
    const VectorialFacet& dir = *chimneyGerm.facet;
    auto info = chimney(m, base, dir);
    FacadeClosedFacet out;
    out.facade = b.facade(dir);
    out.rep = out.facade->canonical(base.points.at(0));
    // Roots vanishing on F^v see the chimney exactly as they see its base.
    for (const auto& root : out.facade->realRoots) {
        ExtQ lvl = level_for(m, base, root, LevelPolicy::Lambda);
        out.certificates.push_back({root, lvl});
        if (lvl.is_finite()) out.halfSpaces.push_back(root_half_space(m, root, lvl.value));
    }
    out.halfSpaces = normalize(out.halfSpaces);
    out.facadeSpherical = info.splayed;
    out.sphericalInFacade = info.solid;
    out.chamberInFacade = info.full;
    return out;
}

std::vector<std::shared_ptr<const Facade>> facade_closure(const BorderedApartment& b, const VectorialFacet& direction,
                                                          std::size_t length_cap) {
    std::vector<std::shared_ptr<const Facade>> out;
    for (const auto& f : facet_star(b.model().matrix(), direction, length_cap)) out.push_back(b.facade(f));
    return out;
}

nlohmann::json facade_point_to_json(const FacadePoint& p) {
    return {{"direction", facet_to_json(p.facade->direction)},
            {"mode", to_string(p.facade->mode)},
            {"rep", vec_to_json(p.facade->canonical(p.rep))}};
}

FacadePoint facade_point_from_json(const BorderedApartment& b, const nlohmann::json& j) {
    auto dir = facet_from_json(b.model().matrix(), j.at("direction"));
    auto p = b.point(vec_from_json(j.at("rep")), dir);
    if (j.contains("mode") && j["mode"].get<std::string>() != to_string(p.facade->mode))
        throw ParseError("mode does not match the bordered apartment flavor");
    return p;
}

}  // namespace hovelkit
