#pragma once

#include "hovelkit/affine_apartment.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hovelkit {

enum class FacadeMode { NE, E };
enum class Flavor { Strong, Essential, Injective };
std::string to_string(FacadeMode m);
std::string to_string(Flavor f);
Flavor parse_flavor(const std::string& s);

/// The apartment at infinity in direction F^v. Points are stored in V
/// coordinates; in mode e they are reduced modulo span(F^v).
struct Facade {
    VectorialFacet direction;
    FacadeMode mode = FacadeMode::NE;
    std::shared_ptr<const ApartmentModel> model;
    Mat quotientBasis;            // rref basis of span(F^v), mode e only
    std::vector<IVec> realRoots;  // Phi^m(F^v) inside the height cap
    std::vector<IVec> imagRoots;  // Delta^m(F^v) minus Phi^m(F^v)

    bool spherical() const { return direction.spherical; }
    std::size_t dim() const { return model->dim() - quotientBasis.size(); }
    Vec canonical(const Vec& x) const;
};

Facade make_facade(std::shared_ptr<const ApartmentModel> model, const VectorialFacet& direction, FacadeMode mode);

struct FacadePoint {
    std::shared_ptr<const Facade> facade;
    Vec rep;
    bool operator==(const FacadePoint& o) const;
};

/// Facades are built on demand and cached; the cache is safe to share between threads.
class BorderedApartment {
public:
    BorderedApartment(std::shared_ptr<const ApartmentModel> model, Flavor flavor);

    Flavor flavor() const { return flavor_; }
    const ApartmentModel& model() const { return *model_; }
    std::shared_ptr<const ApartmentModel> model_ptr() const { return model_; }
    FacadeMode mode_for(const VectorialFacet& direction) const;
    std::shared_ptr<const Facade> facade(const VectorialFacet& direction) const;
    std::shared_ptr<const Facade> main_facade() const;
    FacadePoint point(const Vec& x, const VectorialFacet& direction) const;
    std::size_t cached_facades() const;

private:
    std::shared_ptr<const ApartmentModel> model_;
    Flavor flavor_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<const Facade>> cache_;
};

/// [x + F^v] -> [x + F1^v]. Throws NotInStar unless F1 lies in the star of F^v.
FacadePoint project(const BorderedApartment& b, const FacadePoint& p, const VectorialFacet& F1);

enum class TraceKind { Projected, Empty, Full };
std::string to_string(TraceKind k);
struct WallTrace {
    TraceKind kind = TraceKind::Empty;
    std::optional<HalfSpace> halfSpace;  // set for Projected
};
/// Trace of the wall M(root, level) (or of D(root, level) when half is set) on a facade.
WallTrace wall_trace(const Facade& f, const IVec& root, const Q& level, bool half = false);

/// germ_infinity(x + F^v) -> [x + F^v]. Essential flavor only.
FacadePoint germ_to_point(const BorderedApartment& b, const Shape& germ);
Shape point_to_germ(const BorderedApartment& b, const FacadePoint& p);
/// Two sector-face germs coincide as filters.
bool same_germ(const Realization& r, const Shape& a, const Shape& b);

struct FacadeClosedFacet {
    std::shared_ptr<const Facade> facade;
    Vec rep;
    std::vector<Certificate> certificates;  // one per root of Phi^m(F^v)
    std::vector<HalfSpace> halfSpaces;
    bool facadeSpherical = false;
    std::optional<bool> sphericalInFacade;
    bool chamberInFacade = false;
};
/// Closed facet [R] of a chimney germ R = germ(F + F^v); F is a Point or a LocalFacet.
FacadeClosedFacet chimney_germ_to_closed_facet(const BorderedApartment& b, const Shape& chimneyGerm);

/// The star-indexed closure of a facade.
std::vector<std::shared_ptr<const Facade>> facade_closure(const BorderedApartment& b, const VectorialFacet& direction,
                                                          std::size_t length_cap = 16);

nlohmann::json facade_point_to_json(const FacadePoint& p);
FacadePoint facade_point_from_json(const BorderedApartment& b, const nlohmann::json& j);

}  // namespace hovelkit
