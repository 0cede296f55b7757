#pragma once

#include "hovelkit/kac_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hovelkit {

/// (matrix, Y = Z^n, forms alpha_i-bar on Y, coroots alpha_i^vee in Y).
struct RootGeneratingSystem {
    KacMoodyMatrix matrix;
    std::size_t rankY = 0;
    Mat simpleRootForms;   // |I| x n
    IMat simpleCoroots;    // |I| x n
    bool free = false;
    bool adjoint = false;
};

/// Checks alpha_j-bar(alpha_i^vee) = a[i][j] and computes the flags.
RootGeneratingSystem make_rgs(const KacMoodyMatrix& m, const Mat& forms, const IMat& coroots);
/// Y = Q^*, alpha_i-bar = e_i^*, alpha_i^vee = row i of the matrix.
RootGeneratingSystem minimal_adjoint_rgs(const KacMoodyMatrix& m);
/// Y = sum Z alpha_i^vee.
RootGeneratingSystem simply_connected_rgs(const KacMoodyMatrix& m);

enum class RealizationKind { Q, X, XL, Quotient };
std::string to_string(RealizationKind k);

struct Realization {
    RootGeneratingSystem rgs;
    RealizationKind kind = RealizationKind::Q;
    std::size_t dim = 0;
    Mat rootForms;       // |I| x dim
    Mat corootVectors;   // |I| x dim
    Mat V0basis;         // basis of the common kernel of the root forms
    Mat quotientMap;     // for Quotient: rows map base coordinates to these; else empty

    const KacMoodyMatrix& matrix() const { return rgs.matrix; }
    std::size_t rank() const { return rgs.matrix.size; }
    Q eval_simple(std::size_t i, const Vec& v) const;
    Q eval_root(const IVec& root, const Vec& v) const;
    Vec form_of(const IVec& root) const;
    /// Coroot vector of a real root.
    Vec coroot_vector(const IVec& real_root) const;
    Vec reflect_simple(std::size_t i, const Vec& v) const;
    /// w = s_word[0] ... s_word[k-1] acting on V.
    Vec apply(const WeylElement& w, const Vec& v) const;
    Vec apply_word(const std::vector<std::size_t>& word, const Vec& v) const;
    Vec apply_inverse(const WeylElement& w, const Vec& v) const;
    /// Vectors with alpha_j(varpi_i) = delta_ij; requires independent forms.
    Mat dual_vectors() const;
    void check_dim(const Vec& v) const;
};

Realization build_realization(const RootGeneratingSystem& rgs, RealizationKind kind);
Realization quotient_realization(const Realization& base, const Mat& V00);
/// Essential quotient by V0.
Realization essentialize(const Realization& r);

struct VectorialFacet {
    char sign = '+';
    WeylElement wrep;
    std::vector<std::size_t> J;
    bool spherical = true;

    bool operator==(const VectorialFacet& o) const { return sign == o.sign && wrep == o.wrep && J == o.J; }
};

/// Minimal coset representative of w modulo W(J), ShortLex word.
VectorialFacet canonical_facet(const KacMoodyMatrix& m, char sign, const std::vector<std::size_t>& word,
                               std::vector<std::size_t> J);
VectorialFacet trivial_facet(const KacMoodyMatrix& m, char sign = '+');
VectorialFacet fundamental_chamber(const KacMoodyMatrix& m, char sign = '+');
bool is_chamber(const VectorialFacet& f);
bool is_trivial(const KacMoodyMatrix& m, const VectorialFacet& f);

bool fundamental_facet_membership(const Realization& r, char sign, const std::vector<std::size_t>& J, const Vec& v);
bool facet_membership(const Realization& r, const VectorialFacet& f, const Vec& v);

struct TitsVerdict {
    enum class Kind { InPositive, InNegative, Outside, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<VectorialFacet> facet;
    std::size_t steps = 0;
};
std::string to_string(TitsVerdict::Kind k);

inline constexpr std::size_t kDefaultStepCap = 100'000;

TitsVerdict locate_in_tits_cone(const Realization& r, const Vec& v, std::size_t step_cap = kDefaultStepCap);
/// Membership in T+ alone; nullopt when the descent budget runs out.
std::optional<bool> in_positive_tits_cone(const Realization& r, const Vec& v, std::size_t step_cap = kDefaultStepCap);

/// Positive primitive integer null vector of an affine indecomposable matrix.
IVec null_root(const KacMoodyMatrix& block);

/// Sign (-1, 0, +1) of a root on a vectorial facet, decided on Q.
int root_sign_on_facet(const KacMoodyMatrix& m, const IVec& root, const VectorialFacet& f);
/// A point of the facet: w(sum_{i not in J} varpi_i), negated for sign '-'.
Vec facet_interior_point(const Realization& r, const VectorialFacet& f);
/// The closure of a facet is cone(rays) + span(lines).
struct FacetGenerators {
    Mat rays;
    Mat lines;
};
FacetGenerators facet_generators(const Realization& r, const VectorialFacet& f);
/// Sign of a linear form on a facet: +1, 0, -1, or 2 when it changes sign.
int form_sign_on_facet(const Realization& r, const Vec& form, const VectorialFacet& f);
/// Basis of the vector space spanned by the facet.
Mat facet_span_basis(const Realization& r, const VectorialFacet& f);

/// F1 is in the star of F, i.e. F lies in the closure of F1.
bool in_star(const KacMoodyMatrix& m, const VectorialFacet& F, const VectorialFacet& F1);
/// Enumerates the star among facets of the sign of F; W(J) is cut at length_cap when J is not spherical.
std::vector<VectorialFacet> facet_star(const KacMoodyMatrix& m, const VectorialFacet& F, std::size_t length_cap = 64);

nlohmann::json facet_to_json(const VectorialFacet& f);
VectorialFacet facet_from_json(const KacMoodyMatrix& m, const nlohmann::json& j);
nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

}  // namespace hovelkit
