#pragma once

#include "hovelkit/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hovelkit {

/// Laurent polynomial in t with rational coefficients; zero terms are never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(const Q& c);  // NOLINT: constants convert implicitly
    static LaurentPoly monomial(const Q& c, std::int64_t exponent);

    const std::map<std::int64_t, Q>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Q coeff(std::int64_t exponent) const;
    /// (coefficient, exponent) when the polynomial has exactly one term.
    std::optional<std::pair<Q, std::int64_t>> as_monomial() const;

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
    bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

private:
    void add_term(std::int64_t e, const Q& c);
    std::map<std::int64_t, Q> terms_;
};

std::string to_string(const LaurentPoly& p);

/// Square matrix over Q[t, t^-1].
using LMat = std::vector<std::vector<LaurentPoly>>;

LMat lmat_identity(std::size_t n);
LMat lmat_mul(const LMat& a, const LMat& b);
LaurentPoly lmat_det(const LMat& a);
/// Adjugate; equals the inverse when the determinant is 1.
LMat lmat_adjugate(const LMat& a);
/// Inverse of a matrix whose determinant is a nonzero monomial.
LMat lmat_inverse(const LMat& a);
LMat lmat_from(const Mat& m);
/// Constant part when every entry is constant.
std::optional<Mat> lmat_constant(const LMat& a);
bool lmat_is_identity(const LMat& a);

nlohmann::json laurent_to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const nlohmann::json& j);
nlohmann::json lmat_to_json(const LMat& m);
LMat lmat_from_json(const nlohmann::json& j);

}  // namespace hovelkit
