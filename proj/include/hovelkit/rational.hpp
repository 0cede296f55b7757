#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hovelkit {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;
using IVec = std::vector<std::int64_t>;
using IMat = std::vector<IVec>;

// Accepts "7", "-3/4", "0.3", "-1.25e0" is not supported.
Q parse_rational(const std::string& s);
std::string to_string(const Q& q);
std::string to_string(const Vec& v);

Q floor_q(const Q& q);
Q ceil_q(const Q& q);

// Rational extended by -inf and +inf.
struct ExtQ {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    Q value = 0;

    static ExtQ finite(const Q& q) { return ExtQ{Kind::Finite, q}; }
    static ExtQ pos_inf() { return ExtQ{Kind::PosInf, 0}; }
    static ExtQ neg_inf() { return ExtQ{Kind::NegInf, 0}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_pos_inf() const { return kind == Kind::PosInf; }
    bool is_neg_inf() const { return kind == Kind::NegInf; }
};

int compare(const ExtQ& a, const ExtQ& b);
inline bool operator==(const ExtQ& a, const ExtQ& b) { return compare(a, b) == 0; }
inline bool operator!=(const ExtQ& a, const ExtQ& b) { return compare(a, b) != 0; }
inline bool operator<(const ExtQ& a, const ExtQ& b) { return compare(a, b) < 0; }
inline bool operator<=(const ExtQ& a, const ExtQ& b) { return compare(a, b) <= 0; }
inline bool operator>(const ExtQ& a, const ExtQ& b) { return compare(a, b) > 0; }
inline bool operator>=(const ExtQ& a, const ExtQ& b) { return compare(a, b) >= 0; }
ExtQ max(const ExtQ& a, const ExtQ& b);
std::string to_string(const ExtQ& e);

Vec to_qvec(const IVec& v);
Mat to_qmat(const IMat& m);
Vec zero_vec(std::size_t n);
Mat zero_mat(std::size_t r, std::size_t c);
Mat identity_mat(std::size_t n);

Q dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Q& s, const Vec& v);
Vec neg(const Vec& v);
bool is_zero(const Vec& v);

Mat transpose(const Mat& m);
Mat mul(const Mat& a, const Mat& b);
Vec mul(const Mat& a, const Vec& v);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);
std::size_t rank(Mat m);
Q determinant(Mat m);
std::optional<Mat> inverse(const Mat& m);
// Basis of {x : m x = 0}.
Mat kernel(const Mat& m, std::size_t ncols);
// Some solution of m x = b, or nullopt when inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t ncols);

// Reduce v modulo span(basis) by zeroing pivot coordinates of the rref of
// the basis. Canonical per coset.
Vec reduce_mod_span(const Vec& v, const Mat& basis);
bool in_span(const Vec& v, const Mat& basis);

std::int64_t height(const IVec& v);
bool is_nonneg(const IVec& v);
bool is_nonpos(const IVec& v);
IVec ineg(const IVec& v);

}  // namespace hovelkit
