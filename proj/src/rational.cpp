#include "hovelkit/rational.hpp"

#include "hovelkit/errors.hpp"

#include <algorithm>
#include <cctype>

namespace hovelkit {

Q parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        if (!valid_int(a) || !valid_int(b)) throw ParseError("bad rational '" + raw + "'");
        mpz_class num(a[0] == '+' ? a.substr(1) : a), den(b[0] == '+' ? b.substr(1) : b);
        if (den == 0) throw ParseError("zero denominator in '" + raw + "'");
        Q q(num, den);
        q.canonicalize();
        return q;
    }
    auto dotpos = s.find('.');
    if (dotpos != std::string::npos) {
        std::string ip = s.substr(0, dotpos), fp = s.substr(dotpos + 1);
        bool negative = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!valid_int(ip) || !std::all_of(fp.begin(), fp.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParseError("bad decimal '" + raw + "'");
        mpz_class den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        mpz_class num(ip + fp);
        Q q(num, den);
        q.canonicalize();
        return negative ? Q(-q) : q;
    }
    if (!valid_int(s)) throw ParseError("bad rational '" + raw + "'");
    return Q(mpz_class(s[0] == '+' ? s.substr(1) : s));
}

std::string to_string(const Q& x) {
    Q q = x;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Vec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

Q floor_q(const Q& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Q(r);
}

Q ceil_q(const Q& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Q(r);
}

int compare(const ExtQ& a, const ExtQ& b) {
    auto rank_of = [](const ExtQ& e) { return e.kind == ExtQ::Kind::NegInf ? 0 : e.kind == ExtQ::Kind::Finite ? 1 : 2; };
    int ra = rank_of(a), rb = rank_of(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (ra != 1) return 0;
    int c = cmp(a.value, b.value);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

ExtQ max(const ExtQ& a, const ExtQ& b) { return compare(a, b) >= 0 ? a : b; }

std::string to_string(const ExtQ& e) {
    if (e.is_pos_inf()) return "inf";
    if (e.is_neg_inf()) return "-inf";
    return to_string(e.value);
}

Vec to_qvec(const IVec& v) {
    Vec out;
    out.reserve(v.size());
    for (auto x : v) out.emplace_back(static_cast<long>(x));
    return out;
}

Mat to_qmat(const IMat& m) {
    Mat out;
    out.reserve(m.size());
    for (const auto& r : m) out.push_back(to_qvec(r));
    return out;
}

Vec zero_vec(std::size_t n) { return Vec(n, Q(0)); }
Mat zero_mat(std::size_t r, std::size_t c) { return Mat(r, Vec(c, Q(0))); }

Mat identity_mat(std::size_t n) {
    Mat m = zero_mat(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Q dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot of sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector add");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sub");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Q& s, const Vec& v) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

Vec neg(const Vec& v) { return scale(Q(-1), v); }

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Q& q) { return sgn(q) == 0; });
}

Mat transpose(const Mat& m) {
    if (m.empty()) return {};
    Mat t = zero_mat(m[0].size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

Mat mul(const Mat& a, const Mat& b) {
    if (a.empty()) return {};
    std::size_t inner = a[0].size();
    if (inner != b.size()) throw DimensionMismatch("matrix product");
    std::size_t cols = b.empty() ? 0 : b[0].size();
    Mat r = zero_mat(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (sgn(a[i][k]) == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

Vec mul(const Mat& a, const Vec& v) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], v);
    return r;
}

Mat mat_add(const Mat& a, const Mat& b) {
    Mat r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = add(a[i], b[i]);
    return r;
}

Mat mat_sub(const Mat& a, const Mat& b) {
    Mat r = a;
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub(a[i], b[i]);
    return r;
}

std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(m[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Q inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            Q f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(Mat m) { return rref(m).size(); }

Q determinant(Mat m) {
    std::size_t n = m.size();
    for (const auto& r : m)
        if (r.size() != n) throw NonSquare("determinant of non-square matrix");
    Q det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(m[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Q f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

std::optional<Mat> inverse(const Mat& m) {
    std::size_t n = m.size();
    Mat aug = zero_mat(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw NonSquare("inverse of non-square matrix");
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Mat inv = zero_mat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

Mat kernel(const Mat& m, std::size_t ncols) {
    Mat a = m;
    for (auto& r : a)
        if (r.size() != ncols) throw DimensionMismatch("kernel column count");
    auto piv = rref(a);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : piv) is_pivot[p] = true;
    Mat basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vec v = zero_vec(ncols);
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
        basis.push_back(v);
    }
    return basis;
}

std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t ncols) {
    Mat aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        if (aug[i].size() != ncols) throw DimensionMismatch("solve column count");
        aug[i].push_back(b[i]);
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == ncols) return std::nullopt;
    Vec x = zero_vec(ncols);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][ncols];
    return x;
}

Vec reduce_mod_span(const Vec& v, const Mat& basis) {
    if (basis.empty()) return v;
    Mat b = basis;
    auto piv = rref(b);
    Vec r = v;
    for (std::size_t i = 0; i < piv.size(); ++i) {
        Q f = r[piv[i]];
        if (sgn(f) == 0) continue;
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * b[i][j];
    }
    return r;
}

bool in_span(const Vec& v, const Mat& basis) { return is_zero(reduce_mod_span(v, basis)); }

std::int64_t height(const IVec& v) {
    std::int64_t h = 0;
    for (auto x : v) h += x < 0 ? -x : x;
    return h;
}

bool is_nonneg(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x >= 0; });
}

bool is_nonpos(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x <= 0; });
}

IVec ineg(const IVec& v) {
    IVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
    return r;
}

}  // namespace hovelkit
