#include "hovelkit/laurent.hpp"

#include "hovelkit/errors.hpp"

namespace hovelkit {

LaurentPoly::LaurentPoly(const Q& c) { add_term(0, c); }

LaurentPoly LaurentPoly::monomial(const Q& c, std::int64_t exponent) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
}

void LaurentPoly::add_term(std::int64_t e, const Q& c) {
    if (sgn(c) == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
}

bool LaurentPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

Q LaurentPoly::coeff(std::int64_t exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Q(0) : it->second;
}

std::optional<std::pair<Q, std::int64_t>> LaurentPoly::as_monomial() const {
    if (terms_.size() != 1) return std::nullopt;
    return std::make_pair(terms_.begin()->second, terms_.begin()->first);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, c1 * c2);
    return r;
}

std::string to_string(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (const auto& [e, c] : p.terms()) {
        if (!s.empty()) s += " + ";
        s += to_string(c);
        if (e != 0) s += "*t^" + std::to_string(e);
    }
    return s;
}

LMat lmat_identity(std::size_t n) {
    LMat m(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = LaurentPoly(Q(1));
    return m;
}

LMat lmat_mul(const LMat& a, const LMat& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("matrix sizes differ");
    LMat r(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) r[i][j] = r[i][j] + a[i][k] * b[k][j];
        }
    return r;
}

namespace {

LMat minor_of(const LMat& a, std::size_t row, std::size_t col) {
    LMat m;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i == row) continue;
        std::vector<LaurentPoly> r;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (j != col) r.push_back(a[i][j]);
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

LaurentPoly lmat_det(const LMat& a) {
    const std::size_t n = a.size();
    if (n == 0) return LaurentPoly(Q(1));
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    LaurentPoly d;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        auto term = a[0][j] * lmat_det(minor_of(a, 0, j));
        d = (j % 2 == 0) ? d + term : d - term;
    }
    return d;
}

LMat lmat_adjugate(const LMat& a) {
    const std::size_t n = a.size();
    LMat r(n, std::vector<LaurentPoly>(n));
    if (n == 1) {
        r[0][0] = LaurentPoly(Q(1));
        return r;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto c = lmat_det(minor_of(a, j, i));
            r[i][j] = ((i + j) % 2 == 0) ? c : -c;
        }
    return r;
}

LMat lmat_inverse(const LMat& a) {
    auto d = lmat_det(a).as_monomial();
    if (!d) throw std::invalid_argument("determinant is not a unit of Q[t, t^-1]");
    auto inv = LaurentPoly::monomial(1 / d->first, -d->second);
    LMat r = lmat_adjugate(a);
    for (auto& row : r)
        for (auto& x : row) x = x * inv;
    return r;
}

LMat lmat_from(const Mat& m) {
    LMat r(m.size(), std::vector<LaurentPoly>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) r[i][j] = LaurentPoly(m[i][j]);
    return r;
}

std::optional<Mat> lmat_constant(const LMat& a) {
    Mat r(a.size(), Vec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (!a[i][j].is_constant()) return std::nullopt;
            r[i][j] = a[i][j].coeff(0);
        }
    return r;
}

bool lmat_is_identity(const LMat& a) { return a == lmat_identity(a.size()); }

nlohmann::json laurent_to_json(const LaurentPoly& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [e, c] : p.terms()) j[std::to_string(e)] = to_string(c);
    return j;
}

LaurentPoly laurent_from_json(const nlohmann::json& j) {
    if (j.is_string()) return LaurentPoly(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return LaurentPoly(Q(static_cast<long>(j.get<std::int64_t>())));
    if (!j.is_object()) throw ParseError("Laurent entry must be an object {\"exponent\": coeff}");
    LaurentPoly p;
    for (const auto& [k, v] : j.items()) {
        std::int64_t e = 0;
        try {
            e = std::stoll(k);
        } catch (const std::exception&) {
            throw ParseError("bad exponent '" + k + "'");
        }
        Q c = v.is_string() ? parse_rational(v.get<std::string>()) : Q(static_cast<long>(v.get<std::int64_t>()));
        p = p + LaurentPoly::monomial(c, e);
    }
    return p;
}

nlohmann::json lmat_to_json(const LMat& m) {
    auto rows = nlohmann::json::array();
    auto constant = lmat_constant(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j)
            row.push_back(constant ? nlohmann::json(to_string((*constant)[i][j])) : laurent_to_json(m[i][j]));
        rows.push_back(row);
    }
    return rows;
}

LMat lmat_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    LMat m;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != j.size()) throw ParseError("matrix must be square");
        std::vector<LaurentPoly> r;
        for (const auto& x : row) r.push_back(laurent_from_json(x));
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace hovelkit
