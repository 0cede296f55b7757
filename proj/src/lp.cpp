#include "hovelkit/lp.hpp"

#include "hovelkit/errors.hpp"

namespace hovelkit {

namespace {

struct Tableau {
    Mat rows;                    // each row has ncols + 1 entries, last is rhs
    std::vector<std::size_t> basis;
    std::size_t ncols = 0;

    void pivot(std::size_t r, std::size_t c) {
        Q inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            Q f = rows[i][c];
            for (std::size_t j = 0; j <= ncols; ++j) rows[i][j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Maximize obj over the current feasible basis, ignoring columns >= limit.
    // Returns false when unbounded.
    bool run(const Vec& obj, std::size_t limit) {
        for (;;) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                Q red = obj[j];
                for (std::size_t i = 0; i < rows.size(); ++i) red -= obj[basis[i]] * rows[i][j];
                if (sgn(red) > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return true;
            std::size_t leave = rows.size();
            Q best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (sgn(rows[i][enter]) <= 0) continue;
                Q ratio = rows[i][ncols] / rows[i][enter];
                if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows.size()) return false;
            pivot(leave, enter);
        }
    }

    Q value(const Vec& obj) const {
        Q v = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) v += obj[basis[i]] * rows[i][ncols];
        return v;
    }
};

}  // namespace

LPResult lp_maximize(const Vec& c, const Mat& A, const Vec& b) {
    const std::size_t d = c.size(), m = A.size();
    if (b.size() != m) throw DimensionMismatch("lp rhs size");
    for (const auto& r : A)
        if (r.size() != d) throw DimensionMismatch("lp row size");

    // Columns: x+ (d), x- (d), slack (m), artificial (m).
    const std::size_t nx = 2 * d, ns = m, na = m;
    Tableau t;
    t.ncols = nx + ns + na;
    t.rows.assign(m, zero_vec(t.ncols + 1));
    t.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        bool flip = sgn(b[i]) < 0;
        Q f = flip ? Q(-1) : Q(1);
        for (std::size_t j = 0; j < d; ++j) {
            t.rows[i][j] = f * A[i][j];
            t.rows[i][d + j] = -f * A[i][j];
        }
        t.rows[i][nx + i] = f;
        t.rows[i][t.ncols] = f * b[i];
        if (flip) {
            t.rows[i][nx + ns + i] = 1;
            t.basis[i] = nx + ns + i;
        } else {
            t.basis[i] = nx + i;
        }
    }

    Vec phase1 = zero_vec(t.ncols);
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] >= nx + ns) {
            phase1[t.basis[i]] = -1;
            need_phase1 = true;
        }
    if (need_phase1) {
        t.run(phase1, t.ncols);
        if (sgn(t.value(phase1)) < 0) return LPResult{LPResult::Status::Infeasible, 0, {}};
        for (std::size_t i = 0; i < t.rows.size();) {
            if (t.basis[i] < nx + ns) {
                ++i;
                continue;
            }
            std::size_t col = nx + ns;
            for (std::size_t j = 0; j < nx + ns; ++j)
                if (sgn(t.rows[i][j]) != 0) {
                    col = j;
                    break;
                }
            if (col < nx + ns) {
                t.pivot(i, col);
                ++i;
            } else {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    Vec obj = zero_vec(t.ncols);
    for (std::size_t j = 0; j < d; ++j) {
        obj[j] = c[j];
        obj[d + j] = -c[j];
    }
    if (!t.run(obj, nx + ns)) return LPResult{LPResult::Status::Unbounded, 0, {}};

    Vec y = zero_vec(t.ncols);
    for (std::size_t i = 0; i < t.rows.size(); ++i) y[t.basis[i]] = t.rows[i][t.ncols];
    Vec x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = y[j] - y[d + j];
    return LPResult{LPResult::Status::Optimal, dot(c, x), x};
}

}  // namespace hovelkit
