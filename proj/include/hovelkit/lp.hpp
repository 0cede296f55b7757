#pragma once

#include "hovelkit/rational.hpp"

namespace hovelkit {

struct LPResult {
    enum class Status { Optimal, Unbounded, Infeasible };
    Status status = Status::Infeasible;
    Q value = 0;
    Vec point;
};

// Maximize c.x subject to rows(A) x <= b with x free. Exact simplex,
// Bland's rule.
LPResult lp_maximize(const Vec& c, const Mat& A, const Vec& b);

}  // namespace hovelkit
