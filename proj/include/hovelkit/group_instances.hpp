#pragma once

#include "hovelkit/valuated_datum.hpp"

#include <array>
#include <memory>

namespace hovelkit {

bool is_prime(std::int64_t p);
/// v_p(q); +infinity for q = 0.
ExtQ vp(const Q& q, std::int64_t p);
std::int64_t vp_finite(const Q& q, std::int64_t p);

struct PAdicScalar {
    Q value;
    std::int64_t prime = 2;
    ExtQ valuation() const { return vp(value, prime); }
};

/// Nonzero rational +-p^k a/b with a, b prime to p, k in [vmin, vmax].
Q sample_padic(std::mt19937_64& rng, std::int64_t p, std::int64_t vmin, std::int64_t vmax);

/// SL_n over (Q, v_p) for n = 2, 3 with the standard pinning: the root
/// a_i + ... + a_{j-1} has root group I + r E_ij.
class SLnInstance : public RootDatumInstance {
public:
    SLnInstance(std::size_t n, std::int64_t p);

    std::string name() const override { return "sl" + std::to_string(n_) + "(p=" + std::to_string(p_) + ")"; }
    std::int64_t prime() const override { return p_; }
    const ApartmentModel& model() const override { return *model_; }
    std::shared_ptr<const ApartmentModel> model_ptr() const { return model_; }
    std::size_t matrix_size() const override { return n_; }
    bool classical() const override { return true; }

    LMat x(const IVec& root, const Q& r) const override;
    std::optional<RootElement> as_root_element(const LMat& g) const override;
    ExtQ valuation(const Q& r) const override { return vp(r, p_); }
    bool in_Z(const LMat& g) const override;
    LMat sample_Z(std::mt19937_64& rng) const override;
    Q sample_scalar(std::mt19937_64& rng, std::int64_t vmin, std::int64_t vmax) const override;
    std::optional<bool> in_ZUplus(const LMat& g) const override;

    /// Matrix position (i, j), i != j, of the root group of a root.
    std::pair<std::size_t, std::size_t> position(const IVec& root) const;
    IVec root_at(std::size_t i, std::size_t j) const;
    /// y in Q^n with sum 0 and y_i - y_j = a_ij(x).
    Vec weights(const Vec& x) const;
    /// Random element of SL_n(Q) as a product of root and torus elements.
    Mat sample_element(std::mt19937_64& rng, std::size_t factors = 6, std::int64_t vmin = -2,
                       std::int64_t vmax = 2) const;

private:
    std::size_t n_;
    std::int64_t p_;
    std::shared_ptr<const ApartmentModel> model_;
};

/// Elementary matrices over Q[t, t^-1] realizing affine A1: the root a + n*delta
/// (coordinates [n, n+1]) has root group I + r t^n E12, and -a + n*delta
/// (coordinates [n, n-1]) has I + r t^n E21. Z is the constant diagonal torus.
class LoopSL2Instance : public RootDatumInstance {
public:
    LoopSL2Instance(std::int64_t p, std::int64_t cap);

    std::string name() const override { return "loop_sl2(p=" + std::to_string(p_) + ")"; }
    std::int64_t prime() const override { return p_; }
    const ApartmentModel& model() const override { return *model_; }
    std::size_t matrix_size() const override { return 2; }

    LMat x(const IVec& root, const Q& r) const override;
    std::optional<RootElement> as_root_element(const LMat& g) const override;
    ExtQ valuation(const Q& r) const override { return vp(r, p_); }
    bool in_Z(const LMat& g) const override;
    LMat sample_Z(std::mt19937_64& rng) const override;
    Q sample_scalar(std::mt19937_64& rng, std::int64_t vmin, std::int64_t vmax) const override;

    /// diag(t^k, t^-k): normalizes the root groups, acting by a translation of W.
    LMat loop_torus(std::int64_t k) const;

private:
    std::int64_t p_;
    std::shared_ptr<const ApartmentModel> model_;
};

std::shared_ptr<const SLnInstance> sl2_instance(std::int64_t p);
std::shared_ptr<const SLnInstance> sl3_instance(std::int64_t p);
std::shared_ptr<const LoopSL2Instance> loop_sl2_instance(std::int64_t p, std::int64_t cap = 5);

/// Named instance: "sl2", "sl3", "loop_sl2".
std::shared_ptr<const RootDatumInstance> make_instance(const std::string& name, std::int64_t p, std::int64_t cap = 5);

/// g = factors[0] * factors[1] * factors[2]; the middle factor lies in N.
struct Decomposition {
    std::string kind;
    std::array<Mat, 3> factors;
    WeylElement cell;
    AffineWeylElement nu;  // action of the middle factor

    Mat product() const;
    nlohmann::json to_json() const;
};

Decomposition bruhat_decompose(const SLnInstance& inst, const Mat& g, char sign = '+');
Decomposition birkhoff_decompose(const SLnInstance& inst, const Mat& g);
/// g = u n q with u in U+, n in N and q in Q(x).
Decomposition iwasawa_decompose(const SLnInstance& inst, const Mat& g, const Vec& x);
Decomposition iwasawa_decompose(const SLnInstance& inst, const Mat& g);
/// g = q1 n q2 with q1 in Q(x1), q2 in Q(x2).
Decomposition bbi_decompose(const SLnInstance& inst, const Mat& g, const Vec& x1, const Vec& x2);
WeylElement bruhat_cell(const SLnInstance& inst, const Mat& g, char sign = '+');
WeylElement birkhoff_cell(const SLnInstance& inst, const Mat& g);
/// g = u d v, u upper unitriangular, d diagonal, v lower unitriangular; exists on the big Birkhoff cell.
std::optional<std::array<Mat, 3>> udl_decompose(const Mat& g);

/// Membership of a constant matrix in Q(x): det 1 and v_p(g_ij) >= y_j - y_i.
bool in_fixator(const SLnInstance& inst, const Mat& g, const Vec& x);

}  // namespace hovelkit
