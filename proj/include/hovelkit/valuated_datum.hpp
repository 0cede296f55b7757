#pragma once

#include "hovelkit/affine_apartment.hpp"
#include "hovelkit/laurent.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hovelkit {

struct RootElement {
    IVec root;
    Q r;  // g = x_root(r)
};

/// A generating root datum with valuation, given by its operations. Elements are
/// matrices over Q[t, t^-1]; classical instances only use constant entries.
/// Implementations are immutable, so every operation may be called concurrently.
class RootDatumInstance {
public:
    virtual ~RootDatumInstance() = default;

    virtual std::string name() const = 0;
    virtual std::int64_t prime() const = 0;
    /// Apartment V^q with its root slice and value sets.
    virtual const ApartmentModel& model() const = 0;
    virtual std::size_t matrix_size() const = 0;
    virtual bool classical() const { return false; }

    /// x_root(r); x_root(0) is the identity.
    virtual LMat x(const IVec& root, const Q& r) const = 0;
    /// Recognizes a non-identity element of some root group.
    virtual std::optional<RootElement> as_root_element(const LMat& g) const = 0;
    /// omega(r) for the scalar parametrizing x_root(r).
    virtual ExtQ valuation(const Q& r) const = 0;
    virtual bool in_Z(const LMat& g) const = 0;
    virtual LMat sample_Z(std::mt19937_64& rng) const = 0;
    /// Nonzero scalar with valuation in [vmin, vmax].
    virtual Q sample_scalar(std::mt19937_64& rng, std::int64_t vmin = -3, std::int64_t vmax = 3) const = 0;
    /// Membership in Z U+ when a decomposition oracle exists.
    virtual std::optional<bool> in_ZUplus(const LMat&) const { return std::nullopt; }

    /// Roots whose groups the checkers sample: the real roots of the slice.
    std::vector<IVec> roots() const;
    LMat identity() const { return lmat_identity(matrix_size()); }
    LMat mul(const LMat& a, const LMat& b) const { return lmat_mul(a, b); }
    LMat inv(const LMat& a) const { return lmat_inverse(a); }
    LMat conj(const LMat& n, const LMat& g) const { return mul(mul(n, g), inv(n)); }
    /// phi_root(u); +infinity for the identity. Throws MNotInN when u is not in U_root.
    ExtQ phi(const IVec& root, const LMat& u) const;
    /// m(u) = x_{-a}(-1/r) x_a(r) x_{-a}(-1/r) for u = x_a(r), r != 0.
    LMat m_of(const IVec& root, const LMat& u) const;
    LMat sample_U(const IVec& root, std::mt19937_64& rng, std::int64_t vmin = -3, std::int64_t vmax = 3) const;
};

/// Reduced word for the Weyl element with the given action on root coordinates.
WeylElement weyl_from_action(const KacMoodyMatrix& m, const IMat& action);
/// Real roots a, b with a != -b generating a nilpotent set of positive combinations.
bool prenilpotent(const KacMoodyMatrix& m, const IVec& a, const IVec& b);
/// Real roots p a + q b with p, q >= 1 (p, q <= 3).
std::vector<std::pair<std::pair<int, int>, IVec>> positive_combinations(const KacMoodyMatrix& m, const IVec& a,
                                                                        const IVec& b);

/// Affine action of n in N on V^q, read off from conjugation of root groups.
/// Throws MNotInN when n does not permute the root groups, InconsistentSystem
/// when the translation equations disagree.
AffineWeylElement nu_of(const RootDatumInstance& inst, const LMat& n);

/// Word letter for building elements of N.
struct NLetter {
    enum class Kind { Torus, M };
    Kind kind = Kind::Torus;
    LMat t;    // Torus
    IVec root; // M: m(x_root(r))
    Q r;
};
LMat n_from_word(const RootDatumInstance& inst, const std::vector<NLetter>& word);
std::vector<NLetter> sample_n_word(const RootDatumInstance& inst, std::mt19937_64& rng, std::size_t max_len = 4);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckPlan {
    std::size_t samples = 500;  // per root
    std::uint64_t seed = 0;
};

struct ValuationReport {
    std::string axiom;
    std::string instance;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t failureCount = 0;
    std::vector<nlohmann::json> failures;  // first few; each carries the seed and sample indices
    CheckStatus status = CheckStatus::Pass;
    std::string note;

    void fail(nlohmann::json witness);
    nlohmann::json to_json() const;
};

ValuationReport check_V0(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_V1(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_V2_1(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_V2_2(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_V3(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_V4(const RootDatumInstance& inst, const CheckPlan& plan = {});
/// V0, V1, V2.1, V2.2, V3, V4 in that order.
std::vector<ValuationReport> check_valuation(const RootDatumInstance& inst, const CheckPlan& plan = {});

ValuationReport check_RD1(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_RD2(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_RD4(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_RD5(const RootDatumInstance& inst, const CheckPlan& plan = {});
ValuationReport check_GRD(const RootDatumInstance& inst, const CheckPlan& plan = {});
/// RD1, RD2, RD4, RD5, GRD.
std::vector<ValuationReport> check_root_datum(const RootDatumInstance& inst, const CheckPlan& plan = {});

/// nu(m(u)) = s_{a, phi_a(u)} and nu(n1 n2) = nu(n1) nu(n2) on samples.
ValuationReport check_nu(const RootDatumInstance& inst, const CheckPlan& plan = {});

/// Sampled part of Lambda_root = phi_root(U_root \ {1}), sorted.
std::vector<Q> lambda_set(const RootDatumInstance& inst, const IVec& root, std::size_t budget, std::uint64_t seed = 0);
/// Sampled Lambda_root equals minus sampled Lambda_{-root}.
bool lambda_set_symmetric(const RootDatumInstance& inst, const IVec& root, std::size_t budget,
                          std::uint64_t seed = 0);

}  // namespace hovelkit
