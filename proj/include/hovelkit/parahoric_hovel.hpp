#pragma once

#include "hovelkit/group_instances.hpp"

#include <map>
#include <mutex>

namespace hovelkit {

/// Minimal parahoric family of a classical instance on main-facade points and
/// shapes of the apartment. Q(Omega) is tested through entry valuations:
/// det g = 1, v_p(g_ii) >= 0 and v_p(g_ij) >= threshold(Omega, a_ij).
class ParahoricFamily {
public:
    explicit ParahoricFamily(std::shared_ptr<const SLnInstance> inst);

    const SLnInstance& instance() const { return *inst_; }
    std::shared_ptr<const SLnInstance> instance_ptr() const { return inst_; }
    const ApartmentModel& model() const { return inst_->model(); }
    std::size_t n() const { return inst_->matrix_size(); }

    /// U_a(Omega) = U_{a, threshold}: least level in Lambda_a with Omega in D(a, level).
    ExtQ threshold(const Shape& omega, const IVec& root) const;
    /// Matrix of thresholds (0 on the diagonal); memoized for points, segments and finite sets.
    std::vector<std::vector<ExtQ>> thresholds(const Shape& omega) const;
    bool contains(const Mat& g, const Shape& omega) const;
    bool contains(const Mat& g, const std::vector<std::vector<ExtQ>>& need) const;
    bool contains(const Mat& g, const Vec& x) const { return contains(g, Shape::point(x)); }

    /// (w, lift) for every w in W^v; the lift is a product of m(x_{a_i}(1)) and acts as w.
    const std::vector<std::pair<WeylElement, Mat>>& weyl_lifts() const { return lifts_; }
    /// Diagonal t with nu(t) the translation by tau, when one exists.
    std::optional<Mat> torus_for(const Vec& tau) const;
    /// One n per w with nu(n) x = y (unique modulo Z0).
    std::vector<Mat> n_candidates(const Vec& x, const Vec& y) const;
    /// Representatives of N(x) modulo Z0.
    std::vector<Mat> stabilizer_in_N(const Vec& x) const { return n_candidates(x, x); }
    /// Elements of N fixing every point of a finite set, modulo Z0.
    std::vector<Mat> stabilizer_in_N(const std::vector<Vec>& pts) const;
    AffineWeylElement nu(const Mat& n) const { return nu_of(*inst_, lmat_from(n)); }

    /// Finite generating data at x: x_a(s p^l) for s in {+-1, +-2, +-4}, l the
    /// threshold, the N(x) representatives and the sign matrices of Z0.
    std::vector<Mat> generators(const Vec& x) const;
    Mat sample_Z0(std::mt19937_64& rng) const;
    /// Random word in U_a(Omega), N(Omega) and Z0 for a finite point set Omega.
    Mat sample_member(const std::vector<Vec>& pts, std::mt19937_64& rng, std::size_t len = 6) const;
    Mat sample_member(const Vec& x, std::mt19937_64& rng, std::size_t len = 6) const {
        return sample_member(std::vector<Vec>{x}, rng, len);
    }
    Mat sample_N(std::mt19937_64& rng) const;

    /// g in N Q(Omega) for a point, segment or finite set, decided exactly.
    bool in_NQ(const Mat& g, const Shape& omega) const;

private:
    std::shared_ptr<const SLnInstance> inst_;
    std::vector<std::pair<WeylElement, Mat>> lifts_;
    mutable std::mutex memoMutex_;
    mutable std::map<std::pair<int, std::vector<Vec>>, std::vector<std::vector<ExtQ>>> memo_;
};

/// Canonical representative of r modulo p^m Z_(p): 0 or p^s c with s < m, 0 < c < p^(m-s).
Q padic_reduce(const Q& r, std::int64_t p, std::int64_t m);

/// Points of the form g . i(x).
struct HovelPoint {
    Mat g;
    Vec x;
};
/// (u, y) with g i(x) = u i(y), u in U+ reduced modulo U+ cap Q(y).
HovelPoint canonical(const ParahoricFamily& fam, const HovelPoint& p);
/// (g, x) ~ (h, y): some n with y = nu(n) x and g^-1 h n in Q(x).
bool same_hovel_point(const ParahoricFamily& fam, const HovelPoint& a, const HovelPoint& b);

/// Sampled points of the apartment with small denominators.
std::vector<Vec> sample_points(const ApartmentModel& m, std::size_t count, std::uint64_t seed);

/// P1-P10 at the given main-facade points. P6, P7, P9 are reported as skipped.
std::vector<ValuationReport> check_parahoric_axioms(const ParahoricFamily& fam, const std::vector<Vec>& points,
                                                    const CheckPlan& plan = {50, 0});
/// Oracle certification at p = 2: every generator word of length <= max_len lies in the
/// oracle; for SL2 the oracle agrees with reachability on a window of small matrices;
/// words with one factor outside the threshold are rejected.
ValuationReport precertify_oracle(const ParahoricFamily& fam, const std::vector<Vec>& points,
                                  std::size_t max_len = 6);

/// Q^dec(Omega, eps w C^v) membership, decided exactly through the big-cell factorization.
bool in_Qdec(const ParahoricFamily& fam, const Mat& h, const Shape& omega, const WeylElement& w, char eps);

struct GoodFixatorReport {
    ValuationReport gfPlus, gfMinus, tf;
    std::vector<ValuationReport> all() const { return {gfPlus, gfMinus, tf}; }
};
/// Omega: Point, Segment or FiniteSet. Throws UnsupportedShape otherwise.
GoodFixatorReport good_fixator_check(const ParahoricFamily& fam, const Shape& omega, const CheckPlan& plan = {50, 0});
/// Q(A) = Z0 on a scan of small matrices.
ValuationReport apartment_fixator_check(const ParahoricFamily& fam);
/// Q^dec(Omega, C) agrees for all chambers of one sign on samples.
ValuationReport chamber_independence_check(const ParahoricFamily& fam, const Shape& omega,
                                           const CheckPlan& plan = {30, 0});
/// Iwasawa G = U+ N Q(x) and G = Q(x1) N Q(x2) on random elements, factors membership-checked.
std::vector<ValuationReport> iwasawa_and_bbi_checks(const ParahoricFamily& fam, const CheckPlan& plan = {200, 0});

struct TreeVertex {
    Q r;             // vertex x_a(r) . i(k)
    std::int64_t k = 0;
    std::size_t depth = 0;
    std::optional<std::size_t> parent;
    bool onApartment = false;
};

struct Tree {
    std::int64_t p = 2;
    std::size_t depth = 0;
    std::vector<TreeVertex> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::vector<std::size_t> sphere_sizes() const;
    std::vector<std::vector<std::size_t>> adjacency() const;
    std::string to_dot() const;
    nlohmann::json to_json() const;
};

/// Vertex key (r, k) of x_a(r) i(k) after canonicalization of g i(k).
std::pair<Q, std::int64_t> tree_key(const ParahoricFamily& fam, const Mat& g, std::int64_t k);
/// Ball of radius depth around i(0) in the tree of SL2(Q, v_p). Throws BudgetExceeded
/// for p > 5 or depth > 6.
Tree build_tree(std::int64_t p, std::size_t depth);

/// Segments [x, y] read in two apartments containing x and y coincide on a grid.
ValuationReport check_MAO(const ParahoricFamily& fam, std::size_t trials, std::uint64_t seed = 0,
                          std::size_t grid = 8);

struct ResidueSystem {
    Vec x;
    std::vector<IVec> roots;
    bool special = false;

    /// Closed under negation and under its own reflections inside the slice.
    bool closed(const ApartmentModel& m) const;
    nlohmann::json to_json() const;
};
ResidueSystem residue_roots(const ApartmentModel& m, const Vec& x);

}  // namespace hovelkit
