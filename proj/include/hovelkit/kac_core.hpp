#pragma once

#include "hovelkit/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hovelkit {

/// Generalized Cartan matrix a[i][j] = alpha_j(alpha_i^vee).
struct KacMoodyMatrix {
    std::size_t size = 0;
    IMat entries;

    KacMoodyMatrix() = default;
    explicit KacMoodyMatrix(IMat rows);

    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries[i][j]; }
    bool operator==(const KacMoodyMatrix& o) const { return entries == o.entries; }
};

/// Throws NotGCM naming the offending entry.
void validate_gcm(const KacMoodyMatrix& m);

enum class BlockType { Finite, Affine, Indefinite };
std::string to_string(BlockType t);

struct Block {
    std::vector<std::size_t> indices;
    BlockType type = BlockType::Finite;
    std::string shape;
};

struct Classification {
    std::vector<Block> blocks;
    bool all_finite() const;
    bool has_indefinite() const;
    std::string summary() const;
};

std::vector<std::vector<std::size_t>> indecomposable_blocks(const KacMoodyMatrix& m);
KacMoodyMatrix submatrix(const KacMoodyMatrix& m, const std::vector<std::size_t>& J);
Classification validate_and_classify(const KacMoodyMatrix& m);

/// s_i(q) = q - <q, alpha_i^vee> alpha_i.
IVec simple_reflection(const KacMoodyMatrix& m, std::size_t i, const IVec& q);
/// <q, alpha_i^vee> = sum_j a[i][j] q_j.
std::int64_t coroot_pairing(const KacMoodyMatrix& m, std::size_t i, const IVec& q);

enum class RootTag { Real, Imaginary };
std::string to_string(RootTag t);

struct Root {
    IVec coords;
    RootTag tag = RootTag::Real;
    std::int64_t height() const { return hovelkit::height(coords); }
    bool positive() const { return is_nonneg(coords); }
    bool operator==(const Root& o) const { return coords == o.coords && tag == o.tag; }
};

/// Roots of height at most cap, sorted by (height, coords).
struct RootSlice {
    std::int64_t cap = 0;
    std::vector<Root> roots;

    bool contains(const IVec& coords) const;
    std::optional<RootTag> tag_of(const IVec& coords) const;
    std::size_t count(RootTag t) const;
};

void sort_roots(std::vector<Root>& roots);

inline constexpr std::size_t kDefaultRootLimit = 5'000'000;

RootSlice real_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit = kDefaultRootLimit);
RootSlice imaginary_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit = kDefaultRootLimit);
RootSlice all_roots(const KacMoodyMatrix& m, std::int64_t cap, std::size_t limit = kDefaultRootLimit);

/// action[r][c] is the coefficient of alpha_r in w(alpha_c).
struct WeylElement {
    std::vector<std::size_t> word;
    IMat action;

    std::size_t length() const { return word.size(); }
    bool operator==(const WeylElement& o) const { return action == o.action; }
};

IMat reflection_matrix(const KacMoodyMatrix& m, std::size_t i);
IMat identity_imat(std::size_t n);
IMat imat_mul(const IMat& a, const IMat& b);
IVec imat_apply(const IMat& a, const IVec& v);
IMat action_of_word(const KacMoodyMatrix& m, const std::vector<std::size_t>& word);

WeylElement weyl_identity(const KacMoodyMatrix& m);
/// ShortLex-least reduced word of the element given by any word.
WeylElement canonical_element(const KacMoodyMatrix& m, const std::vector<std::size_t>& word);
WeylElement weyl_mul(const KacMoodyMatrix& m, const WeylElement& a, const WeylElement& b);
WeylElement weyl_inverse(const KacMoodyMatrix& m, const WeylElement& a);
IVec weyl_apply(const WeylElement& w, const IVec& q);
IVec weyl_apply_inverse(const KacMoodyMatrix& m, const WeylElement& w, const IVec& q);

inline constexpr std::size_t kDefaultWeylLimit = 1'000'000;

/// All elements of length <= cap, by increasing length then ShortLex.
std::vector<WeylElement> weyl_elements(const KacMoodyMatrix& m, std::size_t length_cap,
                                       std::size_t limit = kDefaultWeylLimit);
/// Group order if W is exhausted within the element limit.
std::optional<std::size_t> weyl_order(const KacMoodyMatrix& m, std::size_t limit = kDefaultWeylLimit);

bool is_spherical(const KacMoodyMatrix& m, const std::vector<std::size_t>& J);

/// Writes a positive or negative real root as +-w(alpha_i).
struct RootDescent {
    std::vector<std::size_t> word;  // w = s_word[0] ... s_word[k-1]
    std::size_t simple = 0;
    bool negative = false;
};
RootDescent real_root_descent(const KacMoodyMatrix& m, const IVec& root);
bool is_real_root(const KacMoodyMatrix& m, const IVec& q);
/// <q, beta^vee> for a real root beta.
std::int64_t pairing_with_coroot(const KacMoodyMatrix& m, const IVec& q, const IVec& beta);
/// s_beta(q) = q - <q, beta^vee> beta.
IVec root_reflection(const KacMoodyMatrix& m, const IVec& beta, const IVec& q);

/// Matrix aliases: a1, a2, a3, b2, g2, aff_a1, hyp_33.
std::optional<KacMoodyMatrix> named_matrix(const std::string& name);
KacMoodyMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const KacMoodyMatrix& m);
nlohmann::json slice_to_json(const RootSlice& s);
nlohmann::json weyl_to_json(const WeylElement& w);

}  // namespace hovelkit
