#include <doctest.h>

#include "hovelkit/errors.hpp"
#include "hovelkit/kac_core.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace hovelkit;

namespace {

KacMoodyMatrix M(IMat rows) { return KacMoodyMatrix(std::move(rows)); }

std::set<IVec> coords_of(const RootSlice& s) {
    std::set<IVec> out;
    for (const auto& r : s.roots) out.insert(r.coords);
    return out;
}

const std::vector<IMat> kSample = {
    {{2}},
    {{2, -1}, {-1, 2}},
    {{2, -2}, {-1, 2}},
    {{2, -1}, {-3, 2}},
    {{2, -2}, {-2, 2}},
    {{2, -1}, {-4, 2}},
    {{2, -3}, {-3, 2}},
    {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}},
    {{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}},
    {{2, -2, 0}, {-1, 2, -1}, {0, -1, 2}},
};

}  // namespace

TEST_CASE("GCM validation") {
    CHECK_NOTHROW(validate_gcm(M({{2, -1}, {-1, 2}})));
    CHECK_THROWS_AS(validate_gcm(M({{2, 1}, {-1, 2}})), NotGCM);
    CHECK_THROWS_AS(validate_gcm(M({{3, -1}, {-1, 2}})), NotGCM);
    CHECK_THROWS_AS(validate_gcm(M({{2, 0}, {-1, 2}})), NotGCM);
    CHECK_THROWS_AS(KacMoodyMatrix(IMat{{2, -1}, {-1}}), NonSquare);
    try {
        validate_gcm(M({{2, 0}, {-1, 2}}));
    } catch (const NotGCM& e) {
        CHECK(std::string(e.what()).find("a[0][1]") != std::string::npos);
    }
}

TEST_CASE("classification of the standard examples") {
    auto a2 = validate_and_classify(M({{2, -1}, {-1, 2}}));
    REQUIRE(a2.blocks.size() == 1);
    CHECK(a2.blocks[0].type == BlockType::Finite);
    CHECK(a2.summary() == "finite (A2-shape block)");
    CHECK(validate_and_classify(M({{2, -2}, {-2, 2}})).blocks[0].type == BlockType::Affine);
    CHECK(validate_and_classify(M({{2, -3}, {-3, 2}})).blocks[0].type == BlockType::Indefinite);
    CHECK(validate_and_classify(M({{2, -1}, {-4, 2}})).blocks[0].type == BlockType::Affine);
    auto dec = validate_and_classify(M({{2, 0, 0}, {0, 2, -2}, {0, -2, 2}}));
    REQUIRE(dec.blocks.size() == 2);
    CHECK(dec.blocks[0].type == BlockType::Finite);
    CHECK(dec.blocks[1].type == BlockType::Affine);
    CHECK(validate_and_classify(M({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}})).summary() == "affine (A2^(1)-shape block)");
    CHECK(validate_and_classify(M({{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}})).blocks[0].shape == "C3");
    CHECK(validate_and_classify(M({{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}})).blocks[0].shape == "B3");
}

TEST_CASE("finite classification agrees with Weyl group finiteness") {
    for (const auto& rows : kSample) {
        auto m = M(rows);
        auto c = validate_and_classify(m);
        auto order = weyl_order(m, 20000);
        CHECK(c.all_finite() == order.has_value());
    }
}

TEST_CASE("simple reflection examples and involution") {
    auto a2 = M({{2, -1}, {-1, 2}});
    CHECK(simple_reflection(a2, 0, IVec{0, 1}) == IVec{1, 1});
    CHECK(simple_reflection(a2, 0, IVec{1, 0}) == IVec{-1, 0});
    auto aff = M({{2, -2}, {-2, 2}});
    CHECK(simple_reflection(aff, 0, IVec{0, 1}) == IVec{2, 1});
    CHECK_THROWS_AS(simple_reflection(a2, 2, IVec{1, 0}), IndexOutOfRange);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> d(-9, 9);
    for (const auto& rows : kSample) {
        auto m = M(rows);
        for (int t = 0; t < 50; ++t) {
            IVec q(m.size);
            for (auto& x : q) x = d(rng);
            for (std::size_t i = 0; i < m.size; ++i) CHECK(simple_reflection(m, i, simple_reflection(m, i, q)) == q);
        }
    }
}

TEST_CASE("root counts") {
    auto a2 = M({{2, -1}, {-1, 2}});
    auto re = real_roots(a2, 2);
    CHECK(re.roots.size() == 6);
    CHECK(imaginary_roots(a2, 10).roots.empty());
    CHECK(real_roots(M({{2, -1}, {-3, 2}}), 10).roots.size() == 12);
    CHECK(real_roots(M({{2}}), 5).roots.size() == 2);
    auto aff = M({{2, -2}, {-2, 2}});
    CHECK(real_roots(aff, 21).roots.size() == 44);
    CHECK(imaginary_roots(aff, 21).roots.size() == 20);
    CHECK(coords_of(imaginary_roots(aff, 4)) == std::set<IVec>{{-2, -2}, {-1, -1}, {1, 1}, {2, 2}});
    CHECK(coords_of(imaginary_roots(M({{2, -3}, {-3, 2}}), 2)) == std::set<IVec>{{-1, -1}, {1, 1}});
    CHECK(real_roots(aff, 5).roots.size() == 12);
}

TEST_CASE("root slices match brute-force orbit closure") {
    for (const auto& rows : kSample) {
        auto m = M(rows);
        for (std::int64_t cap : {1, 3, 6, 9}) {
            auto got = coords_of(real_roots(m, cap));
            // Any root of height <= cap is reached by a word of length < 2 cap + 2.
            auto want = oracle::real_roots_by_words(rows, cap, static_cast<std::size_t>(4 * cap + 4));
            CHECK(got == want);
            auto im = coords_of(imaginary_roots(m, cap));
            CHECK(im == oracle::imaginary_roots_by_scan(rows, cap));
        }
    }
}

TEST_CASE("root slice invariants") {
    for (const auto& rows : kSample) {
        auto m = M(rows);
        std::int64_t cap = 8;
        auto re = real_roots(m, cap);
        auto im = imaginary_roots(m, cap);
        std::int64_t band = 0;
        for (std::size_t i = 0; i < m.size; ++i)
            for (std::size_t j = 0; j < m.size; ++j) band = std::max<std::int64_t>(band, -m(i, j));
        for (const auto& r : re.roots) {
            CHECK_FALSE(im.contains(r.coords));
            CHECK(re.contains(ineg(r.coords)));
            CHECK((is_nonneg(r.coords) || is_nonpos(r.coords)));
            // Positive roots other than alpha_i stay positive under s_i.
            if (r.positive() && r.height() <= cap - band) {
                for (std::size_t i = 0; i < m.size; ++i) {
                    if (r.height() == 1 && r.coords[i] == 1) continue;
                    auto s = simple_reflection(m, i, r.coords);
                    CHECK(is_nonneg(s));
                    if (height(s) <= cap) CHECK(re.contains(s));
                }
            }
        }
        for (const auto& r : im.roots) {
            CHECK(im.contains(ineg(r.coords)));
            if (r.height() <= cap - 2 * band * r.height() / std::max<std::int64_t>(1, r.height())) {
                for (std::size_t i = 0; i < m.size; ++i) {
                    auto s = simple_reflection(m, i, r.coords);
                    if (height(s) <= cap) CHECK(im.contains(s));
                }
            }
        }
    }
}

TEST_CASE("slices are sorted by height then coordinates") {
    auto s = real_roots(M({{2, -1}, {-3, 2}}), 10);
    for (std::size_t k = 1; k < s.roots.size(); ++k) {
        const auto& a = s.roots[k - 1];
        const auto& b = s.roots[k];
        CHECK((a.height() < b.height() || (a.height() == b.height() && a.coords < b.coords)));
    }
}

TEST_CASE("Weyl enumeration") {
    CHECK(weyl_elements(M({{2, -1}, {-1, 2}}), 3).size() == 6);
    CHECK(weyl_elements(M({{2, -1}, {-1, 2}}), 10).size() == 6);
    CHECK(weyl_elements(M({{2, -2}, {-1, 2}}), 10).size() == 8);
    CHECK(weyl_elements(M({{2, -1}, {-3, 2}}), 10).size() == 12);
    CHECK(weyl_elements(M({{2, -2}, {-2, 2}}), 4).size() == 9);
    CHECK(weyl_elements(M({{2, -2}, {-2, 2}}), 0).size() == 1);
    CHECK(weyl_order(M({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}})) == std::optional<std::size_t>(24));
    for (const auto& rows : kSample)
        for (std::size_t len : {0, 1, 2, 4, 5}) CHECK(weyl_elements(M(rows), len).size() == oracle::weyl_count_by_words(rows, len));
}

TEST_CASE("Weyl canonical words") {
    for (const auto& rows : kSample) {
        auto m = M(rows);
        auto els = weyl_elements(m, 5);
        std::set<IMat> actions;
        auto re = real_roots(m, 300);
        for (const auto& w : els) {
            CHECK(actions.insert(w.action).second);
            CHECK(action_of_word(m, w.word) == w.action);
            auto c = canonical_element(m, w.word);
            CHECK(c.word == w.word);
            // Word length equals the number of positive roots sent negative.
            std::size_t inversions = 0;
            for (const auto& r : re.roots)
                if (r.positive() && !is_nonneg(weyl_apply(w, r.coords))) ++inversions;
            CHECK(inversions == w.length());
        }
        // Non-reduced words collapse to the canonical one.
        for (std::size_t i = 0; i < m.size; ++i) CHECK(canonical_element(m, {i, i}).word.empty());
    }
    auto a2 = M({{2, -1}, {-1, 2}});
    CHECK(canonical_element(a2, {1, 0, 1}).word == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("sphericity") {
    auto aff = M({{2, -2}, {-2, 2}});
    CHECK(is_spherical(aff, {0}));
    CHECK_FALSE(is_spherical(aff, {0, 1}));
    CHECK(is_spherical(aff, {}));
    CHECK(is_spherical(M({{2, -1}, {-1, 2}}), {0, 1}));
}

TEST_CASE("real root descent and coroot pairing") {
    auto g2 = M({{2, -1}, {-3, 2}});
    auto re = real_roots(g2, 10);
    for (const auto& r : re.roots) {
        auto d = real_root_descent(g2, r.coords);
        IVec e(2, 0);
        e[d.simple] = d.negative ? -1 : 1;
        CHECK(imat_apply(action_of_word(g2, d.word), e) == r.coords);
        CHECK(pairing_with_coroot(g2, r.coords, r.coords) == 2);
        CHECK(root_reflection(g2, r.coords, r.coords) == ineg(r.coords));
    }
    CHECK_FALSE(is_real_root(M({{2, -2}, {-2, 2}}), IVec{1, 1}));
}

TEST_CASE("json round trip and aliases") {
    auto m = *named_matrix("g2");
    auto j = matrix_to_json(m);
    CHECK(j["size"] == 2);
    CHECK(matrix_from_json(j) == m);
    CHECK(matrix_from_json(nlohmann::json::parse("[[2,-1],[-1,2]]")) == *named_matrix("a2"));
    auto s = slice_to_json(real_roots(*named_matrix("a2"), 2));
    CHECK(s.size() == 6);
    CHECK(s[0]["tag"] == "real");
    CHECK(s[0]["height"] == 1);
    CHECK_FALSE(named_matrix("nope").has_value());
}
