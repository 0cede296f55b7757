#include <doctest.h>

#include "hovelkit/bordered_apartment.hpp"
#include "hovelkit/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

using namespace hovelkit;

namespace {

std::shared_ptr<const ApartmentModel> model(const std::string& text, std::int64_t cap = 6) {
    return std::make_shared<const ApartmentModel>(parse_model(text, cap));
}

Vec rand_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> a(-6, 6), b(1, 4);
    Vec v;
    for (std::size_t i = 0; i < n; ++i) {
        Q q(a(rng), b(rng));
        q.canonicalize();
        v.push_back(q);
    }
    return v;
}

std::vector<std::size_t> rand_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
    std::vector<std::size_t> w(rng() % (max_len + 1));
    for (auto& i : w) i = rng() % rank;
    return w;
}

// Random J1 contained in J2 contained in I (as sorted index lists).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> nested_types(std::mt19937_64& rng, std::size_t rank) {
    std::vector<std::size_t> j1, j2;
    for (std::size_t i = 0; i < rank; ++i) {
        auto r = rng() % 3;
        if (r >= 1) j2.push_back(i);
        if (r == 2) j1.push_back(i);
    }
    return {j1, j2};
}

}  // namespace

TEST_CASE("projection examples") {
    auto a2 = model("a2,Z");
    BorderedApartment ess(a2, Flavor::Essential);
    Vec x{Q(1, 3), Q(-2)};
    auto p = ess.point(x, trivial_facet(a2->matrix()));
    CHECK(project(ess, p, trivial_facet(a2->matrix())) == p);
    auto c = project(ess, p, fundamental_chamber(a2->matrix()));
    CHECK(c.facade->dim() == 0);
    CHECK(c == ess.point(Vec{Q(5), Q(7)}, fundamental_chamber(a2->matrix())));
    CHECK_THROWS_AS(project(ess, c, trivial_facet(a2->matrix())), NotInStar);
    CHECK(project(ess, p, fundamental_chamber(a2->matrix(), '-')).facade->dim() == 0);
    auto wall = canonical_facet(a2->matrix(), '+', {}, {0});
    CHECK_THROWS_AS(project(ess, ess.point(x, wall), fundamental_chamber(a2->matrix(), '-')), NotInStar);

    auto aff = model("aff_a1,Z");
    BorderedApartment b(aff, Flavor::Essential);
    auto f0 = canonical_facet(aff->matrix(), '+', {}, {0});
    auto q = project(b, b.point(Vec{Q(1, 2), Q(1, 3)}, trivial_facet(aff->matrix())), f0);
    CHECK(q.facade->dim() == 1);
    CHECK(q.facade->quotientBasis.size() == 1);
    // alpha_0 vanishes on F(J = {0}) and is the coordinate that survives the quotient.
    CHECK(q == b.point(Vec{Q(1, 2), Q(-5)}, f0));
    CHECK_FALSE(q == b.point(Vec{Q(1), Q(1, 3)}, f0));
}

TEST_CASE("projections compose along star chains") {
    std::mt19937_64 rng(5);
    for (const std::string name : {"a2,Z", "b2,Z", "aff_a1,Z", "a3,Z"}) {
        auto m = model(name, 4);
        for (Flavor fl : {Flavor::Strong, Flavor::Essential, Flavor::Injective}) {
            BorderedApartment b(m, fl);
            for (int t = 0; t < 9; ++t) {
                auto w = rand_word(rng, m->matrix().size, 4);
                char sign = rng() % 2 ? '+' : '-';
                auto [j1, j2] = nested_types(rng, m->matrix().size);
                auto F2 = canonical_facet(m->matrix(), sign, w, {});
                auto F1 = canonical_facet(m->matrix(), sign, w, j1);
                auto F = canonical_facet(m->matrix(), sign, w, j2);
                auto p = b.point(rand_point(rng, m->dim()), F);
                CHECK(project(b, project(b, p, F1), F2) == project(b, p, F2));
                CHECK(project(b, p, F) == p);
                if (j2.size() > j1.size()) CHECK_THROWS_AS(project(b, project(b, p, F1), F), NotInStar);
            }
        }
    }
}

TEST_CASE("facade root systems") {
    std::mt19937_64 rng(7);
    for (const std::string name : {"a2,Z", "g2,Z", "aff_a1,Z", "a3,Z"}) {
        auto m = model(name, 6);
        const auto& a = m->matrix();
        for (int t = 0; t < 12; ++t) {
            auto [J, unused] = nested_types(rng, a.size);
            (void)unused;
            auto w = rand_word(rng, a.size, 3);
            auto F = canonical_facet(a, '+', w, J);
            auto f = make_facade(m, F, FacadeMode::NE);
            std::set<IVec> got(f.realRoots.begin(), f.realRoots.end());
            for (const auto& r : m->realSlice.roots) {
                auto back = weyl_apply_inverse(a, F.wrep, r.coords);
                bool inJ = true;
                for (std::size_t i = 0; i < a.size; ++i)
                    if (back[i] != 0 && !std::binary_search(J.begin(), J.end(), i)) inJ = false;
                CHECK(got.count(r.coords) == (inJ ? 1u : 0u));
            }
            if (w.empty()) {
                for (const auto& r : m->imagSlice.roots) {
                    bool inJ = true;
                    for (std::size_t i = 0; i < a.size; ++i)
                        if (r.coords[i] != 0 && !std::binary_search(J.begin(), J.end(), i)) inJ = false;
                    CHECK(std::count(f.imagRoots.begin(), f.imagRoots.end(), r.coords) == (inJ ? 1 : 0));
                }
            }
        }
    }
}

TEST_CASE("enclosing commutes with projecting for facade roots") {
    std::mt19937_64 rng(11);
    for (const std::string name : {"a2,Z", "b2,1/2Z", "aff_a1,Z"}) {
        auto m = model(name, 5);
        BorderedApartment b(m, Flavor::Essential);
        for (int t = 0; t < 15; ++t) {
            auto [J, unused] = nested_types(rng, m->matrix().size);
            (void)unused;
            auto F1 = canonical_facet(m->matrix(), '+', rand_word(rng, m->matrix().size, 3), J);
            auto fac = b.facade(F1);
            std::vector<Vec> pts, proj;
            for (int k = 0; k < 3; ++k) {
                pts.push_back(rand_point(rng, m->dim()));
                proj.push_back(fac->canonical(pts.back()));
            }
            for (const auto& root : fac->realRoots)
                CHECK(level_for(*m, Shape::finite_set(pts), root, LevelPolicy::Lambda) ==
                      level_for(*m, Shape::finite_set(proj), root, LevelPolicy::Lambda));
        }
    }
}

TEST_CASE("flavors") {
    std::mt19937_64 rng(13);
    auto m = model("aff_a1,Z");
    BorderedApartment ess(m, Flavor::Essential), inj(m, Flavor::Injective), strong(m, Flavor::Strong);
    CHECK(inj.main_facade()->mode == FacadeMode::NE);
    CHECK(ess.main_facade()->mode == FacadeMode::E);
    CHECK(strong.facade(fundamental_chamber(m->matrix()))->mode == FacadeMode::NE);
    // V = V^q is essential, so the essential and injective bordered apartments agree.
    for (int t = 0; t < 30; ++t) {
        auto [J, unused] = nested_types(rng, 2);
        (void)unused;
        auto F = canonical_facet(m->matrix(), rng() % 2 ? '+' : '-', rand_word(rng, 2, 4), J);
        Vec x = rand_point(rng, 2);
        auto p = ess.point(x, F), q = inj.point(x, F);
        CHECK(p.rep == q.rep);
        CHECK(p.facade->dim() == q.facade->dim());
    }
    // A non-essential realization keeps its main facade bigger in the injective flavor.
    auto xl = std::make_shared<const ApartmentModel>(
        make_model(build_realization(minimal_adjoint_rgs(m->matrix()), RealizationKind::XL), LambdaSet::discrete(1), 4));
    REQUIRE(xl->real.V0basis.size() > 0);
    BorderedApartment ex(xl, Flavor::Essential), ix(xl, Flavor::Injective);
    CHECK(ix.main_facade()->dim() == xl->dim());
    CHECK(ex.main_facade()->dim() == xl->dim() - xl->real.V0basis.size());
}

TEST_CASE("wall traces") {
    std::mt19937_64 rng(17);
    for (const std::string name : {"a2,Z", "aff_a1,Z", "g2,Z"}) {
        auto m = model(name, 5);
        BorderedApartment b(m, Flavor::Strong);
        for (int t = 0; t < 10; ++t) {
            auto [J, unused] = nested_types(rng, 2);
            (void)unused;
            auto F = canonical_facet(m->matrix(), rng() % 2 ? '+' : '-', rand_word(rng, 2, 3), J);
            auto fac = b.facade(F);
            Vec v = facet_interior_point(m->real, F);
            Vec x = rand_point(rng, 2);
            for (const auto& r : m->realSlice.roots) {
                Q sv = m->real.eval_root(r.coords, v);
                auto wall = wall_trace(*fac, r.coords, 1);
                auto half = wall_trace(*fac, r.coords, 1, true);
                if (sgn(sv) == 0) {
                    CHECK(wall.kind == TraceKind::Projected);
                    CHECK(half.kind == TraceKind::Projected);
                } else {
                    CHECK(wall.kind == TraceKind::Empty);
                    CHECK(half.kind == (sgn(sv) > 0 ? TraceKind::Full : TraceKind::Empty));
                    // Far along the sector face the half-apartment eventually contains or misses it.
                    Vec far = add(x, scale(Q(1000), v));
                    CHECK(root_half_space(*m, r.coords, 1).contains(far) == (sgn(sv) > 0));
                }
            }
        }
    }
}

TEST_CASE("sector-face germs and facade points") {
    auto m = model("a2,Z");
    BorderedApartment b(m, Flavor::Essential);
    auto F = canonical_facet(m->matrix(), '+', {1}, {0});
    auto g = Shape::sector_face_germ(Vec{Q(1, 2), Q(3)}, F);
    auto p = germ_to_point(b, g);
    CHECK(same_germ(m->real, point_to_germ(b, p), g));
    CHECK(germ_to_point(b, point_to_germ(b, p)) == p);
    Vec shift = facet_interior_point(m->real, F);
    auto g2 = Shape::sector_face_germ(add(g.points[0], scale(Q(-7, 3), shift)), F);
    CHECK(germ_to_point(b, g2) == p);
    auto g3 = Shape::sector_face_germ(Vec{Q(1, 2), Q(4)}, F);
    CHECK_FALSE(germ_to_point(b, g3) == p);
    auto triv = Shape::sector_face_germ(Vec{Q(1), Q(2)}, trivial_facet(m->matrix()));
    auto pt = germ_to_point(b, triv);
    CHECK(pt.facade == b.main_facade());
    CHECK(pt.rep == Vec{Q(1), Q(2)});
    BorderedApartment s(m, Flavor::Strong);
    CHECK_THROWS_AS(germ_to_point(s, g), WrongFlavor);
    CHECK_THROWS_AS(germ_to_point(b, Shape::point(Vec{Q(0), Q(0)})), UnsupportedShape);
    std::mt19937_64 rng(19);
    for (int t = 0; t < 50; ++t) {
        auto [J, unused] = nested_types(rng, 2);
        (void)unused;
        auto D = canonical_facet(m->matrix(), rng() % 2 ? '+' : '-', rand_word(rng, 2, 3), J);
        auto q = b.point(rand_point(rng, 2), D);
        CHECK(germ_to_point(b, point_to_germ(b, q)) == q);
    }
}

TEST_CASE("chimney germs and closed facets in facades") {
    auto a2 = model("a2,Z");
    BorderedApartment b(a2, Flavor::Essential);
    auto base = Shape::local_facet(Vec{Q(1, 2), Q(1, 3)}, canonical_facet(a2->matrix(), '+', {}, {0}));
    auto self = chimney_germ_to_closed_facet(b, Shape::chimney_germ(base, trivial_facet(a2->matrix())));
    CHECK(self.facade == b.main_facade());
    CHECK(same_region(self.halfSpaces, enclosure(*a2, {}, base).halfSpaces));
    CHECK(self.sphericalInFacade == std::optional<bool>(true));
    CHECK_FALSE(self.chamberInFacade);

    auto splayed = chimney_germ_to_closed_facet(b, Shape::chimney_germ(base, fundamental_chamber(a2->matrix())));
    CHECK(splayed.facadeSpherical);
    CHECK(splayed.facade->dim() == 0);
    CHECK(splayed.certificates.empty());
    CHECK(splayed.chamberInFacade);

    auto wall_dir = canonical_facet(a2->matrix(), '+', {}, {1});
    auto mid = chimney_germ_to_closed_facet(b, Shape::chimney_germ(Shape::point(Vec{Q(1, 2), Q(0)}), wall_dir));
    CHECK(mid.facadeSpherical);
    CHECK(mid.facade->dim() == 1);
    REQUIRE(mid.certificates.size() == 2);  // the roots +-alpha_2
    CHECK(describe_region(mid.halfSpaces, 2).size() > 0);

    auto aff = model("aff_a1,Z");
    BorderedApartment ba(aff, Flavor::Essential);
    auto solid = chimney_germ_to_closed_facet(
        ba, Shape::chimney_germ(Shape::local_facet(Vec{Q(1, 3), Q(1, 4)}, fundamental_chamber(aff->matrix())),
                                trivial_facet(aff->matrix())));
    CHECK_FALSE(solid.facadeSpherical);
    CHECK(solid.sphericalInFacade == std::optional<bool>(true));
    CHECK(solid.chamberInFacade);
    CHECK_THROWS_AS(chimney_germ_to_closed_facet(ba, Shape::point(Vec{Q(0), Q(0)})), UnsupportedShape);
}

TEST_CASE("facade closure is indexed by the star") {
    auto a2 = model("a2,Z");
    BorderedApartment b(a2, Flavor::Essential);
    auto origin = facade_closure(b, trivial_facet(a2->matrix()));
    CHECK(origin.size() == 13);
    auto wall = facade_closure(b, canonical_facet(a2->matrix(), '+', {}, {0}));
    CHECK(wall.size() == 3);
    for (const auto& f : wall) CHECK(f->dim() <= 1);
}

TEST_CASE("facade cache under concurrent use") {
    auto m = model("aff_a1,Z", 5);
    BorderedApartment b(m, Flavor::Injective);
    std::vector<VectorialFacet> dirs;
    for (std::size_t len = 0; len < 4; ++len)
        for (const auto& w : weyl_elements(m->matrix(), len))
            if (w.length() == len) dirs.push_back(canonical_facet(m->matrix(), '+', w.word, {}));
    std::vector<std::vector<const Facade*>> seen(4);
    std::vector<std::thread> threads;
    for (int k = 0; k < 4; ++k)
        threads.emplace_back([&, k] {
            for (const auto& d : dirs) seen[k].push_back(b.facade(d).get());
        });
    for (auto& t : threads) t.join();
    for (int k = 1; k < 4; ++k) CHECK(seen[k] == seen[0]);
    CHECK(b.cached_facades() == dirs.size());
}

TEST_CASE("facade point json") {
    auto m = model("aff_a1,Z");
    BorderedApartment b(m, Flavor::Essential);
    auto p = b.point(Vec{Q(1, 2), Q(-3)}, canonical_facet(m->matrix(), '-', {0, 1}, {1}));
    auto j = facade_point_to_json(p);
    CHECK(j["mode"] == "e");
    CHECK(facade_point_from_json(b, j) == p);
    BorderedApartment s(m, Flavor::Strong);
    CHECK_THROWS_AS(facade_point_from_json(s, j), ParseError);
}
