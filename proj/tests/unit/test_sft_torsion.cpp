#include <doctest.h>

#include "torsionkit/errors.hpp"
#include "torsionkit/families.hpp"
#include "torsionkit/torsion.hpp"

using namespace tk;

namespace {

PlanarTorsionDescriptor desc(int m, int n, int r) {
    PlanarTorsionDescriptor d;
    d.m = m;
    d.n = n;
    d.r = r;
    return d;
}

SolveBounds bounds(Rational T, int N, int box = 0) {
    SolveBounds b;
    b.action_bound = T;
    b.hbar_bound = N;
    b.exponent_box = box;
    return b;
}

}  // namespace

TEST_CASE("page curve word is a primitive of hbar^k0") {
    for (auto [m, n, r] : std::vector<std::tuple<int, int, int>>{{0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {1, 2, 0},
                                                                  {0, 2, 1}, {2, 1, 1}}) {
        auto d = desc(m, n, r);
        auto pm = planar_torsion_differential(d, LatticeMap::to_zero(0));
        // Independent count: one per binding orbit and boundary torus, two per interior torus, minus one.
        int expected = m + n + 2 * r - 1;
        CHECK(d.k0() == expected);
        CHECK(apply_operator(pm.reg, pm.D, pm.F) == AlgebraElement::hbar(0, expected));
        CHECK(verify_square_zero(pm.reg, pm.D, pm.gens, pm.natural_action_bound, expected + 1).ok);
    }
}

TEST_CASE("planar upper bounds match k0") {
    for (auto [m, n, r] : std::vector<std::tuple<int, int, int>>{{0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {1, 2, 0}}) {
        auto pm = planar_torsion_differential(desc(m, n, r), LatticeMap::to_zero(0));
        auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 3));
        REQUIRE(ub.has_value());
        CHECK(ub->k == m + n - 1);
        CHECK(apply_operator(pm.reg, pm.D, ub->witness) == AlgebraElement::hbar(0, ub->k));
    }
    // Raising the hbar truncation never lowers the least k.
    auto pm = planar_torsion_differential(desc(0, 3, 0), LatticeMap::to_zero(0));
    auto a = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 2));
    auto b = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 4));
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->k == b->k);
    CHECK_FALSE(torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 1)));
}

TEST_CASE("coefficient projections") {
    CoefficientMode tw;
    tw.kind = CoefficientMode::Kind::twisted;
    tw.omega = {Rational(2, 3), Rational(4, 5)};
    auto p = coefficient_projection(tw, 2);
    REQUIRE(p.target_rank() == 1);
    // gcd(2,4)/lcm(3,5) = 2/15, so (2/3, 4/5) rescales to (5, 6).
    CHECK(p.apply({1, 0}) == Exponent{5});
    CHECK(p.apply({0, 1}) == Exponent{6});
    CHECK(p.apply({-6, 5}) == Exponent{0});

    tw.omega = {Rational(0), Rational(0)};
    CHECK(coefficient_projection(tw, 2).target_rank() == 0);
    tw.omega = {Rational(1)};
    CHECK_THROWS_AS(coefficient_projection(tw, 2), ValidationError);

    Registry reg;
    GenId a = reg.add({"a", Parity::even, Rational(1), 1});
    AlgebraElement x(2);
    x.add_term(Key{{a}, {1, 0}, 0}, Rational(1));
    x.add_term(Key{{a}, {0, 1}, 0}, Rational(-1));
    auto full = coefficient_morphism(x, coefficient_projection({CoefficientMode::Kind::full, {}}, 2));
    CHECK(full == x);
    auto flat = coefficient_morphism(x, coefficient_projection({}, 2));
    CHECK(flat.is_zero());
}

TEST_CASE("twisted page class") {
    auto d = desc(0, 2, 0);
    d.lattice_rank = 1;
    d.page_class = {1};
    d.torus_classes = {{0}, {0}};
    auto pm = planar_torsion_differential(d, LatticeMap::identity(1));
    AlgebraElement expected(1);
    expected.add_term(Key{{}, {1}, 1}, Rational(1));
    CHECK(apply_operator(pm.reg, pm.D, pm.F) == expected);
    auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 2, 1));
    REQUIRE(ub);
    CHECK(ub->k == 1);
    // Without room in the exponent box the shifted word is unavailable.
    CHECK_FALSE(torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 2, 0)));

    // A torus class that survives the projection turns on a gradient pair.
    auto d2 = desc(0, 2, 0);
    d2.lattice_rank = 1;
    d2.torus_classes = {{0}, {1}};
    auto pm2 = planar_torsion_differential(d2, LatticeMap::identity(1));
    CHECK(pm2.D.terms.size() == 2);
    CHECK(verify_square_zero(pm2.reg, pm2.D, pm2.gens, pm2.natural_action_bound, 2).ok);
    auto pm3 = planar_torsion_differential(d2, LatticeMap::to_zero(1));
    CHECK(pm3.D.terms.size() == 1);
    // A class on the first torus would need curves this model does not list.
    d2.torus_classes = {{1}, {0}};
    CHECK_THROWS_AS(planar_torsion_differential(d2, LatticeMap::identity(1)), ValidationError);
    CHECK_NOTHROW(planar_torsion_differential(d2, LatticeMap::to_zero(1)));
}

TEST_CASE("surface upper bounds") {
    auto ng = build_surface_model(DividedSurface::build(disconnected_region_spec()), 1, {});
    auto ub = torsion_upper_bound(ng.reg, ng.D, ng.reg.all(), bounds(Rational(5), 3));
    REQUIRE(ub);
    CHECK(ub->k == 1);
    CHECK(apply_operator(ng.reg, ng.D, ub->witness) == AlgebraElement::hbar(0, 1));

    auto sphere = build_surface_model(DividedSurface::build(sphere_spec()), 1, {});
    CHECK_FALSE(torsion_upper_bound(sphere.reg, sphere.D, sphere.reg.all(), bounds(Rational(5), 3)));

    for (auto [g, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
        auto ds = DividedSurface::build(vg_family_spec(g, k));
        auto pieces = planar_descriptors_from_surface(ds);
        REQUIRE(pieces.size() == 1);
        CHECK(pieces[0].n == k);
        auto pm = planar_torsion_differential(pieces[0], LatticeMap::to_zero(0));
        auto b = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, 3));
        REQUIRE(b);
        CHECK(b->k == k - 1);
    }
    CHECK(planar_descriptors_from_surface(DividedSurface::build(disconnected_region_spec())).empty());
    CHECK(planar_descriptors_from_surface(DividedSurface::build(sphere_spec())).empty());
}

TEST_CASE("lower bound certificates") {
    auto v22 = build_surface_model(DividedSurface::build(vg_family_spec(2, 2)), 2, {});
    auto c0 = lower_bound_certificate(v22, 0, bounds(Rational(5), 1));
    CHECK(c0.granted);
    CHECK(c0.solver_crosscheck_failed_to_find_primitive);
    CHECK(c0.gamma_rank == 1);
    CHECK(c0.gamma_count == 2);
    CHECK_FALSE(c0.gamma_configurations.empty());

    auto v33 = build_surface_model(DividedSurface::build(vg_family_spec(3, 3)), 1, {});
    auto c1 = lower_bound_certificate(v33, 1, bounds(Rational(4), 2));
    CHECK(c1.granted);
    CHECK(c1.gamma_rank == 2);
    // Monotone in K: granting K implies granting every smaller K.
    CHECK(lower_bound_certificate(v33, 0, bounds(Rational(4), 2)).granted);

    auto ng = build_surface_model(DividedSurface::build(disconnected_region_spec()), 1, {});
    auto cn = lower_bound_certificate(ng, 1, bounds(Rational(5), 2));
    CHECK_FALSE(cn.granted);
    CHECK(cn.first_nonzero == std::vector<std::string>{"zm1^1", "zp^1"});
    CHECK(abs(cn.first_nonzero_count) == 1);
    CHECK(lower_bound_certificate(ng, 0, bounds(Rational(5), 2)).granted);
    CHECK_THROWS_AS(lower_bound_certificate(ng, -1, bounds(Rational(5), 2)), ValidationError);
}
