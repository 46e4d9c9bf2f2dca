#include <doctest.h>

#include "torsionkit/errors.hpp"
#include "torsionkit/operator.hpp"

#include <random>

using namespace tk;

namespace {

Registry small_registry() {
    Registry reg;
    reg.add({"a", Parity::odd, Rational(1)});
    reg.add({"b", Parity::odd, Rational(11, 10)});
    reg.add({"e", Parity::even, Rational(6, 5)});
    reg.add({"f", Parity::even, Rational(13, 10)});
    return reg;
}

OpTerm term(std::vector<GenId> out, std::vector<GenId> in, int h = 0, Rational c = 1, std::size_t rank = 0) {
    return OpTerm{GroupRingElement::constant(rank, c), h, std::move(out), std::move(in), 0, ""};
}

}  // namespace

TEST_CASE("Koszul normal form") {
    Registry reg = small_registry();
    const GenId a = 0, b = 1, e = 2;
    auto ab = AlgebraElement::word(reg, {a, b}, 0);
    auto ba = AlgebraElement::word(reg, {b, a}, 0);
    CHECK(ba == ab.scaled(-1));
    CHECK(AlgebraElement::word(reg, {a, a}, 0).is_zero());
    CHECK(AlgebraElement::word(reg, {e, a}, 0) == AlgebraElement::word(reg, {a, e}, 0));
    CHECK((ab + ab) == ab.scaled(2));
    CHECK(AlgebraElement::word(reg, {e, e}, 0).terms().size() == 1);

    std::vector<Monomial> raw{{{b, a}, GroupRingElement::constant(0, 1), 0}, {{a, b}, GroupRingElement::constant(0, 1), 0}};
    CHECK(normalize(reg, 0, raw).is_zero());
    auto n1 = normalize(reg, 0, {{{b, e, a}, GroupRingElement::constant(0, 3), 2}});
    CHECK(normalize(reg, 0, {{{a, e, b}, GroupRingElement::constant(0, 3), 2}}) == n1.scaled(-1));
    CHECK_THROWS(AlgebraElement::word(reg, {7}, 0));
}

TEST_CASE("apply_operator conventions") {
    Registry reg = small_registry();
    const GenId a = 0, b = 1, e = 2, f = 3;
    DifferentialOperator D;
    D.terms.push_back(term({}, {a, b}, 1));
    // hbar d/dq_a d/dq_b (q_a q_b): d_b first gives -q_a, then d_a gives -1.
    CHECK(apply_operator(reg, D, AlgebraElement::word(reg, {a, b}, 0)) == AlgebraElement::hbar(0, 1, -1));
    CHECK(apply_operator(reg, D, AlgebraElement::one(0)).is_zero());

    DifferentialOperator E;
    E.terms.push_back(term({a}, {e}));
    CHECK(apply_operator(reg, E, AlgebraElement::word(reg, {b}, 0)).is_zero());
    // Even derivative on a square produces the factor 2.
    CHECK(apply_operator(reg, E, AlgebraElement::word(reg, {e, e}, 0)) ==
          AlgebraElement::word(reg, {a, e}, 0).scaled(2));
    // Odd derivative passing an odd letter picks up a sign.
    DifferentialOperator F;
    F.terms.push_back(term({e}, {b}));
    CHECK(apply_operator(reg, F, AlgebraElement::word(reg, {a, b}, 0)) ==
          AlgebraElement::word(reg, {a, e}, 0).scaled(-1));
    // Half of a doubled even derivative removes a square exactly.
    DifferentialOperator G;
    G.terms.push_back(term({}, {a, f, f}, 0, Rational(1, 2)));
    CHECK(apply_operator(reg, G, AlgebraElement::word(reg, {a, f, f}, 0)) == AlgebraElement::one(0));
}

TEST_CASE("bracket basics") {
    Registry reg = small_registry();
    const GenId a = 0, b = 1, e = 2;
    DifferentialOperator first;
    first.terms.push_back(term({a}, {e}));
    auto x = AlgebraElement::word(reg, {e, b}, 0);
    auto y = AlgebraElement::word(reg, {e}, 0);
    CHECK(bracket(reg, first, x, y).is_zero());

    DifferentialOperator second;
    second.terms.push_back(term({}, {a, b}, 1));
    // [q_a,q_b] = D(q_a q_b) - 0 - 0 = -hbar under the derivative convention.
    CHECK(bracket(reg, second, AlgebraElement::word(reg, {a}, 0), AlgebraElement::word(reg, {b}, 0)) ==
          AlgebraElement::hbar(0, 1, -1));
}

namespace {

// Synthetic square-zero operator: pure derivative terms plus one
// first-order term whose output never gets differentiated.
struct Synthetic {
    Registry reg;
    DifferentialOperator D;
    std::vector<GenId> gens;
};

Synthetic synthetic() {
    Synthetic s;
    GenId a = s.reg.add({"a", Parity::odd, Rational(1)});
    GenId b = s.reg.add({"b", Parity::even, Rational(1)});
    GenId c = s.reg.add({"c", Parity::odd, Rational(1)});
    GenId d = s.reg.add({"d", Parity::even, Rational(1)});
    GenId g = s.reg.add({"g", Parity::odd, Rational(1, 2)});
    GenId h = s.reg.add({"h", Parity::even, Rational(1)});
    s.D.terms.push_back(term({}, {a}));
    s.D.terms.push_back(term({}, {b, c}, 1));
    s.D.terms.push_back(term({}, {b, d, c}, 2, Rational(1, 3)));
    s.D.terms.push_back(term({g}, {h}, 0, Rational(2)));
    s.gens = s.reg.all();
    return s;
}

AlgebraElement random_element(const Registry& reg, std::mt19937& rng, int terms, int max_len, int max_h) {
    std::uniform_int_distribution<std::size_t> pick(0, reg.size() - 1);
    std::uniform_int_distribution<int> len(0, max_len), hb(0, max_h), co(-3, 3);
    AlgebraElement x(0);
    for (int i = 0; i < terms; ++i) {
        std::vector<GenId> w;
        int L = len(rng);
        for (int j = 0; j < L; ++j) w.push_back(pick(rng));
        x += AlgebraElement::word(reg, w, Rational(co(rng)), Exponent{}, hb(rng));
    }
    return x;
}

}  // namespace

TEST_CASE("square zero and mutation") {
    auto s = synthetic();
    s.D.check_well_formed(s.reg);
    CHECK(verify_square_zero(s.reg, s.D, s.gens, Rational(5), 4).ok);

    DifferentialOperator single;
    single.terms.push_back(term({}, {0}));
    CHECK(verify_square_zero(s.reg, single, s.gens, Rational(4), 3).ok);

    // q_g d/dq_h together with d/dq_g no longer squares to zero.
    DifferentialOperator broken = s.D;
    broken.terms.push_back(term({}, {4, 1}, 1));
    auto res = verify_square_zero(s.reg, broken, s.gens, Rational(5), 4);
    CHECK_FALSE(res.ok);
    CHECK(res.witness.has_value());

    DifferentialOperator up;
    up.terms.push_back(term({2, 3}, {0}));
    CHECK_THROWS_AS(verify_square_zero(s.reg, up, s.gens, Rational(3), 2), SolverError);
}

TEST_CASE("derivation identity for the bracket on random inputs") {
    auto s = synthetic();
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto x = random_element(s.reg, rng, 2, 3, 1).split_parity(s.reg).second;
        auto y = random_element(s.reg, rng, 2, 3, 1);
        if (trial % 2) x = random_element(s.reg, rng, 2, 3, 1).split_parity(s.reg).first;
        auto lhs = apply_operator(s.reg, s.D, bracket(s.reg, s.D, x, y));
        auto dx = apply_operator(s.reg, s.D, x);
        auto dy = apply_operator(s.reg, s.D, y);
        int sx = x.parity(s.reg) == Parity::odd ? -1 : 1;
        auto rhs = bracket(s.reg, s.D, dx, y).scaled(-1) - bracket(s.reg, s.D, x, dy).scaled(sx);
        CHECK(lhs == rhs);
        // Bilinearity in the first slot.
        auto z = random_element(s.reg, rng, 2, 2, 1);
        CHECK(bracket(s.reg, s.D, x + z, y) == bracket(s.reg, s.D, x, y) + bracket(s.reg, s.D, z, y));
        // Parity of D(x) is |x|+1.
        if (!dx.is_zero()) CHECK(dx.parity(s.reg) == (x.parity(s.reg).value() + Parity::odd));
        // Deviation of an operator whose higher terms carry hbar is O(hbar).
        auto br = bracket(s.reg, s.D, x, y);
        if (!br.is_zero()) CHECK(*br.min_hbar() >= 1);
    }
}

TEST_CASE("solve_primitive") {
    Registry reg;
    GenId h = reg.add({"h", Parity::odd, Rational(1)});
    GenId e = reg.add({"e", Parity::even, Rational(11, 10)});
    DifferentialOperator D;
    D.terms.push_back(term({}, {h, e}, 1));
    auto sol = solve_primitive(reg, D, reg.all(), AlgebraElement::hbar(0, 1), {Rational(3), 2, 0, {}});
    REQUIRE(sol.primitive);
    CHECK(*sol.primitive == AlgebraElement::word(reg, {h, e}, 0));

    auto zero = solve_primitive(reg, D, reg.all(), AlgebraElement(0), {Rational(3), 2, 0, {}});
    REQUIRE(zero.primitive);
    CHECK(zero.primitive->is_zero());

    auto none = solve_primitive(reg, D, reg.all(), AlgebraElement::one(0), {Rational(3), 2, 0, {}});
    CHECK_FALSE(none.primitive);

    // Mod hbar^1 the target hbar is already zero.
    auto trivial = solve_primitive(reg, D, reg.all(), AlgebraElement::hbar(0, 1), {Rational(3), 2, 0, 1});
    CHECK(trivial.primitive);
}

TEST_CASE("solve_primitive over a group ring box") {
    Registry reg;
    GenId h = reg.add({"h", Parity::odd, Rational(1)});
    GenId e = reg.add({"e", Parity::even, Rational(11, 10)});
    DifferentialOperator D;
    D.rank = 1;
    D.terms.push_back(OpTerm{GroupRingElement::monomial({2}), 1, {}, {h, e}, 0, ""});
    auto sol = solve_primitive(reg, D, reg.all(), AlgebraElement::hbar(1, 1), {Rational(3), 2, 3, {}});
    REQUIRE(sol.primitive);
    CHECK(*sol.primitive == AlgebraElement::word(reg, {h, e}, Rational(1), Exponent{-2}));
    CHECK(sol.box_limited);
    auto narrow = solve_primitive(reg, D, reg.all(), AlgebraElement::hbar(1, 1), {Rational(3), 2, 1, {}});
    CHECK_FALSE(narrow.primitive);
    CHECK_THROWS_AS(solve_primitive(reg, D, reg.all(), AlgebraElement::word(reg, {}, Rational(1), Exponent{5}, 1),
                                    {Rational(3), 2, 3, {}}),
                    SolverError);
}

TEST_CASE("primitive_via_bracket on random closed elements") {
    auto s = synthetic();
    auto P = AlgebraElement::word(s.reg, {0}, 0);
    CHECK(primitive_via_bracket(s.reg, s.D, P, AlgebraElement::one(0), 4) == P);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto X = random_element(s.reg, rng, 3, 4, 2);
        auto Q = apply_operator(s.reg, s.D, X).truncated(4) + AlgebraElement::hbar(0, trial % 4);
        auto R = primitive_via_bracket(s.reg, s.D, P, Q, 4);
        CHECK((apply_operator(s.reg, s.D, R) - Q).truncated(4).is_zero());
    }
}
