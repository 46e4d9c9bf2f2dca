#include <doctest.h>

#include "torsionkit/families.hpp"
#include "torsionkit/reeb.hpp"

using namespace tk;

TEST_CASE("Conley-Zehnder table") {
    CHECK(conley_zehnder(0, 1) == 1);
    CHECK(conley_zehnder(1, 7) == 0);
    CHECK(conley_zehnder(2, 1) == 1);
    CHECK_THROWS(conley_zehnder(3, 1));
    CHECK_THROWS(conley_zehnder(0, 0));
}

TEST_CASE("orbit generation") {
    auto ds = DividedSurface::build(vg_family_spec(2, 2));
    auto model = default_action_model(ds);
    auto orbits = generate_orbits(ds, 2, model);
    CHECK(orbits.size() == 12);
    for (const auto& o : orbits) {
        CHECK(o.action == o.cover * model.at(o.critical_point));
        CHECK(o.action >= 1);
        if (o.eps_index == 1) {
            CHECK(o.kind == OrbitKind::hyperbolic);
            CHECK(o.parity == Parity::odd);
        } else {
            CHECK(o.kind == OrbitKind::elliptic);
            CHECK(o.parity == Parity::even);
        }
    }
    auto single = generate_orbits(ds, 1, model);
    CHECK(single.size() == 6);
    for (const auto& o : single) CHECK(o.action == model.at(o.critical_point));
    auto reg = orbit_registry(orbits);
    CHECK(reg.size() == 12);
}
