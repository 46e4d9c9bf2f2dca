#pragma once

#include "torsionkit/algebra.hpp"
#include "torsionkit/surface.hpp"

#include <map>
#include <string>
#include <vector>

namespace tk {

enum class OrbitKind { elliptic, hyperbolic };

struct ReebOrbit {
    std::string name;  // "<critical point>^<cover>"
    std::string critical_point;
    int cover = 1;
    int cz = 0;
    Parity parity = Parity::even;
    Rational action = 1;
    OrbitKind kind = OrbitKind::elliptic;
    int eps_index = 0;
};

// Conley-Zehnder index of the n-fold cover of the fiber over a critical point
// of h_eps with the given Morse index.
int conley_zehnder(int morse_index, int n);

using ActionModel = std::map<std::string, Rational>;  // base action per critical point

// 1 + delta_z with distinct small deltas, elliptic points above hyperbolic ones
// so every cylinder loses action from its positive to its negative end.
ActionModel default_action_model(const DividedSurface& ds);

std::vector<ReebOrbit> generate_orbits(const DividedSurface& ds, int cover_max, const ActionModel& model);

// Registers one even/odd generator per orbit, in orbit order.
Registry orbit_registry(const std::vector<ReebOrbit>& orbits);

std::string orbit_name(const std::string& critical_point, int cover);

}  // namespace tk
