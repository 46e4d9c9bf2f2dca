#include "torsionkit/reeb.hpp"

#include "torsionkit/errors.hpp"

#include <stdexcept>

namespace tk {

int conley_zehnder(int morse_index, int n) {
    if (n < 1) throw std::invalid_argument("cover multiplicity must be positive");
    switch (morse_index) {
        case 0:
        case 2: return 1;
        case 1: return 0;
        default: throw std::invalid_argument("Morse index must be 0, 1 or 2");
    }
}

std::string orbit_name(const std::string& critical_point, int cover) {
    return critical_point + "^" + std::to_string(cover);
}

ActionModel default_action_model(const DividedSurface& ds) {
    const auto& crit = ds.critical_points();
    const long N = static_cast<long>(crit.size());
    const Rational denom(20 * (2 * N + 1));
    ActionModel model;
    long hyper = 0, ell = 0;
    for (const auto& p : crit) {
        long slot = p.eps_index == 1 ? ++hyper : N + ++ell;
        model[p.id] = 1 + Rational(slot) / denom;
    }
    for (const auto& [id, a] : ds.spec().base_actions) {
        if (!ds.is_critical(id)) throw ValidationError("/surface/base_actions/" + id, "unknown critical point");
        if (a <= 0) throw ValidationError("/surface/base_actions/" + id, "action must be positive");
        model[id] = a;
    }
    return model;
}

std::vector<ReebOrbit> generate_orbits(const DividedSurface& ds, int cover_max, const ActionModel& model) {
    if (cover_max < 1) throw ValidationError("/truncation/cover_max", "cover_max must be at least 1");
    std::vector<ReebOrbit> out;
    for (const auto& p : ds.critical_points()) {
        for (int n = 1; n <= cover_max; ++n) {
            ReebOrbit o;
            o.name = orbit_name(p.id, n);
            o.critical_point = p.id;
            o.cover = n;
            o.cz = conley_zehnder(p.eps_index, n);
            o.parity = (o.cz + 1) % 2 == 0 ? Parity::even : Parity::odd;
            o.kind = p.eps_index == 1 ? OrbitKind::hyperbolic : OrbitKind::elliptic;
            o.action = Rational(n) * model.at(p.id);
            o.eps_index = p.eps_index;
            // Every orbit is good here: the CZ parity does not depend on the cover.
            if (conley_zehnder(p.eps_index, 1) % 2 != o.cz % 2) throw InvariantBreach("bad orbit generated");
            out.push_back(std::move(o));
        }
    }
    return out;
}

Registry orbit_registry(const std::vector<ReebOrbit>& orbits) {
    Registry reg;
    for (const auto& o : orbits) reg.add(Generator{o.name, o.parity, o.action, o.cover});
    return reg;
}

}  // namespace tk
