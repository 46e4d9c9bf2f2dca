#include "torsionkit/cylinders.hpp"

#include "torsionkit/errors.hpp"

#include <algorithm>

namespace tk {

namespace {

std::map<std::string, std::size_t> orbit_lookup(const std::vector<ReebOrbit>& orbits) {
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < orbits.size(); ++i) m.emplace(orbits[i].name, i);
    return m;
}

}  // namespace

int fredholm_index(const std::vector<ReebOrbit>& orbits, const std::vector<std::size_t>& positive,
                   const std::vector<std::size_t>& negative) {
    // chi = 0 and c_1 = 0 for cylinders in the S^1-invariant trivialization.
    int ind = 0;
    for (auto i : positive) ind += orbits.at(i).cz;
    for (auto i : negative) ind -= orbits.at(i).cz;
    return ind;
}

std::vector<Cylinder> enumerate_cylinders(const DividedSurface& ds, const std::vector<ReebOrbit>& orbits,
                                          int cover_max) {
    auto lookup = orbit_lookup(orbits);
    auto orbit_of = [&](const std::string& crit, int n) {
        auto it = lookup.find(orbit_name(crit, n));
        if (it == lookup.end()) throw ValidationError("", "orbit " + orbit_name(crit, n) + " was not generated");
        return it->second;
    };
    std::vector<Cylinder> out;
    for (const auto& line : enumerate_flow_lines(ds)) {
        if (line.touches_boundary) continue;
        for (int n = 1; n <= cover_max; ++n) {
            Cylinder c;
            c.flow_line = line.id;
            c.cover = n;
            c.sign = line.sign;
            c.h2_class = line.h2_class;
            const std::size_t lo = orbit_of(line.from, n), hi = orbit_of(line.to, n);
            if (line.crosses_gamma) {
                c.positive = {std::min(lo, hi), std::max(lo, hi)};
                if (line.from_index == 0 && line.to_index == 2) c.type = 1;
                else if (line.from_index == 0) c.type = 4;
                else c.type = 5;
            } else if (line.side == Side::minus) {
                c.type = 3;  // min -> saddle: positive end at the minimum
                c.positive = {lo};
                c.negative = {hi};
            } else {
                c.type = 2;  // saddle -> maximum: positive end at the maximum
                c.positive = {hi};
                c.negative = {lo};
            }
            c.fredholm_index = fredholm_index(orbits, c.positive, c.negative);
            out.push_back(std::move(c));
        }
    }
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        Cylinder c;
        c.flow_line = orbits[i].critical_point;
        c.trivial = true;
        c.cover = orbits[i].cover;
        c.positive = {i};
        c.negative = {i};
        c.fredholm_index = 0;
        out.push_back(std::move(c));
    }
    return out;
}

bool automatic_transversality_check(const Cylinder& c, const std::vector<ReebOrbit>& orbits) {
    int even_ends = 0;
    for (auto i : c.positive) even_ends += orbits.at(i).cz % 2 == 0;
    for (auto i : c.negative) even_ends += orbits.at(i).cz % 2 == 0;
    return c.fredholm_index > -2 + even_ends;
}

void check_branched_cover_record(int genus, int positive_ends, int index) {
    int bound = 2 * genus + 2 * (positive_ends - 1);
    if (index < bound)
        throw ValidationError("", "branched cover record has index " + std::to_string(index) + " below the bound " +
                                      std::to_string(bound));
}

CountTable count_index1_positive_only(const std::vector<ReebOrbit>& orbits, const std::vector<Cylinder>& cylinders,
                                      int max_g_plus_r, const Rational& action_bound) {
    CountTable table;
    table.max_ends = max_g_plus_r;
    for (int r = 1; r <= max_g_plus_r; ++r) table.curves_by_ends[r] = 0;
    for (const auto& c : cylinders) {
        if (c.trivial || !c.negative.empty() || c.fredholm_index != 1) continue;
        const int r = static_cast<int>(c.positive.size());
        if (r > max_g_plus_r) continue;
        Rational action = 0;
        std::vector<std::string> key;
        for (auto i : c.positive) {
            action += orbits.at(i).action;
            key.push_back(orbits.at(i).name);
        }
        if (action >= action_bound) continue;
        std::sort(key.begin(), key.end());
        auto& e = table.entries[key];
        e.positive_orbits = key;
        e.total += c.sign;
        e.by_cover[c.cover] += c.sign;
        e.lines.push_back(c.flow_line);
        ++table.curves_by_ends[r];
    }
    return table;
}

void check_class_consistency(const DividedSurface& ds, std::size_t rank) {
    auto lines = enumerate_flow_lines(ds);
    std::map<std::pair<std::string, std::string>, std::map<Exponent, long>> paths;
    for (const auto& a : lines) {
        if (a.touches_boundary || a.from_index != 0 || a.to_index != 1) continue;
        for (const auto& b : lines) {
            if (b.touches_boundary || b.from != a.to || b.to_index != 2) continue;
            Exponent ea = a.h2_class.empty() ? zero_exponent(rank) : a.h2_class;
            Exponent eb = b.h2_class.empty() ? zero_exponent(rank) : b.h2_class;
            paths[{a.from, b.to}][add_exponents(ea, eb)] += a.sign * b.sign;
        }
    }
    for (const auto& [ends, by_class] : paths)
        for (const auto& [cls, count] : by_class)
            if (count != 0)
                throw ValidationError("/surface/crossing_lines", "inconsistent class data: broken paths from " +
                                                                          ends.first + " to " + ends.second +
                                                                          " do not cancel class by class");
}

DifferentialOperator assemble_sft_differential(const DividedSurface& ds, const std::vector<ReebOrbit>& orbits,
                                               const Registry& reg, const std::vector<Cylinder>& cylinders,
                                               const CoefficientConfig& config) {
    DifferentialOperator D;
    D.rank = config.rank;
    for (const auto& c : cylinders) {
        if (!c.h2_class.empty() && c.h2_class.size() != config.rank)
            throw ValidationError("/surface/crossing_lines", "class of " + c.flow_line + " has wrong rank");
    }
    check_class_consistency(ds, config.rank);
    for (const auto& c : cylinders) {
        // Only rigid curves enter D: trivial cylinders and index-2 families do not.
        if (c.trivial || c.fredholm_index != 1) continue;
        const Rational n(c.cover);
        const Rational weight = config.convention == CoverConvention::deck_quotient ? n : Rational(1);
        // n_g / (prod of multiplicities) after summing over the orderings of the ends.
        Rational coeff = weight / (n * n) * c.sign;
        Exponent cls = c.h2_class.empty() ? zero_exponent(config.rank) : c.h2_class;
        OpTerm t;
        t.coefficient = GroupRingElement::monomial(cls, coeff);
        t.hbar = static_cast<int>(c.positive.size()) - 1;
        for (auto i : c.positive) t.inputs.push_back(reg.id_of(orbits.at(i).name));
        for (auto i : c.negative) t.outputs.push_back(reg.id_of(orbits.at(i).name));
        t.origin = c.flow_line + "^" + std::to_string(c.cover);
        D.terms.push_back(std::move(t));
    }
    D.check_well_formed(reg);
    return D;
}

SurfaceModel build_surface_model(DividedSurface ds, int cover_max, const CoefficientConfig& config) {
    SurfaceModel m{std::move(ds), {}, {}, {}, {}, cover_max};
    m.orbits = generate_orbits(m.ds, cover_max, default_action_model(m.ds));
    m.reg = orbit_registry(m.orbits);
    m.cylinders = enumerate_cylinders(m.ds, m.orbits, cover_max);
    m.D = assemble_sft_differential(m.ds, m.orbits, m.reg, m.cylinders, config);
    return m;
}

}  // namespace tk
