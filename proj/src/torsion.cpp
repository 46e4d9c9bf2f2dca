#include "torsionkit/torsion.hpp"

#include "torsionkit/errors.hpp"

#include <functional>
#include <numeric>

namespace tk {

LatticeMap coefficient_projection(const CoefficientMode& mode, std::size_t source_rank) {
    switch (mode.kind) {
        case CoefficientMode::Kind::untwisted: return LatticeMap::to_zero(source_rank);
        case CoefficientMode::Kind::full: return LatticeMap::identity(source_rank);
        case CoefficientMode::Kind::twisted: break;
    }
    if (mode.omega.size() != source_rank)
        throw ValidationError("/coefficients/omega", "omega has length " + std::to_string(mode.omega.size()) +
                                                         " but the lattice has rank " + std::to_string(source_rank));
    // The image of Z^rank under omega is g*Z with g = gcd(numerators)/lcm(denominators).
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& w : mode.omega) {
        if (w == 0) continue;
        num_gcd = gcd(num_gcd, w.get_num());
        den_lcm = lcm(den_lcm, w.get_den());
    }
    LatticeMap map;
    map.source_rank = source_rank;
    if (num_gcd == 0) return map;
    Rational g(num_gcd, den_lcm);
    std::vector<long> row;
    for (const auto& w : mode.omega) {
        Rational v = w / g;
        if (v.get_den() != 1) throw InvariantBreach("omega projection is not integral");
        row.push_back(v.get_num().get_si());
    }
    map.rows.push_back(row);
    return map;
}

AlgebraElement coefficient_morphism(const AlgebraElement& x, const LatticeMap& projection) {
    if (x.rank() != projection.source_rank) throw ValidationError("", "coefficient morphism: rank mismatch");
    AlgebraElement out(projection.target_rank());
    for (const auto& [k, c] : x.terms()) out.add_term(Key{k.gens, projection.apply(k.exp), k.hbar}, c);
    return out;
}

PlanarModel planar_torsion_differential(const PlanarTorsionDescriptor& desc, const LatticeMap& projection) {
    if (desc.n < 1) throw ValidationError("/planar_torsion/n", "need at least one boundary torus (n >= 1)");
    if (desc.m < 0 || desc.r < 0) throw ValidationError("/planar_torsion", "m and r must be nonnegative");
    const int tori = desc.n + desc.r;
    if (!desc.torus_classes.empty() && static_cast<int>(desc.torus_classes.size()) != tori)
        throw ValidationError("/planar_torsion/torus_classes", "need one class per torus (n + r)");
    for (const auto& t : desc.torus_classes)
        if (t.size() != desc.lattice_rank)
            throw ValidationError("/planar_torsion/torus_classes", "class length differs from lattice_rank");
    if (!desc.page_class.empty() && desc.page_class.size() != desc.lattice_rank)
        throw ValidationError("/planar_torsion/page_class", "class length differs from lattice_rank");
    if (projection.source_rank != desc.lattice_rank)
        throw ValidationError("/coefficients", "projection does not match the descriptor lattice");

    PlanarModel pm;
    pm.desc = desc;
    const std::size_t rank = projection.target_rank();
    pm.D.rank = rank;
    const Rational step(1, 256);
    std::vector<GenId> binding, ell, hyp;
    for (int i = 1; i <= desc.m; ++i)
        binding.push_back(pm.reg.add({"b" + std::to_string(i), Parity::even, 1 + step * (2 * tori + i), 1}));
    for (int i = 1; i <= tori; ++i) {
        ell.push_back(pm.reg.add({"e" + std::to_string(i), Parity::even, 1 + step * (2 * i), 1}));
        hyp.push_back(pm.reg.add({"h" + std::to_string(i), Parity::odd, 1 + step * (2 * i - 1), 1}));
    }
    pm.gens = pm.reg.all();

    auto projected = [&](const Exponent& e) { return e.empty() ? zero_exponent(rank) : projection.apply(e); };

    // Page curve: all positive ends, hbar^{k0}, a factor 1/2 per doubled end.
    OpTerm page;
    page.coefficient = GroupRingElement::monomial(projected(desc.page_class), Rational(1, 1u << desc.r));
    page.hbar = desc.k0();
    page.inputs.push_back(hyp[0]);
    for (GenId b : binding) page.inputs.push_back(b);
    for (int i = 1; i < desc.n; ++i) page.inputs.push_back(ell[static_cast<std::size_t>(i)]);
    for (int i = desc.n; i < tori; ++i) {
        page.inputs.push_back(ell[static_cast<std::size_t>(i)]);
        page.inputs.push_back(ell[static_cast<std::size_t>(i)]);
    }
    page.origin = "page";
    pm.D.terms.push_back(page);

    // Gradient cylinder pairs on each Morse-Bott torus.
    for (int i = 0; i < tori; ++i) {
        Exponent cls = desc.torus_classes.empty() ? Exponent{} : desc.torus_classes[static_cast<std::size_t>(i)];
        GroupRingElement c = GroupRingElement::monomial(projected(cls)) - GroupRingElement::constant(rank, 1);
        if (c.is_zero()) continue;
        // The page ends at h1, so the curves that would cancel D^2(e1 ...) are not part of this model.
        if (i == 0)
            throw ValidationError("/planar_torsion/torus_classes/0",
                                  "the torus carrying the hyperbolic page end must have zero class under the "
                                  "chosen coefficients");
        pm.D.terms.push_back(OpTerm{c, 0, {hyp[static_cast<std::size_t>(i)]}, {ell[static_cast<std::size_t>(i)]}, 0,
                                    "gradient T" + std::to_string(i + 1)});
    }
    pm.D.check_well_formed(pm.reg);

    std::vector<GenId> f = binding;
    f.push_back(hyp[0]);
    for (int i = 1; i < desc.n; ++i) f.push_back(ell[static_cast<std::size_t>(i)]);
    for (int i = desc.n; i < tori; ++i) {
        f.push_back(ell[static_cast<std::size_t>(i)]);
        f.push_back(ell[static_cast<std::size_t>(i)]);
    }
    pm.F = AlgebraElement::word(pm.reg, f, rank);
    pm.natural_action_bound = word_action(pm.reg, f) + 1;
    return pm;
}

std::optional<TorsionBound> torsion_upper_bound(const Registry& reg, const DifferentialOperator& D,
                                                const std::vector<GenId>& gens, const SolveBounds& bounds) {
    auto sq = verify_square_zero(reg, D, gens, bounds.action_bound, bounds.hbar_bound);
    if (!sq.ok) throw InvariantBreach("operator does not square to zero on " + sq.witness->str(reg));

    // Words read off from curves without negative ends often hit hbar^k exactly.
    std::map<int, AlgebraElement> candidates;
    for (const auto& t : D.terms) {
        if (!t.outputs.empty()) continue;
        AlgebraElement w = AlgebraElement::word(reg, t.inputs, D.rank);
        if (w.is_zero() || w.max_action(reg) >= bounds.action_bound) continue;
        AlgebraElement img = apply_operator(reg, D, w);
        if (img.terms().size() != 1) continue;
        const auto& [key, c] = *img.terms().begin();
        if (!key.gens.empty()) continue;
        bool trivial = true;
        for (long e : key.exp) trivial = trivial && e == 0;
        if (!trivial || candidates.count(key.hbar)) continue;
        candidates.emplace(key.hbar, w.scaled(1 / c));
    }

    for (int k = 0; k <= bounds.hbar_bound; ++k) {
        auto target = AlgebraElement::hbar(D.rank, k);
        auto sol = solve_primitive(reg, D, gens, target, bounds);
        if (!sol.primitive) continue;
        auto c = candidates.find(k);
        if (c != candidates.end()) return TorsionBound{k, c->second, "curve monomial"};
        return TorsionBound{k, *sol.primitive, "linear solve"};
    }
    return std::nullopt;
}

namespace {

void gamma_configurations(const DividedSurface& ds, int max_ends, int cover_max,
                          std::vector<GammaConfiguration>& out) {
    std::vector<std::pair<std::string, int>> types;
    for (const auto& g : ds.spec().gammas)
        for (int m = 1; m <= cover_max; ++m) types.emplace_back(g.id, m);
    std::vector<std::pair<std::string, int>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!cur.empty()) {
            std::map<std::string, int> agg;
            for (const auto& [id, m] : cur) agg[id] += m;
            GammaConfiguration cfg;
            cfg.ends = cur;
            cfg.null_homologous = null_homology_check(ds, {agg.begin(), agg.end()});
            out.push_back(std::move(cfg));
        }
        if (static_cast<int>(cur.size()) == max_ends) return;
        for (std::size_t i = start; i < types.size(); ++i) {
            cur.push_back(types[i]);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

LowerBoundCertificate lower_bound_certificate(const SurfaceModel& model, int K, const SolveBounds& bounds) {
    if (K < 0) throw ValidationError("", "K must be nonnegative");
    LowerBoundCertificate cert;
    cert.K = K;
    cert.action_bound = bounds.action_bound;
    // Every model curve has genus 0, so g + r <= K + 1 means r <= K + 1.
    cert.counts = count_index1_positive_only(model.orbits, model.cylinders, K + 1, bounds.action_bound);
    cert.granted = true;
    for (const auto& [key, entry] : cert.counts.entries) {
        if (entry.total != 0) {
            cert.granted = false;
            cert.first_nonzero = key;
            cert.first_nonzero_count = entry.total;
            break;
        }
    }
    gamma_configurations(model.ds, K + 1, model.cover_max, cert.gamma_configurations);
    cert.gamma_rank = gamma_class_rank(model.ds);
    cert.gamma_count = model.ds.spec().gammas.size();

    SolveBounds sb = bounds;
    sb.modulus = K + 1;
    auto sol = solve_primitive(model.reg, model.D, model.reg.all(), AlgebraElement::hbar(model.D.rank, K), sb);
    cert.solver_crosscheck_failed_to_find_primitive = !sol.primitive.has_value();
    if (cert.granted && sol.primitive)
        throw InvariantBreach("vanishing-count certificate granted but a primitive of hbar^" + std::to_string(K) +
                              " + O(hbar^" + std::to_string(K + 1) + ") exists");
    return cert;
}

std::vector<PlanarTorsionDescriptor> planar_descriptors_from_surface(const DividedSurface& ds) {
    const auto& plus = ds.spec().plus.components;
    const auto& minus = ds.spec().minus.components;
    std::vector<PlanarTorsionDescriptor> out;
    // Two pieces of the same page type glue to a symmetric summed open book.
    if (plus.size() == 1 && minus.size() == 1 && plus[0].genus == minus[0].genus &&
        plus[0].boundary.size() == minus[0].boundary.size())
        return out;
    for (Side side : {Side::minus, Side::plus}) {
        const auto& comps = side == Side::plus ? plus : minus;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (comps[c].genus != 0) continue;
            PlanarTorsionDescriptor d;
            d.m = 0;
            d.n = static_cast<int>(comps[c].boundary.size());
            d.r = 0;
            d.origin = side_name(side) + " component " + std::to_string(c);
            out.push_back(std::move(d));
        }
    }
    return out;
}

}  // namespace tk
