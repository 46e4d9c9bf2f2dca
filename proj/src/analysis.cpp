#include "torsionkit/analysis.hpp"

#include "torsionkit/errors.hpp"
#include "torsionkit/families.hpp"

#include <random>
#include <sstream>

namespace tk {

namespace {

constexpr int report_version = 1;

struct Effective {
    Truncation t;
    CoefficientMode coeff;
    std::optional<std::size_t> full_rank;
};

Effective effective(const Document& doc, const RunOptions& o) {
    Effective e{doc.truncation, doc.coefficients, doc.full_rank};
    if (o.action_bound) e.t.action_bound = *o.action_bound;
    if (o.hbar_bound) e.t.hbar_bound = *o.hbar_bound;
    if (o.cover_max) e.t.cover_max = *o.cover_max;
    if (o.exponent_box) e.t.exponent_box = *o.exponent_box;
    if (o.omega) {
        e.coeff.kind = CoefficientMode::Kind::twisted;
        e.coeff.omega = *o.omega;
    }
    if (e.t.action_bound <= 0) throw ValidationError("--action-bound", "must be positive");
    if (e.t.hbar_bound < 0) throw ValidationError("--hbar-bound", "must be nonnegative");
    if (e.t.cover_max < 1) throw ValidationError("--cover-max", "must be at least 1");
    if (e.t.exponent_box < 0) throw ValidationError("--exponent-box", "must be nonnegative");
    return e;
}

SolveBounds bounds_of(const Truncation& t) {
    SolveBounds b;
    b.action_bound = t.action_bound;
    b.hbar_bound = t.hbar_bound;
    b.exponent_box = t.exponent_box;
    return b;
}

LatticeMap projection_for(const Effective& e, std::size_t lattice_rank, const std::string& locus) {
    if (e.coeff.kind == CoefficientMode::Kind::full && e.full_rank && *e.full_rank != lattice_rank)
        throw ValidationError("/coefficients/rank", "full coefficients need rank " + std::to_string(lattice_rank) +
                                                        " to match " + locus);
    return coefficient_projection(e.coeff, lattice_rank);
}

std::size_t surface_lattice_rank(const SurfaceSpec& spec) {
    std::optional<std::size_t> rank;
    for (std::size_t i = 0; i < spec.crossing.size(); ++i) {
        const auto& c = spec.crossing[i];
        if (c.h2_class.empty()) continue;
        if (rank && *rank != c.h2_class.size())
            throw ValidationError("/surface/crossing_lines/" + std::to_string(i) + "/h2_class",
                                  "all h2 classes must have the same length");
        rank = c.h2_class.size();
    }
    return rank.value_or(0);
}

SurfaceModel surface_model(const Document& doc, const Effective& e) {
    SurfaceSpec spec = doc.surface;
    const std::size_t lattice = surface_lattice_rank(spec);
    const LatticeMap proj = projection_for(e, lattice, "the surface h2 classes");
    for (auto& c : spec.crossing) {
        Exponent cls = c.h2_class.empty() ? zero_exponent(lattice) : c.h2_class;
        c.h2_class = proj.target_rank() == 0 ? Exponent{} : proj.apply(cls);
    }
    CoefficientConfig cfg;
    cfg.rank = proj.target_rank();
    auto ds = DividedSurface::build(std::move(spec));
    morse_homology(ds);  // rejects inconsistent Morse data before any assembly
    return build_surface_model(std::move(ds), e.t.cover_max, cfg);
}

PlanarModel planar_model(const PlanarTorsionDescriptor& d, const Effective& e) {
    return planar_torsion_differential(d, projection_for(e, d.lattice_rank, "planar_torsion/lattice_rank"));
}

Json descriptor_json(const PlanarTorsionDescriptor& d) {
    return {{"m", d.m}, {"n", d.n}, {"r", d.r}, {"k0", d.k0()}, {"origin", d.origin}};
}

Json primitive_certificate(const Registry& reg, const TorsionBound& b, const std::string& source) {
    return {{"kind", "primitive"},
            {"source", source},
            {"k", b.k},
            {"method", b.method},
            {"element", algebra_json(reg, b.witness)},
            {"str", b.witness.str(reg)}};
}

Json count_table_json(const CountTable& t) {
    Json entries = Json::array();
    for (const auto& [key, e] : t.entries) {
        Json by_cover = Json::object();
        for (const auto& [n, c] : e.by_cover) by_cover[std::to_string(n)] = rational_json(c);
        entries.push_back({{"positive_orbits", e.positive_orbits},
                           {"total", rational_json(e.total)},
                           {"by_cover", by_cover},
                           {"lines", e.lines}});
    }
    Json by_ends = Json::object();
    for (const auto& [r, n] : t.curves_by_ends) by_ends[std::to_string(r)] = n;
    return {{"max_ends", t.max_ends}, {"entries", entries}, {"curves_by_ends", by_ends}};
}

Json lower_certificate_json(const LowerBoundCertificate& c) {
    std::size_t null_h = 0;
    for (const auto& g : c.gamma_configurations) null_h += g.null_homologous ? 1 : 0;
    Json j = {{"kind", "vanishing_counts"},
              {"granted", c.granted},
              {"K", c.K},
              {"action_bound", rational_json(c.action_bound)},
              {"counts", count_table_json(c.counts)},
              {"gamma_configurations", c.gamma_configurations.size()},
              {"null_homologous_gamma_configurations", null_h},
              {"gamma_rank", c.gamma_rank},
              {"gamma_count", c.gamma_count},
              {"solver_crosscheck_failed_to_find_primitive", c.solver_crosscheck_failed_to_find_primitive}};
    if (!c.first_nonzero.empty()) {
        j["first_nonzero"] = c.first_nonzero;
        j["first_nonzero_count"] = rational_json(c.first_nonzero_count);
    }
    return j;
}

Json orbits_json(const std::vector<ReebOrbit>& orbits) {
    Json out = Json::array();
    for (const auto& o : orbits)
        out.push_back({{"name", o.name},
                       {"critical_point", o.critical_point},
                       {"cover", o.cover},
                       {"cz", o.cz},
                       {"parity", o.parity == Parity::odd ? "odd" : "even"},
                       {"kind", o.kind == OrbitKind::elliptic ? "elliptic" : "hyperbolic"},
                       {"action", rational_json(o.action)}});
    return out;
}

Json cylinders_json(const SurfaceModel& m) {
    Json out = Json::array();
    for (const auto& c : m.cylinders) {
        if (c.trivial) continue;
        Json pos = Json::array(), neg = Json::array();
        for (auto i : c.positive) pos.push_back(m.orbits[i].name);
        for (auto i : c.negative) neg.push_back(m.orbits[i].name);
        out.push_back({{"flow_line", c.flow_line},
                       {"cover", c.cover},
                       {"type", c.type},
                       {"index", c.fredholm_index},
                       {"sign", c.sign},
                       {"positive", pos},
                       {"negative", neg},
                       {"transversal", automatic_transversality_check(c, m.orbits)}});
    }
    return out;
}

Json operator_summary(const Registry& reg, const DifferentialOperator& D) {
    Json j = operator_json(reg, D);
    Json lines = Json::array();
    for (const auto& t : D.terms) {
        std::ostringstream s;
        s << "(" << t.coefficient.str() << ")";
        if (t.hbar) s << " hbar^" << t.hbar;
        for (GenId g : t.outputs) s << " q[" << reg.at(g).name << "]";
        for (GenId g : t.inputs) s << " d/dq[" << reg.at(g).name << "]";
        s << "   <" << t.origin << ">";
        lines.push_back(s.str());
    }
    j["str"] = lines;
    return j;
}

// ---- ECH helpers --------------------------------------------------------

std::vector<LabeledComplex> ech_complexes(const Document& doc, const Effective& e, const RunOptions& o) {
    std::vector<LabeledComplex> out;
    switch (doc.kind) {
        case Document::Kind::ech: {
            std::optional<Rational> L = doc.ech_action_bound;
            if (o.action_bound) L = *o.action_bound;
            out.push_back({"document", doc.ech, L});
            break;
        }
        case Document::Kind::planar:
            out.push_back({"planar document", ech_from_planar(doc.planar), std::nullopt});
            break;
        case Document::Kind::surface: {
            auto model = surface_model(doc, e);
            out.push_back({"surface model", ech_from_surface_model(model, e.t.action_bound), std::nullopt});
            auto pieces = planar_descriptors_from_surface(model.ds);
            for (std::size_t i = 0; i < pieces.size(); ++i)
                out.push_back({"planar piece " + std::to_string(i), ech_from_planar(pieces[i]), std::nullopt});
            break;
        }
    }
    return out;
}

Json chain_json(const EchComplex& cx, const SparseVec& v) {
    Json out = Json::array();
    for (const auto& [g, c] : v)
        out.push_back({{"set", orbit_set_json(cx.generators[g])}, {"coefficient", rational_json(c)}});
    return out;
}

SparseVec chain_from_json(const EchComplex& cx, const Json& j, const std::string& locus) {
    if (!j.is_array()) throw ValidationError(locus, "expected a chain");
    SparseVec v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto at = locus + "/" + std::to_string(i);
        if (!j[i].is_object() || !j[i].contains("set") || !j[i].contains("coefficient"))
            throw ValidationError(at, "chain entries need set and coefficient");
        auto idx = cx.index_of(parse_orbit_set(j[i]["set"], at + "/set"));
        if (!idx) throw ValidationError(at + "/set", "not a generator of the complex");
        axpy(v, parse_rational_json(j[i]["coefficient"], at + "/coefficient"), SparseVec{{*idx, Rational(1)}});
    }
    return v;
}

SparseVec apply_parts(const Decomposition& dec, std::size_t k, const SparseVec& v) {
    SparseVec out;
    if (k >= dec.parts.size()) return out;
    for (const auto& [g, c] : v) axpy(out, c, dec.parts[k][g]);
    return out;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json("infinity"); }

Json ech_complex_report(const LabeledComplex& lc, const std::optional<int>& certify_k, Json& certificates) {
    const auto& cx = lc.cx;
    auto dec = decompose_differential(cx);
    auto sub = subcomplex(cx, lc.L, false);
    auto sub_simple = subcomplex(cx, lc.L, true);
    auto f = f_value(cx, dec, sub);
    auto fs = f_value(cx, dec, sub_simple);
    auto suf = sufficient_condition(cx, dec, sub);
    if (suf.k && f.f && *suf.k < *f.f)
        throw InvariantBreach("sufficient condition gives " + std::to_string(*suf.k) + " below f = " +
                              std::to_string(*f.f) + " on " + lc.label);
    if (fs.f && f.f && *fs.f < *f.f)
        throw InvariantBreach("f_simp < f on " + lc.label);
    if (fs.f && !f.f) throw InvariantBreach("f_simp finite while f is infinite on " + lc.label);

    Json parts = Json::array();
    for (std::size_t k = 0; k < dec.parts.size(); ++k) {
        std::size_t nnz = 0;
        for (const auto& col : dec.parts[k]) nnz += col.size();
        parts.push_back({{"k", k}, {"nonzero_entries", nnz}});
    }
    std::size_t kept = 0, simple = 0;
    for (bool b : sub.keep) kept += b;
    for (bool b : sub_simple.keep) simple += b;

    Json r = {{"label", lc.label},
              {"origin", cx.origin},
              {"action_bound", lc.L ? rational_json(*lc.L) : Json("infinity")},
              {"orbits", cx.orbits.size()},
              {"generators", cx.generators.size()},
              {"generators_below_L", kept},
              {"simple_generators_below_L", simple},
              {"contributions", cx.contributions.size()},
              {"parts", parts},
              {"relations_checked_through_degree", dec.relations_checked},
              {"f", optional_int(f.f)},
              {"f_simp", optional_int(fs.f)},
              {"sufficient_k", optional_int(suf.k)},
              {"agree", f.f == suf.k}};
    if (f.f) {
        Json chains = Json::array();
        for (const auto& y : f.chains) chains.push_back(chain_json(cx, y));
        certificates.push_back({{"kind", "ech_chain"}, {"complex", lc.label}, {"f", *f.f}, {"chains", chains}});
    }
    if (suf.k)
        certificates.push_back(
            {{"kind", "ech_sufficient"}, {"complex", lc.label}, {"k", *suf.k}, {"x", chain_json(cx, suf.x)}});

    int k = certify_k ? *certify_k : (f.f ? *f.f : 1);
    auto cert = ech_lower_bound_certificate(cx, lc.L, k);
    Json counts = Json::array();
    for (const auto& [key, c] : cert.counts)
        counts.push_back({{"alpha", orbit_set_json(key.alpha)},
                          {"c_tau", key.c_tau},
                          {"Q_tau", key.Q_tau},
                          {"genus", key.genus},
                          {"n_plus", key.n_plus},
                          {"count", rational_json(c)}});
    Json cj = {{"kind", "ech_vanishing_counts"}, {"complex", lc.label}, {"k", k}, {"granted", cert.granted},
               {"counts", counts}};
    if (cert.first_nonzero) cj["first_nonzero"] = orbit_set_json(cert.first_nonzero->alpha);
    r["lower_bound"] = {{"k", k}, {"granted", cert.granted}};
    certificates.push_back(cj);
    return r;
}

// ---- commands -----------------------------------------------------------

Json cmd_morse(const Document& doc) {
    if (doc.kind != Document::Kind::surface) throw ValidationError("", "morse needs a surface payload");
    auto ds = DividedSurface::build(doc.surface);
    auto mc = morse_complex(ds);
    auto h = morse_homology(ds);
    auto counts = ds.index_counts();
    auto mat = [](const std::vector<std::vector<Rational>>& m) {
        Json out = Json::array();
        for (const auto& row : m) {
            Json r = Json::array();
            for (const auto& x : row) r.push_back(rational_json(x));
            out.push_back(r);
        }
        return out;
    };
    Json lines = Json::array();
    for (const auto& l : enumerate_flow_lines(ds))
        lines.push_back({{"id", l.id}, {"from", l.from}, {"to", l.to}, {"from_index", l.from_index},
                         {"to_index", l.to_index}, {"crosses_gamma", l.crosses_gamma},
                         {"touches_boundary", l.touches_boundary}, {"sign", l.sign}});
    return {{"euler_characteristic", ds.euler_characteristic()},
            {"genus", ds.genus()},
            {"index_counts", counts},
            {"betti", h},
            {"expected_betti", {1, 2 * ds.genus(), 1}},
            {"matches_expected", h == std::array<int, 3>{1, 2 * ds.genus(), 1}},
            {"generators", {{"0", mc.generators[0]}, {"1", mc.generators[1]}, {"2", mc.generators[2]}}},
            {"d1", mat(mc.d1)},
            {"d2", mat(mc.d2)},
            {"gamma_rank", gamma_class_rank(ds)},
            {"flow_lines", lines}};
}

Json cmd_enumerate(const Document& doc, const Effective& e) {
    switch (doc.kind) {
        case Document::Kind::surface: {
            auto m = surface_model(doc, e);
            auto counts = count_index1_positive_only(m.orbits, m.cylinders, e.t.hbar_bound + 1, e.t.action_bound);
            return {{"orbits", orbits_json(m.orbits)},
                    {"cylinders", cylinders_json(m)},
                    {"counts", count_table_json(counts)},
                    {"operator", operator_summary(m.reg, m.D)}};
        }
        case Document::Kind::planar: {
            auto pm = planar_model(doc.planar, e);
            Json gens = Json::array();
            for (GenId g : pm.gens)
                gens.push_back({{"name", pm.reg.at(g).name},
                                {"parity", pm.reg.parity(g) == Parity::odd ? "odd" : "even"},
                                {"action", rational_json(pm.reg.at(g).action)}});
            return {{"descriptor", descriptor_json(pm.desc)},
                    {"generators", gens},
                    {"operator", operator_summary(pm.reg, pm.D)},
                    {"F", pm.F.str(pm.reg)}};
        }
        case Document::Kind::ech: {
            auto cx = doc.ech;
            auto simple = simplicity_closure(cx, default_curve_graph(cx));
            Json gens = Json::array();
            for (std::size_t i = 0; i < cx.generators.size(); ++i)
                gens.push_back({{"set", orbit_set_json(cx.generators[i])},
                                {"str", orbit_set_str(cx.generators[i])},
                                {"action", rational_json(cx.action(cx.generators[i]))},
                                {"simple", static_cast<bool>(simple[i])}});
            Json contribs = Json::array();
            for (const auto& u : cx.contributions)
                contribs.push_back({{"from", orbit_set_str(u.rc.from)},
                                    {"to", orbit_set_str(u.rc.to)},
                                    {"I", ech_index(cx, u.rc)},
                                    {"J_plus", j_plus(cx, u.rc)},
                                    {"sign", u.sign},
                                    {"genus", u.genus},
                                    {"n_plus", u.total_positive_ends()}});
            return {{"generators", gens}, {"contributions", contribs}};
        }
    }
    return {};
}

Json cmd_torsion(const Document& doc, const Effective& e, const RunOptions& o, Json& certs, Json& diags) {
    const SolveBounds b = bounds_of(e.t);
    if (doc.kind == Document::Kind::ech) throw ValidationError("", "torsion needs a surface or planar_torsion payload");
    if (doc.kind == Document::Kind::planar) {
        auto pm = planar_model(doc.planar, e);
        Json r = {{"descriptor", descriptor_json(pm.desc)},
                  {"F", pm.F.str(pm.reg)},
                  {"D_of_F", apply_operator(pm.reg, pm.D, pm.F).str(pm.reg)},
                  {"operator", operator_summary(pm.reg, pm.D)}};
        auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, b);
        r["upper_bound"] = ub ? Json(ub->k) : Json(nullptr);
        if (ub) certs.push_back(primitive_certificate(pm.reg, *ub, "planar document"));
        else diags.push_back("no primitive of hbar^k for k <= " + std::to_string(b.hbar_bound) + " in the truncation");
        return r;
    }

    auto m = surface_model(doc, e);
    Json r = {{"genus", m.ds.genus()}, {"operator", operator_summary(m.reg, m.D)}};
    auto sq = verify_square_zero(m.reg, m.D, m.reg.all(), b.action_bound, b.hbar_bound);
    r["square_zero"] = {{"ok", sq.ok}, {"monomials_checked", sq.monomials_checked}};
    if (!sq.ok) throw InvariantBreach("assembled operator does not square to zero");

    std::optional<int> upper;
    auto ub = torsion_upper_bound(m.reg, m.D, m.reg.all(), b);
    if (ub) {
        upper = ub->k;
        certs.push_back(primitive_certificate(m.reg, *ub, "surface model"));
    }
    auto pieces = planar_descriptors_from_surface(m.ds);
    Json pj = Json::array();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        auto pm = planar_torsion_differential(pieces[i], LatticeMap::to_zero(0));
        SolveBounds pb = b;
        pb.action_bound = pm.natural_action_bound;
        auto pub = torsion_upper_bound(pm.reg, pm.D, pm.gens, pb);
        Json d = descriptor_json(pieces[i]);
        d["upper_bound"] = pub ? Json(pub->k) : Json(nullptr);
        pj.push_back(d);
        if (pub) {
            certs.push_back(primitive_certificate(pm.reg, *pub, "planar piece " + std::to_string(i)));
            if (!upper || pub->k < *upper) upper = pub->k;
        }
    }
    r["planar_pieces"] = pj;
    r["upper_bound"] = upper ? Json(*upper) : Json(nullptr);
    if (!upper) diags.push_back("no primitive of hbar^k for k <= " + std::to_string(b.hbar_bound) + " in the truncation");

    const int K = o.certify_k ? *o.certify_k : (upper ? *upper - 1 : 0);
    if (K >= 0) {
        auto cert = lower_bound_certificate(m, K, b);
        r["lower_bound"] = {{"K", K}, {"granted", cert.granted}};
        if (cert.granted && upper && *upper < K)
            throw InvariantBreach("lower bound certificate at K = " + std::to_string(K) + " exceeds upper bound " +
                                  std::to_string(*upper));
        certs.push_back(lower_certificate_json(cert));
    }
    return r;
}

Json cmd_ech(const Document& doc, const Effective& e, const RunOptions& o, Json& certs) {
    Json out = Json::array();
    for (const auto& lc : ech_complexes(doc, e, o)) out.push_back(ech_complex_report(lc, o.certify_k, certs));
    return {{"complexes", out}};
}

Json cmd_validate_document(const Document& doc, const Effective& e, const RunOptions& o, Json& diags) {
    std::mt19937_64 rng(o.seed);
    Json r = {{"valid", true}, {"payload", kind_name(doc.kind)}, {"seed", o.seed}};
    auto sample_square = [&](const Registry& reg, const DifferentialOperator& D) {
        std::vector<GenId> gens;
        for (GenId g : reg.all())
            if (reg.at(g).action < e.t.action_bound) gens.push_back(g);
        int checked = 0;
        if (gens.empty()) return checked;
        std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
        std::uniform_int_distribution<int> len(1, 3);
        for (int s = 0; s < o.samples; ++s) {
            std::vector<GenId> w;
            for (int i = len(rng); i > 0; --i) w.push_back(gens[pick(rng)]);
            auto x = AlgebraElement::word(reg, w, D.rank);
            if (x.is_zero() || x.max_action(reg) >= e.t.action_bound) continue;
            auto dd = apply_operator(reg, D, apply_operator(reg, D, x)).truncated(e.t.hbar_bound);
            if (!dd.is_zero()) throw InvariantBreach("D^2 is nonzero on sampled word " + x.str(reg));
            ++checked;
        }
        return checked;
    };
    switch (doc.kind) {
        case Document::Kind::surface: {
            auto m = surface_model(doc, e);
            auto h = morse_homology(m.ds);
            m.D.check_well_formed(m.reg);
            auto sq = verify_square_zero(m.reg, m.D, m.reg.all(), e.t.action_bound, e.t.hbar_bound);
            if (!sq.ok) throw InvariantBreach("assembled operator does not square to zero");
            r["genus"] = m.ds.genus();
            r["betti"] = h;
            r["orbits"] = m.orbits.size();
            r["operator_terms"] = m.D.terms.size();
            r["square_zero_monomials"] = sq.monomials_checked;
            r["property_samples"] = sample_square(m.reg, m.D);
            break;
        }
        case Document::Kind::planar: {
            auto pm = planar_model(doc.planar, e);
            auto sq = verify_square_zero(pm.reg, pm.D, pm.gens, pm.natural_action_bound, pm.desc.k0() + 1);
            if (!sq.ok) throw InvariantBreach("planar operator does not square to zero");
            r["k0"] = pm.desc.k0();
            r["D_of_F"] = apply_operator(pm.reg, pm.D, pm.F).str(pm.reg);
            r["property_samples"] = sample_square(pm.reg, pm.D);
            break;
        }
        case Document::Kind::ech: {
            const auto& cx = doc.ech;
            auto dec = decompose_differential(cx);
            // Random relative classes: J+ - I must match the positive hyperbolic parity.
            int checked = 0;
            if (!cx.orbits.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, cx.orbits.size() - 1);
                std::uniform_int_distribution<int> len(0, 3), cq(-4, 4);
                for (int s = 0; s < o.samples; ++s) {
                    RelClassData rc;
                    for (auto* set : {&rc.from, &rc.to})
                        for (int i = len(rng); i > 0; --i) {
                            const auto& orb = cx.orbits[pick(rng)];
                            if (orb.hyperbolic()) (*set)[orb.id] = 1;
                            else (*set)[orb.id] += 1;
                        }
                    rc.c_tau = cq(rng);
                    rc.Q_tau = cq(rng);
                    long diff = j_plus(cx, rc) - ech_index(cx, rc);
                    if (((diff % 2) + 2) % 2 != positive_hyperbolic_count(cx, rc) % 2)
                        throw ValidationError("/ech_complex/orbits",
                                              "CZ data break the J+ - I parity rule on " + orbit_set_str(rc.from) +
                                                  " -> " + orbit_set_str(rc.to));
                    ++checked;
                }
            }
            r["generators"] = cx.generators.size();
            r["contributions"] = cx.contributions.size();
            r["parts"] = dec.parts.size();
            r["relations_checked_through_degree"] = dec.relations_checked;
            r["property_samples"] = checked;
            break;
        }
    }
    (void)diags;
    return r;
}

Json build_report(const Json& input, const std::string& command, const RunOptions& o) {
    Document doc = parse_document(input);
    Effective e = effective(doc, o);
    Json certs = Json::array(), diags = Json::array();
    Json result;
    if (command == "validate") result = cmd_validate_document(doc, e, o, diags);
    else if (command == "morse") result = cmd_morse(doc);
    else if (command == "enumerate") result = cmd_enumerate(doc, e);
    else if (command == "torsion") result = cmd_torsion(doc, e, o, certs, diags);
    else if (command == "ech-f") result = cmd_ech(doc, e, o, certs);
    else throw ValidationError("--command", "unknown command '" + command + "'");
    return {{"tool", "torsionkit"},
            {"report_version", report_version},
            {"command", command},
            {"status", "ok"},
            {"payload", kind_name(doc.kind)},
            {"input", input},
            {"options", options_json(o)},
            {"truncation", truncation_json(e.t)},
            {"coefficients", coefficients_json(e.coeff, e.full_rank)},
            {"result", result},
            {"certificates", certs},
            {"diagnostics", diags}};
}

// Re-checks every witness in a report against freshly built objects.
Json replay(const Json& report, const RunOptions& outer) {
    for (const char* k : {"input", "command", "options", "certificates", "result"})
        if (!report.contains(k)) throw ValidationError(std::string("/") + k, "report is missing this key");
    const Json& input = report["input"];
    const std::string command = report["command"].get<std::string>();
    RunOptions o = options_from_json(report["options"]);
    Document doc = parse_document(input);
    Effective e = effective(doc, o);

    std::optional<std::vector<LabeledComplex>> complexes;
    auto complex_named = [&](const std::string& label, const std::string& at) -> const LabeledComplex& {
        if (!complexes) complexes = ech_complexes(doc, e, o);
        for (const auto& lc : *complexes)
            if (lc.label == label) return lc;
        throw ValidationError(at + "/complex", "no complex named '" + label + "'");
    };

    Json checked = Json::array();
    const Json& certs = report["certificates"];
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto at = "/certificates/" + std::to_string(i);
        const Json& c = certs[i];
        const std::string kind = c.value("kind", "");
        if (kind == "primitive") {
            const std::string source = c.value("source", "");
            const int k = c.at("k").get<int>();
            auto check = [&](const Registry& reg, const DifferentialOperator& D) {
                auto x = algebra_from_json(reg, D.rank, c.at("element"), at + "/element");
                if (!(apply_operator(reg, D, x) == AlgebraElement::hbar(D.rank, k)))
                    throw ValidationError(at, "witness does not map to hbar^" + std::to_string(k));
            };
            if (source == "surface model") {
                auto m = surface_model(doc, e);
                check(m.reg, m.D);
            } else if (source == "planar document") {
                auto pm = planar_model(doc.planar, e);
                check(pm.reg, pm.D);
            } else if (source.rfind("planar piece ", 0) == 0) {
                auto pieces = planar_descriptors_from_surface(DividedSurface::build(doc.surface));
                std::size_t j = std::stoul(source.substr(13));
                if (j >= pieces.size()) throw ValidationError(at + "/source", "no such planar piece");
                auto pm = planar_torsion_differential(pieces[j], LatticeMap::to_zero(0));
                check(pm.reg, pm.D);
            } else {
                throw ValidationError(at + "/source", "unknown witness source '" + source + "'");
            }
        } else if (kind == "ech_chain") {
            const auto& lc = complex_named(c.value("complex", ""), at);
            auto dec = decompose_differential(lc.cx);
            auto sub = subcomplex(lc.cx, lc.L, false);
            const int f = c.at("f").get<int>();
            std::vector<SparseVec> y;
            for (std::size_t j = 0; j < c.at("chains").size(); ++j)
                y.push_back(chain_from_json(lc.cx, c["chains"][j], at + "/chains/" + std::to_string(j)));
            if (static_cast<int>(y.size()) != f + 1) throw ValidationError(at + "/chains", "need f + 1 chains");
            for (const auto& v : y)
                for (const auto& [g, q] : v)
                    if (!sub.keep[g]) throw ValidationError(at + "/chains", "chain leaves the truncated complex");
            const auto empty = *lc.cx.index_of(OrbitSet{});
            for (int mdeg = 0; mdeg <= f; ++mdeg) {
                SparseVec total;
                for (int i = 0; i <= mdeg; ++i)
                    axpy(total, Rational(1), apply_parts(dec, static_cast<std::size_t>(i), y[static_cast<std::size_t>(mdeg - i)]));
                SparseVec want;
                if (mdeg == f) want[empty] = 1;
                if (total != want) throw ValidationError(at + "/chains", "zig-zag condition fails in degree " + std::to_string(mdeg));
            }
        } else if (kind == "ech_sufficient") {
            const auto& lc = complex_named(c.value("complex", ""), at);
            auto dec = decompose_differential(lc.cx);
            const int k = c.at("k").get<int>();
            auto x = chain_from_json(lc.cx, c.at("x"), at + "/x");
            SparseVec total;
            for (int i = 0; i <= k; ++i) axpy(total, Rational(1), apply_parts(dec, static_cast<std::size_t>(i), x));
            if (total != SparseVec{{*lc.cx.index_of(OrbitSet{}), Rational(1)}})
                throw ValidationError(at + "/x", "chain does not map to the empty set");
        } else if (kind != "vanishing_counts" && kind != "ech_vanishing_counts") {
            throw ValidationError(at + "/kind", "unknown certificate kind '" + kind + "'");
        }
        checked.push_back({{"index", i}, {"kind", kind}, {"ok", true}});
    }

    // Count certificates are recomputed wholesale by a fresh run.
    Json fresh = build_report(input, command, o);
    if (fresh["result"] != report["result"] || fresh["certificates"] != report["certificates"])
        throw ValidationError("/result", "report does not match a fresh run of the same request");
    (void)outer;
    return {{"replayed_command", command}, {"witnesses_checked", checked}, {"matches_fresh_run", true}};
}

void render(std::ostringstream& out, const Json& j, const std::string& indent, int depth) {
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            out << indent << k << ":\n";
            if (depth < 3) render(out, v, indent + "  ", depth + 1);
        } else if (v.is_array()) {
            bool scalars = true;
            for (const auto& x : v) scalars = scalars && !x.is_structured();
            if (scalars && v.size() <= 16) {
                out << indent << k << ": [";
                for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
                out << "]\n";
            } else if (depth < 3 && v.size() <= 24) {
                out << indent << k << ":\n";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (v[i].is_structured()) {
                        out << indent << "  - #" << i << "\n";
                        render(out, v[i], indent + "    ", depth + 2);
                    } else {
                        out << indent << "  - " << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump()) << "\n";
                    }
                }
            } else {
                out << indent << k << ": (" << v.size() << " entries)\n";
            }
        } else {
            out << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"validate", "torsion", "ech-f", "enumerate", "morse"};
    return c;
}


Truncation effective_truncation(const Document& doc, const RunOptions& opts) { return effective(doc, opts).t; }

SurfaceModel document_surface_model(const Document& doc, const RunOptions& opts) {
    if (doc.kind != Document::Kind::surface) throw ValidationError("", "document has no surface payload");
    return surface_model(doc, effective(doc, opts));
}

PlanarModel document_planar_model(const Document& doc, const RunOptions& opts) {
    if (doc.kind != Document::Kind::planar) throw ValidationError("", "document has no planar_torsion payload");
    return planar_model(doc.planar, effective(doc, opts));
}

std::vector<LabeledComplex> document_ech_complexes(const Document& doc, const RunOptions& opts) {
    return ech_complexes(doc, effective(doc, opts), opts);
}

Json options_json(const RunOptions& o) {
    Json j = {{"seed", o.seed}, {"samples", o.samples}};
    if (o.action_bound) j["action_bound"] = rational_json(*o.action_bound);
    if (o.hbar_bound) j["hbar_bound"] = *o.hbar_bound;
    if (o.cover_max) j["cover_max"] = *o.cover_max;
    if (o.exponent_box) j["exponent_box"] = *o.exponent_box;
    if (o.certify_k) j["certify_k"] = *o.certify_k;
    if (o.omega) {
        Json w = Json::array();
        for (const auto& q : *o.omega) w.push_back(rational_json(q));
        j["omega"] = w;
    }
    return j;
}

RunOptions options_from_json(const Json& j) {
    RunOptions o;
    if (!j.is_object()) throw ValidationError("/options", "expected an object");
    o.seed = j.value("seed", std::uint64_t{0});
    o.samples = j.value("samples", 16);
    if (j.contains("action_bound")) o.action_bound = parse_rational_json(j["action_bound"], "/options/action_bound");
    if (j.contains("hbar_bound")) o.hbar_bound = j["hbar_bound"].get<int>();
    if (j.contains("cover_max")) o.cover_max = j["cover_max"].get<int>();
    if (j.contains("exponent_box")) o.exponent_box = j["exponent_box"].get<int>();
    if (j.contains("certify_k")) o.certify_k = j["certify_k"].get<int>();
    if (j.contains("omega")) {
        std::vector<Rational> w;
        for (std::size_t i = 0; i < j["omega"].size(); ++i)
            w.push_back(parse_rational_json(j["omega"][i], "/options/omega/" + std::to_string(i)));
        o.omega = w;
    }
    return o;
}

Json run_analysis(const Json& input, const std::string& command, const RunOptions& opts) {
    if (command == "validate" && input.is_object() && input.contains("report_version")) {
        Json result = replay(input, opts);
        return {{"tool", "torsionkit"},
                {"report_version", report_version},
                {"command", "validate"},
                {"status", "ok"},
                {"payload", "report"},
                {"options", options_json(opts)},
                {"result", result},
                {"certificates", Json::array()},
                {"diagnostics", Json::array()}};
    }
    return build_report(input, command, opts);
}

std::pair<Json, int> error_report(const std::string& command, const std::exception& e) {
    std::string kind = "internal";
    int code = exit_internal;
    Json err = {{"message", e.what()}};
    if (auto* v = dynamic_cast<const ValidationError*>(&e)) {
        kind = "validation";
        code = exit_validation;
        err["locus"] = v->locus();
        const std::string prefix = v->locus() + ": ";
        std::string msg = e.what();
        if (!v->locus().empty() && msg.rfind(prefix, 0) == 0) err["message"] = msg.substr(prefix.size());
    } else if (dynamic_cast<const Json::exception*>(&e)) {
        kind = "validation";
        code = exit_validation;
    } else if (dynamic_cast<const SolverError*>(&e)) {
        kind = "solver_refusal";
        code = exit_solver;
    } else if (dynamic_cast<const InvariantBreach*>(&e)) {
        kind = "invariant_breach";
        code = exit_breach;
    }
    err["kind"] = kind;
    return {{{"tool", "torsionkit"}, {"command", command}, {"status", "error"}, {"error", err}, {"exit_code", code}}, code};
}

std::string render_text(const Json& report) {
    std::ostringstream out;
    out << "torsionkit " << report.value("command", "?") << " [" << report.value("payload", "?")
        << "]  status: " << report.value("status", "?") << "\n";
    if (report.contains("error")) {
        const auto& e = report["error"];
        out << "error (" << e.value("kind", "?") << ")";
        if (e.contains("locus") && !e["locus"].get<std::string>().empty()) out << " at " << e["locus"].get<std::string>();
        out << ": " << e.value("message", "") << "\n";
        return out.str();
    }
    if (report.contains("truncation")) {
        const auto& t = report["truncation"];
        out << "truncation: T = " << t["action_bound"].get<std::string>() << ", hbar <= " << t["hbar_bound"]
            << ", cover_max = " << t["cover_max"] << ", exponent_box = " << t["exponent_box"] << "\n";
    }
    out << "result:\n";
    Json result = report.value("result", Json::object());
    render(out, result, "  ", 0);
    const auto& certs = report.value("certificates", Json::array());
    out << "certificate ledger (" << certs.size() << "):\n";
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = certs[i];
        const std::string kind = c.value("kind", "");
        out << "  [" << i + 1 << "] " << kind;
        if (kind == "primitive")
            out << " k=" << c["k"] << " (" << c.value("source", "") << ", " << c.value("method", "")
                << "): " << c.value("str", "") << "\n";
        else if (kind == "vanishing_counts")
            out << " K=" << c["K"] << " granted=" << c["granted"] << " gamma_rank=" << c["gamma_rank"] << "\n";
        else if (kind == "ech_chain")
            out << " " << c.value("complex", "") << ": f=" << c["f"] << " via " << c["chains"].size() << " chains\n";
        else if (kind == "ech_sufficient")
            out << " " << c.value("complex", "") << ": k=" << c["k"] << "\n";
        else if (kind == "ech_vanishing_counts")
            out << " " << c.value("complex", "") << ": k=" << c["k"] << " granted=" << c["granted"] << "\n";
        else out << "\n";
    }
    for (const auto& d : report.value("diagnostics", Json::array())) out << "note: " << d.get<std::string>() << "\n";
    return out.str();
}

}  // namespace tk
