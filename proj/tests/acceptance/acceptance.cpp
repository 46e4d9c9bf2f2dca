// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
// Expected values come from small independent oracles in this file.

#include "torsionkit/analysis.hpp"
#include "torsionkit/ech.hpp"
#include "torsionkit/errors.hpp"
#include "torsionkit/families.hpp"
#include "torsionkit/torsion.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace tk;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> notes;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

struct Bundled {
    std::string name;
    Document doc;
};

std::vector<Bundled> load_corpus(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Bundled> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        out.push_back({f.stem().string(), parse_document(Json::parse(in))});
    }
    return out;
}

SolveBounds bounds(Rational T, int N, int box = 0, std::optional<int> modulus = std::nullopt) {
    SolveBounds b;
    b.action_bound = T;
    b.hbar_bound = N;
    b.exponent_box = box;
    b.modulus = modulus;
    return b;
}

PlanarTorsionDescriptor desc(int m, int n, int r) {
    PlanarTorsionDescriptor d;
    d.m = m;
    d.n = n;
    d.r = r;
    return d;
}

std::string str_int(long v) { return std::to_string(v); }

// ---- oracles ---------------------------------------------------------------

// Euler characteristic and connectivity straight from the listed pieces.
std::array<int, 3> betti_oracle(const SurfaceSpec& spec) {
    int chi = 0;
    std::vector<int> parent;
    std::map<std::string, int> circle_owner;
    auto add_side = [&](const SidedSurface& s) {
        for (const auto& c : s.components) {
            chi += 2 - 2 * c.genus - static_cast<int>(c.boundary.size());
            int id = static_cast<int>(parent.size());
            parent.push_back(id);
            for (const auto& b : c.boundary) circle_owner[b] = id;
        }
    };
    add_side(spec.minus);
    add_side(spec.plus);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& g : spec.gammas) parent[find(circle_owner.at(g.plus_circle))] = find(circle_owner.at(g.minus_circle));
    int comps = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) comps += find(static_cast<int>(i)) == static_cast<int>(i);
    // b1 = 2 * comps - chi for a closed orientable surface with comps pieces.
    return {comps, 2 * comps - chi, comps};
}

// Morse matrices of h_eps rebuilt from raw line data: plus-side indices flip.
std::map<std::pair<std::string, std::string>, long> morse_oracle(const SurfaceSpec& spec,
                                                                 std::map<std::string, int>& eps_index) {
    for (const auto& c : spec.minus.critical_points) eps_index[c.id] = c.index;
    for (const auto& c : spec.plus.critical_points) eps_index[c.id] = 2 - c.index;
    std::map<std::pair<std::string, std::string>, long> m;
    auto add = [&](const std::string& from, const std::string& to, int sign) {
        if (!eps_index.count(from) || !eps_index.count(to)) return;
        if (eps_index[to] == eps_index[from] + 1) m[{from, to}] += sign;
    };
    for (const auto& l : spec.minus.flow_lines) add(l.from, l.to, l.sign);
    // Plus-side lines are listed for h_plus, so under h_eps they run the other way.
    for (const auto& l : spec.plus.flow_lines) add(l.to, l.from, l.sign);
    for (const auto& l : spec.crossing) add(l.from, l.to, l.sign);
    return m;
}

std::size_t rank_oracle(std::vector<std::vector<Rational>> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Sum_{i<=k} d_i x assembled from the raw contribution list, bucketed by J+/2.
SparseVec partial_sum_oracle(const EchComplex& cx, const SparseVec& x, int k) {
    SparseVec out;
    for (const auto& u : cx.contributions) {
        if (j_plus(cx, u.rc) / 2 > k) continue;
        auto from = cx.index_of(u.rc.from);
        auto to = cx.index_of(u.rc.to);
        if (!from || !to) continue;
        auto it = x.find(*from);
        if (it == x.end()) continue;
        axpy(out, it->second * u.sign, SparseVec{{*to, Rational(1)}});
    }
    return out;
}

SparseVec apply_part(const std::vector<SparseVec>& part, const SparseVec& x) {
    SparseVec out;
    for (const auto& [j, c] : x) axpy(out, c, part[j]);
    return out;
}

bool term_is_odd(const Registry& reg, const OpTerm& t) {
    int p = 0;
    for (auto g : t.outputs) p += static_cast<int>(reg.parity(g));
    for (auto g : t.inputs) p += static_cast<int>(reg.parity(g));
    return p % 2 == 1;
}

struct NamedOperator {
    std::string name;
    Registry reg;
    DifferentialOperator D;
    std::vector<GenId> gens;
};

std::vector<NamedOperator> bundled_operators(const std::vector<Bundled>& corpus) {
    std::vector<NamedOperator> out;
    for (const auto& b : corpus) {
        if (b.doc.kind == Document::Kind::surface) {
            auto m = document_surface_model(b.doc, {});
            out.push_back({b.name, m.reg, m.D, m.reg.all()});
            for (const auto& piece : planar_descriptors_from_surface(m.ds)) {
                auto pm = planar_torsion_differential(piece, LatticeMap::to_zero(0));
                out.push_back({b.name + " planar piece", pm.reg, pm.D, pm.gens});
            }
        } else if (b.doc.kind == Document::Kind::planar) {
            auto pm = document_planar_model(b.doc, {});
            out.push_back({b.name, pm.reg, pm.D, pm.gens});
        }
    }
    return out;
}

// ---- criteria ----------------------------------------------------------------

Check planar_certificates() {
    Check c;
    int cases = 0;
    for (int m = 0; m <= 4; ++m)
        for (int n = 1; n <= 5; ++n)
            for (int r = 0; r <= 2; ++r) {
                if (m + n + 2 * r > 5) continue;
                ++cases;
                const int expected = m + n + 2 * r - 1;  // one per end, two per interior torus, minus one
                const std::string tag = "(" + str_int(m) + "," + str_int(n) + "," + str_int(r) + ")";
                auto pm = planar_torsion_differential(desc(m, n, r), LatticeMap::to_zero(0));
                c.expect(apply_operator(pm.reg, pm.D, pm.F) == AlgebraElement::hbar(0, expected), tag + " D(F)");
                auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, expected));
                c.expect(ub && ub->k == expected, tag + " upper bound");
                if (ub)
                    c.expect(apply_operator(pm.reg, pm.D, ub->witness) == AlgebraElement::hbar(0, ub->k),
                             tag + " witness");
            }
    c.note(str_int(cases) + " descriptors");
    return c;
}

Check omega_twisting() {
    Check c;
    auto d = desc(0, 2, 0);
    d.lattice_rank = 1;
    d.torus_classes = {{0}, {1}};
    for (int omega : {1, 0}) {
        CoefficientMode mode;
        mode.kind = CoefficientMode::Kind::twisted;
        mode.omega = {Rational(omega)};
        auto proj = coefficient_projection(mode, 1);
        auto pm = planar_torsion_differential(d, proj);
        auto target = AlgebraElement::hbar(proj.target_rank(), 1);
        auto sol = solve_primitive(pm.reg, pm.D, pm.gens, target, bounds(pm.natural_action_bound, 2, 3));
        if (omega == 1) {
            c.expect(!sol.primitive.has_value(), "Omega(T2)=1 should leave hbar without a primitive");
        } else {
            c.expect(sol.primitive.has_value(), "Omega(T2)=0 should give a primitive");
            if (sol.primitive)
                c.expect(apply_operator(pm.reg, pm.D, *sol.primitive) == target, "primitive checks out");
        }
        c.note("Omega(T2)=" + str_int(omega) + ": " + (sol.primitive ? "primitive" : "none") + " over " +
               std::to_string(sol.unknowns) + " unknowns");
    }
    // Omega killing every torus class leaves z^{page} hbar^{k0}.
    d.page_class = {2};
    d.torus_classes = {{0}, {0}};
    auto pm = planar_torsion_differential(d, LatticeMap::identity(1));
    AlgebraElement expected(1);
    expected.add_term(Key{{}, {2}, 1}, Rational(1));
    c.expect(apply_operator(pm.reg, pm.D, pm.F) == expected, "separating case D(F) = z^d hbar");
    return c;
}

Check disconnected_region() {
    Check c;
    const auto spec = disconnected_region_spec();
    auto m = build_surface_model(DividedSurface::build(spec), 1, {});

    std::map<std::string, int> eps;
    auto oracle = morse_oracle(spec, eps);
    auto mc = morse_complex(m.ds);
    // Library matrices against the brute-force ones.
    auto compare = [&](const std::vector<std::vector<Rational>>& mat, int lo) {
        const auto& rows = mc.generators[static_cast<std::size_t>(lo)];
        const auto& cols = mc.generators[static_cast<std::size_t>(lo + 1)];
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) {
                auto it = oracle.find({rows[i], cols[j]});
                long want = it == oracle.end() ? 0 : it->second;
                c.expect(mat[i][j] == want, "Morse entry " + rows[i] + " -> " + cols[j]);
            }
    };
    compare(mc.d1, 0);
    compare(mc.d2, 1);
    // Type-2 cylinders sit over plus-side saddle -> zmax lines; each such count is zero.
    for (const auto& t : {"zp", "t2", "t3"}) c.expect(oracle[{"zmax", t}] == 0, std::string("type-2 count at ") + t);

    long pair_count = 0;
    for (const auto& l : spec.crossing)
        if (l.from == "zm1" && l.to == "zp") pair_count += l.sign;
    c.expect(pair_count == 1, "one signed crossing line zm1 -> zp");
    auto q = AlgebraElement::word(m.reg, {m.reg.id_of("zm1^1"), m.reg.id_of("zp^1")}, 0);
    c.expect(apply_operator(m.reg, m.D, q) == AlgebraElement::hbar(0, 1, Rational(pair_count)), "D(q q) = hbar");
    auto ub = torsion_upper_bound(m.reg, m.D, m.reg.all(), bounds(Rational(5), 3));
    c.expect(ub && ub->k == 1, "upper bound 1");
    return c;
}

Check higher_order() {
    Check c;
    for (auto [g, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
        const std::string tag = "(" + str_int(g) + "," + str_int(k) + ")";
        auto spec = vg_family_spec(g, k);
        auto ds = DividedSurface::build(spec);

        auto pieces = planar_descriptors_from_surface(ds);
        c.expect(pieces.size() == 1, tag + " one planar piece");
        if (!pieces.empty()) {
            auto pm = planar_torsion_differential(pieces[0], LatticeMap::to_zero(0));
            auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, bounds(pm.natural_action_bound, k));
            c.expect(ub && ub->k == k - 1, tag + " upper bound k-1");
            if (ub) {
                c.expect(apply_operator(pm.reg, pm.D, ub->witness) == AlgebraElement::hbar(0, k - 1), tag + " witness");
                c.note(tag + " witness " + ub->witness.str(pm.reg));
            }
        }

        auto model = build_surface_model(ds, 2, {});
        auto cert = lower_bound_certificate(model, k - 2, bounds(Rational(5), k));
        c.expect(cert.granted, tag + " certificate at K=k-2");
        for (const auto& [key, e] : cert.counts.entries) c.expect(e.total == 0, tag + " count nonzero");
        c.expect(!cert.counts.curves_by_ends.count(1) || cert.counts.curves_by_ends.at(1) == 0, tag + " r=1 curves");

        std::vector<std::vector<Rational>> rows;
        for (const auto& gm : spec.gammas) {
            std::vector<Rational> row;
            for (long v : gm.h1_class) row.emplace_back(v);
            rows.push_back(row);
        }
        const auto want_rank = rank_oracle(rows);
        c.expect(want_rank == static_cast<std::size_t>(k - 1), tag + " oracle rank");
        c.expect(cert.gamma_rank == want_rank, tag + " gamma rank");

        auto t0 = std::chrono::steady_clock::now();
        auto sol = solve_primitive(model.reg, model.D, model.reg.all(), AlgebraElement::hbar(0, k - 2),
                                   bounds(Rational(5), k, 0, k - 1));
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        c.expect(!sol.primitive.has_value(), tag + " no primitive of hbar^{k-2} mod hbar^{k-1}");
        const auto words = enumerate_words(model.reg, model.reg.all(), Rational(5)).size();
        c.note(tag + " cross-check over " + std::to_string(words) + " words (" + std::to_string(sol.unknowns) +
               " with nonzero image), " + std::to_string(ms.count()) + " ms");
    }
    return c;
}

struct Synthetic {
    Registry reg;
    DifferentialOperator D;
    AlgebraElement P;
};

Synthetic synthetic() {
    Synthetic s;
    GenId a = s.reg.add({"a", Parity::odd, Rational(1)});
    GenId b = s.reg.add({"b", Parity::even, Rational(1)});
    GenId c = s.reg.add({"c", Parity::odd, Rational(1)});
    GenId d = s.reg.add({"d", Parity::even, Rational(1)});
    GenId g = s.reg.add({"g", Parity::odd, Rational(1, 2)});
    GenId h = s.reg.add({"h", Parity::even, Rational(1)});
    GenId e = s.reg.add({"e", Parity::odd, Rational(3, 2)});
    GenId f = s.reg.add({"f", Parity::even, Rational(2)});
    auto term = [](std::vector<GenId> out, std::vector<GenId> in, int hb, Rational co) {
        return OpTerm{GroupRingElement::constant(0, co), hb, std::move(out), std::move(in), 0, ""};
    };
    s.D.terms.push_back(term({}, {a}, 0, 1));
    s.D.terms.push_back(term({}, {b, c}, 1, 1));
    s.D.terms.push_back(term({}, {b, d, c}, 2, Rational(1, 3)));
    s.D.terms.push_back(term({g}, {h}, 0, 2));
    s.D.terms.push_back(term({e}, {f}, 1, -1));
    s.P = AlgebraElement::word(s.reg, {a}, 0);
    return s;
}

Check bracket_primitive() {
    Check c;
    auto s = synthetic();
    c.expect(s.reg.size() >= 6, "at least six generators");
    c.expect(apply_operator(s.reg, s.D, s.P) == AlgebraElement::one(0), "D(P) = 1");
    std::mt19937 rng(20240601);
    std::uniform_int_distribution<std::size_t> pick(0, s.reg.size() - 1);
    std::uniform_int_distribution<int> len(0, 4), hb(0, 3), co(-3, 3), nterms(1, 4);
    int done = 0;
    for (int trial = 0; trial < 100; ++trial) {
        AlgebraElement X(0);
        for (int i = nterms(rng); i > 0; --i) {
            std::vector<GenId> w;
            for (int j = len(rng); j > 0; --j) w.push_back(pick(rng));
            X += AlgebraElement::word(s.reg, w, Rational(co(rng)), Exponent{}, hb(rng));
        }
        auto Q = apply_operator(s.reg, s.D, X) + AlgebraElement::hbar(0, hb(rng), Rational(co(rng)));
        Q = Q.truncated(4);
        if (!apply_operator(s.reg, s.D, Q).truncated(4).is_zero()) {
            c.expect(false, "sample " + str_int(trial) + " not closed");
            continue;
        }
        auto R = primitive_via_bracket(s.reg, s.D, s.P, Q, 4);
        c.expect((apply_operator(s.reg, s.D, R) - Q).truncated(4).is_zero(), "sample " + str_int(trial));
        ++done;
    }
    c.note(str_int(done) + " closed samples, " + str_int(static_cast<long>(s.reg.size())) + " generators");
    return c;
}

Check structural(const std::vector<Bundled>& corpus) {
    Check c;
    auto ops = bundled_operators(corpus);
    std::size_t monomials = 0;
    for (const auto& op : ops) {
        auto sq = verify_square_zero(op.reg, op.D, op.gens, Rational(5), 4);
        c.expect(sq.ok, op.name + " square zero");
        monomials += sq.monomials_checked;
        for (const auto& t : op.D.terms) c.expect(term_is_odd(op.reg, t), op.name + " even term " + t.origin);
        c.expect(apply_operator(op.reg, op.D, AlgebraElement::one(op.D.rank)).is_zero(), op.name + " kills 1");
        for (const auto& w : enumerate_words(op.reg, op.gens, Rational(3))) {
            auto x = AlgebraElement::word(op.reg, w, op.D.rank);
            auto dx = apply_operator(op.reg, op.D, x);
            if (x.is_zero() || dx.is_zero()) continue;
            c.expect(dx.parity(op.reg) == (*x.parity(op.reg) + Parity::odd), op.name + " parity shift");
        }
    }
    c.note(str_int(static_cast<long>(ops.size())) + " operators, " + std::to_string(monomials) + " monomials");

    auto flip = [](DifferentialOperator d, const std::vector<std::string>& origins) {
        for (auto& t : d.terms)
            if (std::find(origins.begin(), origins.end(), t.origin) != origins.end())
                t.coefficient = t.coefficient.scaled(-1);
        return d;
    };
    auto ng = build_surface_model(DividedSurface::build(disconnected_region_spec()), 1, {});
    c.expect(!verify_square_zero(ng.reg, flip(ng.D, {"v_zpa^1"}), ng.reg.all(), Rational(5), 4).ok,
             "disconnected region single flip caught");
    // V_g lines come in cancelling pairs, so the mutation flips a line and a crossing into one saddle.
    auto v22 = build_surface_model(DividedSurface::build(vg_family_spec(2, 2)), 1, {});
    c.expect(!verify_square_zero(v22.reg, flip(v22.D, {"v1a^1", "x1a^1"}), v22.reg.all(), Rational(5), 4).ok,
             "V(2,2) paired flip caught");

    // Every single-term flip of every bundled operator, reported for the record.
    std::size_t flips = 0, caught = 0;
    for (const auto& op : ops)
        for (std::size_t i = 0; i < op.D.terms.size(); ++i) {
            auto d = op.D;
            d.terms[i].coefficient = d.terms[i].coefficient.scaled(-1);
            ++flips;
            caught += verify_square_zero(op.reg, d, op.gens, Rational(5), 4).ok ? 0 : 1;
        }
    c.note(std::to_string(caught) + "/" + std::to_string(flips) + " single-term flips change D^2");
    return c;
}

Check morse(const std::vector<Bundled>& corpus) {
    Check c;
    int n = 0;
    std::vector<std::pair<std::string, SurfaceSpec>> specs;
    for (const auto& b : corpus)
        if (b.doc.kind == Document::Kind::surface) specs.push_back({b.name, b.doc.surface});
    for (auto [g, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {4, 3}})
        specs.push_back({"vg_" + str_int(g) + "_" + str_int(k), vg_family_spec(g, k)});
    for (const auto& [name, spec] : specs) {
        auto ds = DividedSurface::build(spec);
        auto want = betti_oracle(spec);
        auto got = morse_homology(ds);
        c.expect(want[0] == 1, name + " connected");
        c.expect(got == std::array<int, 3>{1, 2 * ds.genus(), 1}, name + " (1, 2g, 1)");
        c.expect(got == want, name + " matches oracle");
        ++n;
    }
    c.note(str_int(n) + " surfaces");
    return c;
}

Check ech_arithmetic() {
    Check c;
    auto ng = build_surface_model(DividedSurface::build(disconnected_region_spec()), 1, {});
    auto cx = ech_from_surface_model(ng, Rational(3));
    const OrbitSet pair{{"zm1", 1}, {"zp", 1}};
    bool found = false;
    for (const auto& u : cx.contributions) {
        if (u.rc.from != pair || !u.rc.to.empty()) continue;
        found = true;
        c.expect(u.rc.c_tau == 0 && u.rc.Q_tau == 0, "c = Q = 0");
        // By hand: CZ(zm1) = 1 and CZ(zp) = 0; J+ sees no iterates below 1 plus two distinct orbits.
        long I = cx.orbit("zm1").cz_of(1) + cx.orbit("zp").cz_of(1);
        long J = 2;
        long bound = 2 * (u.genus - 1 + 2);
        c.expect(ech_index(cx, u.rc) == 1 && I == 1, "I = 1");
        c.expect(j_plus(cx, u.rc) == 2 && J == 2, "J+ = 2");
        c.expect(ji_bound(cx, u) == bound && j_plus(cx, u.rc) == bound, "JI equality");
    }
    c.expect(found, "disconnected region contribution present");

    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> kind(0, 2), small(-3, 3), mult(1, 3), count(0, 3), pick(0, 5);
    int samples = 0;
    while (samples < 100) {
        EchComplex rc_cx;
        for (int i = 0; i < 6; ++i) {
            EchOrbit o;
            o.id = "o" + str_int(i);
            o.kind = static_cast<EchOrbitKind>(kind(rng));
            if (o.kind == EchOrbitKind::elliptic) o.cz = {2L * small(rng) + 1, 2L * small(rng) + 1, 2L * small(rng) + 1};
            else if (o.kind == EchOrbitKind::positive_hyperbolic) o.cz = {2L * small(rng)};
            else o.cz = {2L * small(rng) + 1};
            rc_cx.orbits.push_back(o);
        }
        auto random_set = [&] {
            OrbitSet s;
            for (int j = count(rng); j > 0; --j) {
                const auto& o = rc_cx.orbits[static_cast<std::size_t>(pick(rng))];
                s[o.id] = o.hyperbolic() ? 1 : mult(rng);
            }
            return s;
        };
        RelClassData rc{random_set(), random_set(), small(rng), small(rng)};
        int ph = 0;
        for (const auto* side : {&rc.from, &rc.to})
            for (const auto& [id, m] : *side)
                if (rc_cx.orbit(id).kind == EchOrbitKind::positive_hyperbolic) ph += m;
        c.expect(positive_hyperbolic_count(rc_cx, rc) == ph, "hyperbolic count");
        long diff = j_plus(rc_cx, rc) - ech_index(rc_cx, rc);
        c.expect(((diff - ph) % 2 + 2) % 2 == 0, "parity sample " + str_int(samples));
        ++samples;
    }
    c.note(str_int(samples) + " parity samples");
    return c;
}

const LabeledComplex* find_label(const std::vector<LabeledComplex>& v, const std::string& label) {
    for (const auto& x : v)
        if (x.label == label) return &x;
    return nullptr;
}

Check ech_invariants(const std::vector<Bundled>& corpus) {
    Check c;
    std::map<std::string, std::vector<LabeledComplex>> by_doc;
    for (const auto& b : corpus) by_doc[b.name] = document_ech_complexes(b.doc, {});

    auto toy = find_label(by_doc.at("toy_ot_ech"), "document");
    c.expect(toy != nullptr, "toy complex bundled");
    if (toy) {
        auto f = f_value(toy->cx, toy->L, false);
        c.expect(f.f && *f.f == 0, "toy f = 0");
    }

    auto v22 = find_label(by_doc.at("vg_2_2"), "planar piece 0");
    c.expect(v22 != nullptr, "V(2,2) planar complex");
    if (v22) {
        auto cert = ech_lower_bound_certificate(v22->cx, v22->L, 1);
        c.expect(cert.granted, "certificate grants k = 1");
        c.expect(cert.f.f && *cert.f.f == 1, "f = 1");
        auto dec = decompose_differential(v22->cx);
        auto suf = sufficient_condition(v22->cx, dec, subcomplex(v22->cx, v22->L, false));
        c.expect(suf.k && *suf.k == 1, "sufficient k = 1");
        const auto empty = *v22->cx.index_of({});
        auto hit = partial_sum_oracle(v22->cx, suf.x, 1);
        c.expect(hit == SparseVec{{empty, Rational(1)}}, "(d0 + d1) x = empty set");
        c.expect(partial_sum_oracle(v22->cx, suf.x, 0).count(empty) == 0, "d0 x misses the empty set");
        std::string xs;
        for (const auto& [j, q] : suf.x) xs += (xs.empty() ? "" : " + ") + to_string(q) + " " + orbit_set_str(v22->cx.generators[j]);
        c.note("x = " + xs);
    }

    int complexes = 0;
    for (const auto& [name, list] : by_doc)
        for (const auto& lc : list) {
            ++complexes;
            const std::string tag = name + "/" + lc.label;
            auto f = f_value(lc.cx, lc.L, false);
            auto fs = f_value(lc.cx, lc.L, true);
            c.expect(!f.f || !fs.f || *fs.f >= *f.f, tag + " f_simp >= f");
            c.expect(!(f.f.has_value() == false && fs.f.has_value()), tag + " f_simp finite while f infinite");
            // One bound just above each distinct generator action, plus the complex's own.
            std::set<Rational> actions;
            for (const auto& g : lc.cx.generators) actions.insert(lc.cx.action(g));
            std::vector<std::optional<Rational>> Ls{lc.L};
            for (const auto& a : actions) Ls.push_back(a + Rational(1, 7));
            for (Rational s : {Rational(2), Rational(1, 2)}) {
                auto scaled = scaling_relabel(lc.cx, s);
                for (const auto& L : Ls) {
                    std::optional<Rational> sL;
                    if (L) sL = s * *L;
                    c.expect(f_value(lc.cx, L, false).f == f_value(scaled, sL, false).f, tag + " scaling");
                }
            }
        }
    c.note(str_int(complexes) + " complexes");
    return c;
}

Check multicomplex(const std::vector<Bundled>& corpus) {
    Check c;
    int complexes = 0, agree = 0;
    for (const auto& b : corpus)
        for (const auto& lc : document_ech_complexes(b.doc, {})) {
            ++complexes;
            const std::string tag = b.name + "/" + lc.label;
            auto dec = decompose_differential(lc.cx, 4);
            c.expect(dec.relations_checked >= 4, tag + " relations checked");
            // Recompute sum_{i+j=k} d_i d_j on every generator from the parts.
            const std::size_t N = lc.cx.generators.size();
            for (int k = 0; k <= 4; ++k)
                for (std::size_t g = 0; g < N; ++g) {
                    SparseVec total;
                    for (int i = 0; i <= k; ++i) {
                        int j = k - i;
                        if (i >= static_cast<int>(dec.parts.size()) || j >= static_cast<int>(dec.parts.size())) continue;
                        auto inner = apply_part(dec.parts[static_cast<std::size_t>(j)], SparseVec{{g, Rational(1)}});
                        axpy(total, Rational(1), apply_part(dec.parts[static_cast<std::size_t>(i)], inner));
                    }
                    c.expect(total.empty(), tag + " relation k=" + str_int(k));
                }
            auto f = f_value(lc.cx, dec, subcomplex(lc.cx, lc.L, false));
            auto suf = sufficient_condition(lc.cx, dec, subcomplex(lc.cx, lc.L, false));
            bool same = f.f == suf.k;
            agree += same;
            c.expect(same, tag + " f vs sufficient");
        }
    c.note(str_int(agree) + "/" + str_int(complexes) + " complexes agree");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path(TORSIONKIT_DATA_DIR);
    std::vector<Bundled> corpus;
    try {
        corpus = load_corpus(data);
    } catch (const std::exception& e) {
        std::cerr << "cannot load corpus from " << data << ": " << e.what() << "\n";
        return 2;
    }

    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"planar torsion certificates", planar_certificates},
        {"Omega-twisted coefficients", omega_twisting},
        {"disconnected negative region model", disconnected_region},
        {"higher order torsion in V(2,2) and V(3,3)", higher_order},
        {"constructive primitives via the bracket", bracket_primitive},
        {"structural suite on bundled differentials", [&] { return structural(corpus); }},
        {"Morse homology of bundled surfaces", [&] { return morse(corpus); }},
        {"ECH index arithmetic and parity", ech_arithmetic},
        {"ECH invariants f, f_simp and scaling", [&] { return ech_invariants(corpus); }},
        {"multicomplex relations and survival vs linear solve", [&] { return multicomplex(corpus); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        std::ostringstream line;
        line << (c.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " ["
             << ms.count() << " ms]";
        for (const auto& n : c.notes) line << "; " << n;
        std::cout << line.str() << "\n";
        for (std::size_t k = 0; k < c.failures.size() && k < 8; ++k) std::cout << "    - " << c.failures[k] << "\n";
        if (c.failures.size() > 8) std::cout << "    - ... " << (c.failures.size() - 8) << " more\n";
        failed += c.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
