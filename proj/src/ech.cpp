#include "torsionkit/ech.hpp"

#include "torsionkit/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace tk {

std::string kind_name(EchOrbitKind k) {
    switch (k) {
        case EchOrbitKind::elliptic: return "elliptic";
        case EchOrbitKind::positive_hyperbolic: return "positive_hyperbolic";
        case EchOrbitKind::negative_hyperbolic: return "negative_hyperbolic";
    }
    return "?";
}

std::optional<EchOrbitKind> parse_kind(const std::string& s) {
    for (auto k : {EchOrbitKind::elliptic, EchOrbitKind::positive_hyperbolic, EchOrbitKind::negative_hyperbolic})
        if (kind_name(k) == s) return k;
    return std::nullopt;
}

long EchOrbit::cz_of(int k) const {
    if (cz.empty()) throw ValidationError("", "orbit " + id + " has no CZ data");
    std::size_t i = static_cast<std::size_t>(std::max(k, 1) - 1);
    return cz[std::min(i, cz.size() - 1)];
}

std::string orbit_set_str(const OrbitSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [id, m] : s) {
        if (!first) out += ", ";
        first = false;
        out += id;
        if (m != 1) out += "^" + std::to_string(m);
    }
    return out + "}";
}

int EchContribution::total_positive_ends() const {
    int n = 0;
    if (n_plus.empty()) return static_cast<int>(rc.from.size());
    for (const auto& [id, c] : n_plus) n += c;
    return n;
}

const EchOrbit& EchComplex::orbit(const std::string& id) const {
    for (const auto& o : orbits)
        if (o.id == id) return o;
    throw ValidationError("/ech_complex/orbits", "unknown orbit '" + id + "'");
}

Rational EchComplex::action(const OrbitSet& s) const {
    Rational a = 0;
    for (const auto& [id, m] : s) a += m * orbit(id).action;
    return a;
}

bool EchComplex::admissible(const OrbitSet& s) const {
    for (const auto& [id, m] : s)
        if (m < 1 || (orbit(id).hyperbolic() && m != 1)) return false;
    return true;
}

std::optional<std::size_t> EchComplex::index_of(const OrbitSet& s) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i] == s) return i;
    return std::nullopt;
}

namespace {

long cz_sum(const EchComplex& cx, const OrbitSet& s, bool strict_upper) {
    long total = 0;
    for (const auto& [id, m] : s) {
        const auto& o = cx.orbit(id);
        for (int k = 1; k <= (strict_upper ? m - 1 : m); ++k) total += o.cz_of(k);
    }
    return total;
}

int ends_excess(const OrbitSet& ends) {
    int n = 0;
    for (const auto& [id, c] : ends) n += c - 1;
    return n;
}

OrbitSet default_ends(const OrbitSet& s) {
    OrbitSet e;
    for (const auto& [id, m] : s) e[id] = 1;
    return e;
}

bool positive_hyperbolic(const EchComplex& cx, const std::string& id) {
    return cx.orbit(id).kind == EchOrbitKind::positive_hyperbolic;
}

// Sign of reordering a product of orbits into canonical order; positive
// hyperbolic orbits are the odd ones.
int koszul_sign(const EchComplex& cx, const std::vector<std::string>& seq) {
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[j] < seq[i] && positive_hyperbolic(cx, seq[i]) && positive_hyperbolic(cx, seq[j])) sign = -sign;
    return sign;
}

std::vector<std::string> expand(const OrbitSet& s) {
    std::vector<std::string> out;
    for (const auto& [id, m] : s)
        for (int i = 0; i < m; ++i) out.push_back(id);
    return out;
}

int juxtaposition_sign(const EchComplex& cx, const OrbitSet& curve, const OrbitSet& rest) {
    auto seq = expand(curve);
    auto r = expand(rest);
    seq.insert(seq.end(), r.begin(), r.end());
    return koszul_sign(cx, seq);
}

OrbitSet merge(const OrbitSet& a, const OrbitSet& b) {
    OrbitSet out = a;
    for (const auto& [id, m] : b) out[id] += m;
    return out;
}

// Removes a from s when a is a sub-multiset.
std::optional<OrbitSet> remove(const OrbitSet& s, const OrbitSet& a) {
    OrbitSet out = s;
    for (const auto& [id, m] : a) {
        auto it = out.find(id);
        if (it == out.end() || it->second < m) return std::nullopt;
        if ((it->second -= m) == 0) out.erase(it);
    }
    return out;
}

SparseVec apply_part(const std::vector<SparseVec>& part, const SparseVec& v) {
    SparseVec out;
    for (const auto& [j, c] : v) axpy(out, c, part[j]);
    return out;
}

std::string loc(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

}  // namespace

long ech_index(const EchComplex& cx, const RelClassData& rc) {
    return rc.c_tau + rc.Q_tau + cz_sum(cx, rc.from, false) - cz_sum(cx, rc.to, false);
}

long j_plus(const EchComplex& cx, const RelClassData& rc) {
    return -rc.c_tau + rc.Q_tau + cz_sum(cx, rc.from, true) - cz_sum(cx, rc.to, true) +
           static_cast<long>(rc.from.size()) - static_cast<long>(rc.to.size());
}

long ji_bound(const EchComplex& cx, const EchContribution& u) {
    (void)cx;
    OrbitSet np = u.n_plus.empty() ? default_ends(u.rc.from) : u.n_plus;
    OrbitSet nm = u.n_minus.empty() ? default_ends(u.rc.to) : u.n_minus;
    return 2L * (u.genus - 1 + static_cast<long>(u.rc.from.size()) + ends_excess(np) + ends_excess(nm));
}

int positive_hyperbolic_count(const EchComplex& cx, const RelClassData& rc) {
    int n = 0;
    for (const auto* s : {&rc.from, &rc.to})
        for (const auto& [id, m] : *s)
            if (positive_hyperbolic(cx, id)) n += m;
    return n;
}

void validate_ech_complex(EchComplex& cx) {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < cx.orbits.size(); ++i) {
        const auto& o = cx.orbits[i];
        const auto at = loc("/ech_complex/orbits", i);
        if (o.id.empty()) throw ValidationError(at + "/id", "orbit id must be nonempty");
        if (!ids.insert(o.id).second) throw ValidationError(at + "/id", "duplicate orbit id '" + o.id + "'");
        if (o.action <= 0) throw ValidationError(at + "/action", "orbit action must be positive");
        if (o.cz.empty()) throw ValidationError(at + "/cz", "need at least one CZ value");
    }
    auto check_set = [&](const OrbitSet& s, const std::string& at) {
        for (const auto& [id, m] : s) {
            if (!ids.count(id)) throw ValidationError(at, "unknown orbit '" + id + "'");
            if (m < 1) throw ValidationError(at, "multiplicities must be at least 1");
        }
    };
    std::set<OrbitSet> seen;
    for (std::size_t i = 0; i < cx.generators.size(); ++i) {
        const auto at = loc("/ech_complex/generators", i);
        check_set(cx.generators[i], at);
        if (!cx.admissible(cx.generators[i]))
            throw ValidationError(at, orbit_set_str(cx.generators[i]) + " is not admissible (hyperbolic multiplicity > 1)");
        if (!seen.insert(cx.generators[i]).second)
            throw ValidationError(at, "duplicate generator " + orbit_set_str(cx.generators[i]));
    }
    if (!seen.count(OrbitSet{})) cx.generators.insert(cx.generators.begin(), OrbitSet{});

    for (std::size_t i = 0; i < cx.contributions.size(); ++i) {
        const auto& u = cx.contributions[i];
        const auto at = loc("/ech_complex/contributions", i);
        check_set(u.rc.from, at + "/from");
        check_set(u.rc.to, at + "/to");
        if (!cx.index_of(u.rc.from)) throw ValidationError(at + "/from", orbit_set_str(u.rc.from) + " is not a generator");
        if (!cx.index_of(u.rc.to)) throw ValidationError(at + "/to", orbit_set_str(u.rc.to) + " is not a generator");
        if (u.sign != 1 && u.sign != -1) throw ValidationError(at + "/sign", "sign must be +1 or -1");
        if (u.genus < 0) throw ValidationError(at + "/genus", "genus must be nonnegative");
        for (const auto& [id, c] : u.n_plus)
            if (!u.rc.from.count(id) || c < 1) throw ValidationError(at + "/n_plus", "bad end count at '" + id + "'");
        for (const auto& [id, c] : u.n_minus)
            if (!u.rc.to.count(id) || c < 1) throw ValidationError(at + "/n_minus", "bad end count at '" + id + "'");
        const long I = ech_index(cx, u.rc);
        if (I != 1) throw ValidationError(at, "contribution has ECH index " + std::to_string(I) + ", expected 1");
        if (cx.action(u.rc.to) >= cx.action(u.rc.from))
            throw ValidationError(at, "contribution does not decrease action");
        const long J = j_plus(cx, u.rc);
        if (J % 2 != 0) throw ValidationError(at, "J+ = " + std::to_string(J) + " is odd");
        if (((J - I) % 2 + 2) % 2 != positive_hyperbolic_count(cx, u.rc) % 2)
            throw ValidationError(at, "J+ - I has the wrong parity for its positive hyperbolic orbits");
        if (u.irreducible) {
            const long b = ji_bound(cx, u);
            if (J < b) throw ValidationError(at, "J+ = " + std::to_string(J) + " is below the bound " + std::to_string(b));
            if (u.ind_equals_I && J != b)
                throw ValidationError(at, "J+ = " + std::to_string(J) + " but equality " + std::to_string(b) +
                                              " is forced when ind = I");
        }
    }
    for (std::size_t i = 0; i < cx.extra_curves.size(); ++i) {
        check_set(cx.extra_curves[i].first, loc("/ech_complex/extra_curves", i) + "/from");
        check_set(cx.extra_curves[i].second, loc("/ech_complex/extra_curves", i) + "/to");
    }
}

Decomposition decompose_differential(const EchComplex& cx, int check_up_to) {
    Decomposition dec;
    const std::size_t G = cx.generators.size();
    for (std::size_t i = 0; i < cx.contributions.size(); ++i) {
        const auto& u = cx.contributions[i];
        const long J = j_plus(cx, u.rc);
        if (J < 0 || J % 2 != 0)
            throw ValidationError(loc("/ech_complex/contributions", i), "J+ = " + std::to_string(J) + " is not even and nonnegative");
        const auto k = static_cast<std::size_t>(J / 2);
        if (dec.parts.size() <= k) dec.parts.resize(k + 1, std::vector<SparseVec>(G));
        auto from = cx.index_of(u.rc.from);
        auto to = cx.index_of(u.rc.to);
        if (!from || !to) throw ValidationError(loc("/ech_complex/contributions", i), "endpoint is not a generator");
        axpy(dec.parts[k][*from], Rational(u.sign), SparseVec{{*to, Rational(1)}});
    }
    const int top = std::max<int>(check_up_to, 2 * static_cast<int>(dec.parts.size()));
    for (int m = 0; m <= top; ++m) {
        for (std::size_t g = 0; g < G; ++g) {
            SparseVec total;
            for (int i = 0; i <= m; ++i) {
                const int j = m - i;
                if (i >= static_cast<int>(dec.parts.size()) || j >= static_cast<int>(dec.parts.size())) continue;
                SparseVec inner = dec.parts[static_cast<std::size_t>(j)][g];
                SparseVec outer = apply_part(dec.parts[static_cast<std::size_t>(i)], inner);
                axpy(total, Rational(1), outer);
            }
            if (!total.empty())
                throw ValidationError("/ech_complex/contributions",
                                      "multicomplex relation fails in total degree " + std::to_string(m) + " on " +
                                          orbit_set_str(cx.generators[g]) + " (coefficient " +
                                          to_string(total.begin()->second) + " at " +
                                          orbit_set_str(cx.generators[total.begin()->first]) + ")");
        }
    }
    dec.relations_checked = top;
    return dec;
}

std::vector<CurveEdge> default_curve_graph(const EchComplex& cx) {
    std::vector<CurveEdge> out;
    for (const auto& u : cx.contributions) out.emplace_back(u.rc.from, u.rc.to);
    out.insert(out.end(), cx.extra_curves.begin(), cx.extra_curves.end());
    return out;
}

std::vector<bool> simplicity_closure(const EchComplex& cx, const std::vector<CurveEdge>& curve_graph) {
    auto all_ones = [](const OrbitSet& s) {
        return std::all_of(s.begin(), s.end(), [](const auto& p) { return p.second == 1; });
    };
    std::map<OrbitSet, bool> memo;
    std::size_t budget = 200000;
    std::vector<bool> out;
    for (const auto& g : cx.generators) {
        bool simple = all_ones(g);
        std::set<OrbitSet> seen{g};
        std::deque<OrbitSet> queue{g};
        while (simple && !queue.empty()) {
            OrbitSet s = queue.front();
            queue.pop_front();
            auto hit = memo.find(s);
            if (hit != memo.end() && s != g) {
                simple = hit->second;
                continue;
            }
            for (const auto& [a, b] : curve_graph) {
                if (a.empty()) continue;
                auto rest = remove(s, a);
                if (!rest) continue;
                OrbitSet next = merge(*rest, b);
                if (!seen.insert(next).second) continue;
                if (!all_ones(next)) {
                    simple = false;
                    break;
                }
                if (--budget == 0) throw SolverError("simplicity closure exceeded its search budget");
                queue.push_back(next);
            }
        }
        memo[g] = simple;
        out.push_back(simple);
    }
    return out;
}

Subcomplex subcomplex(const EchComplex& cx, const std::optional<Rational>& L, bool simple_only) {
    Subcomplex sub;
    sub.L = L;
    sub.simple_only = simple_only;
    std::vector<bool> simple;
    if (simple_only) simple = simplicity_closure(cx, default_curve_graph(cx));
    for (std::size_t j = 0; j < cx.generators.size(); ++j) {
        bool keep = !L || cx.action(cx.generators[j]) < *L;
        if (simple_only) keep = keep && simple[j];
        sub.keep.push_back(keep);
    }
    return sub;
}

namespace {

// Kept generators connected to the empty set through differential entries.
std::vector<std::size_t> component_of_empty(const EchComplex& cx, const Decomposition& dec, const Subcomplex& sub,
                                            std::size_t empty) {
    const std::size_t G = cx.generators.size();
    std::vector<std::vector<std::size_t>> adj(G);
    for (const auto& part : dec.parts)
        for (std::size_t g = 0; g < G; ++g) {
            if (!sub.keep[g]) continue;
            for (const auto& [t, c] : part[g]) {
                if (!sub.keep[t]) continue;
                adj[g].push_back(t);
                adj[t].push_back(g);
            }
        }
    std::vector<bool> seen(G, false);
    std::vector<std::size_t> out, stack{empty};
    seen[empty] = true;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SparseVec restricted(const SparseVec& v, const Subcomplex& sub) {
    SparseVec out;
    for (const auto& [t, c] : v)
        if (sub.keep[t]) out.emplace(t, c);
    return out;
}

}  // namespace

FValue f_value(const EchComplex& cx, const Decomposition& dec, const Subcomplex& sub) {
    FValue fv;
    auto empty = cx.index_of(OrbitSet{});
    if (!empty || !sub.keep[*empty] || dec.parts.empty()) return fv;
    const auto comp = component_of_empty(cx, dec, sub, *empty);
    if (comp.size() == 1) return fv;
    const std::size_t G = cx.generators.size();
    const int K = static_cast<int>(dec.parts.size()) - 1;
    const int cap = std::min<int>(64, std::max(1, K) * static_cast<int>(comp.size()) + 1);
    for (int r = 0; r <= cap; ++r) {
        fv.pages_searched = r + 1;
        Echelon ech;
        for (int j = 0; j <= r; ++j)
            for (std::size_t g : comp) {
                SparseVec col;
                for (int i = 0; i + j <= r && i <= K; ++i)
                    for (const auto& [t, c] : restricted(dec.parts[static_cast<std::size_t>(i)][g], sub))
                        col.emplace(static_cast<std::size_t>(i + j) * G + t, c);
                ech.add_column(col, static_cast<std::size_t>(j) * G + g);
            }
        auto sol = ech.express(SparseVec{{static_cast<std::size_t>(r) * G + *empty, Rational(1)}});
        if (!sol) continue;
        fv.f = r;
        fv.chains.assign(static_cast<std::size_t>(r) + 1, SparseVec{});
        for (const auto& [tag, c] : *sol) fv.chains[tag / G].emplace(tag % G, c);
        return fv;
    }
    return fv;
}

FValue f_value(const EchComplex& cx, const std::optional<Rational>& L, bool simple_only) {
    auto dec = decompose_differential(cx);
    return f_value(cx, dec, subcomplex(cx, L, simple_only));
}

SufficientSolve sufficient_condition(const EchComplex& cx, const Decomposition& dec, const Subcomplex& sub) {
    SufficientSolve out;
    auto empty = cx.index_of(OrbitSet{});
    if (!empty || !sub.keep[*empty]) return out;
    for (std::size_t k = 0; k < dec.parts.size(); ++k) {
        Echelon ech;
        for (std::size_t g = 0; g < cx.generators.size(); ++g) {
            if (!sub.keep[g]) continue;
            SparseVec col;
            for (std::size_t i = 0; i <= k; ++i) axpy(col, Rational(1), restricted(dec.parts[i][g], sub));
            ech.add_column(col, g);
        }
        auto sol = ech.express(SparseVec{{*empty, Rational(1)}});
        if (sol) {
            out.k = static_cast<int>(k);
            out.x = *sol;
            return out;
        }
    }
    return out;
}

EchCertificate ech_lower_bound_certificate(const EchComplex& cx, const std::optional<Rational>& L, int k) {
    if (k < 0) throw ValidationError("", "k must be nonnegative");
    EchCertificate cert;
    cert.k = k;
    cert.L = L;
    for (const auto& u : cx.contributions) {
        if (!u.rc.to.empty()) continue;
        if (L && cx.action(u.rc.from) >= *L) continue;
        EchCountKey key{u.rc.from, u.rc.c_tau, u.rc.Q_tau, u.genus, u.total_positive_ends()};
        cert.counts[key] += u.sign;
    }
    cert.granted = true;
    for (const auto& [key, c] : cert.counts)
        if (key.genus + key.n_plus <= k && c != 0) {
            cert.granted = false;
            cert.first_nonzero = key;
            break;
        }
    cert.f = f_value(cx, L, false);
    if (cert.granted && cert.f.f && *cert.f.f < k)
        throw InvariantBreach("vanishing counts up to g + N+ <= " + std::to_string(k) + " but f = " +
                              std::to_string(*cert.f.f));
    return cert;
}

EchComplex scaling_relabel(const EchComplex& cx, const Rational& c) {
    if (c <= 0) throw ValidationError("/scale", "scaling factor must be positive");
    EchComplex out = cx;
    for (auto& o : out.orbits) o.action *= c;
    return out;
}

namespace {

void enumerate_sets(const EchComplex& cx, const std::vector<int>& max_mult, const Rational& L,
                    std::vector<OrbitSet>& out) {
    OrbitSet cur;
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational a) {
        if (i == cx.orbits.size()) {
            out.push_back(cur);
            if (out.size() > 20000) throw SolverError("ECH truncation produces more than 20000 generators; lower L");
            return;
        }
        rec(i + 1, a);
        for (int m = 1; m <= max_mult[i]; ++m) {
            Rational b = a + m * cx.orbits[i].action;
            if (b >= L) break;
            cur[cx.orbits[i].id] = m;
            rec(i + 1, b);
        }
        cur.erase(cx.orbits[i].id);
    };
    rec(0, Rational(0));
    std::sort(out.begin(), out.end(), [&](const OrbitSet& a, const OrbitSet& b) {
        Rational x = cx.action(a), y = cx.action(b);
        return x != y ? x < y : a < b;
    });
}

// Adds curve + trivial cylinders over every disjoint remainder that keeps
// both ends inside the generator list.
void add_with_trivial_pieces(EchComplex& cx, const OrbitSet& pos, const OrbitSet& neg, int sign, long c_tau,
                             const EchContribution& proto) {
    for (const auto& g : cx.generators) {
        auto rest = remove(g, pos);
        if (!rest) continue;
        bool disjoint = true;
        for (const auto& [id, m] : pos) disjoint = disjoint && !rest->count(id);
        for (const auto& [id, m] : neg) disjoint = disjoint && !rest->count(id);
        if (!disjoint) continue;
        OrbitSet target = merge(neg, *rest);
        if (!cx.index_of(target)) continue;
        EchContribution u = proto;
        u.rc = RelClassData{g, target, c_tau, 0};
        u.sign = sign * juxtaposition_sign(cx, pos, *rest) * juxtaposition_sign(cx, neg, *rest);
        u.irreducible = proto.irreducible && rest->empty();
        u.ind_equals_I = proto.ind_equals_I && rest->empty();
        if (!rest->empty()) {
            for (const auto& [id, m] : *rest) {
                u.n_plus[id] = m;
                u.n_minus[id] = m;
            }
            u.origin += " + trivial " + orbit_set_str(*rest);
        }
        cx.contributions.push_back(std::move(u));
    }
}

void finish_derived(EchComplex& cx) {
    try {
        validate_ech_complex(cx);
        decompose_differential(cx);
    } catch (const ValidationError& e) {
        throw InvariantBreach("derived ECH complex is inconsistent: " + std::string(e.what()));
    }
}

}  // namespace

EchComplex ech_from_surface_model(const SurfaceModel& model, const Rational& L) {
    EchComplex cx;
    cx.origin = "surface model";
    std::vector<int> max_mult;
    for (const auto& o : model.orbits) {
        if (o.cover != 1) continue;
        EchOrbit e;
        e.id = o.critical_point;
        e.kind = o.kind == OrbitKind::elliptic ? EchOrbitKind::elliptic : EchOrbitKind::positive_hyperbolic;
        e.action = o.action;
        e.cz = {o.cz};
        cx.orbits.push_back(e);
        max_mult.push_back(e.hyperbolic() ? 1 : std::max(1, model.cover_max));
    }
    enumerate_sets(cx, max_mult, L, cx.generators);
    for (const auto& c : model.cylinders) {
        if (c.trivial || c.cover != 1 || c.fredholm_index != 1) continue;
        OrbitSet pos, neg;
        for (auto i : c.positive) pos[model.orbits[i].critical_point] += 1;
        for (auto i : c.negative) neg[model.orbits[i].critical_point] += 1;
        EchContribution proto;
        proto.genus = 0;
        proto.n_plus = default_ends(pos);
        proto.n_minus = default_ends(neg);
        proto.irreducible = true;
        proto.ind_equals_I = true;
        proto.origin = c.flow_line;
        add_with_trivial_pieces(cx, pos, neg, c.sign, 0, proto);
    }
    // Every cylinder, covers included, constrains which sets are simple.
    for (const auto& c : model.cylinders) {
        if (c.trivial) continue;
        OrbitSet pos, neg;
        for (auto i : c.positive) pos[model.orbits[i].critical_point] += c.cover;
        for (auto i : c.negative) neg[model.orbits[i].critical_point] += c.cover;
        cx.extra_curves.emplace_back(pos, neg);
    }
    finish_derived(cx);
    return cx;
}

EchComplex ech_from_planar(const PlanarTorsionDescriptor& desc, const std::optional<Rational>& L) {
    if (desc.n < 1) throw ValidationError("/planar_torsion/n", "need at least one boundary torus (n >= 1)");
    if (desc.m < 0 || desc.r < 0) throw ValidationError("/planar_torsion", "m and r must be nonnegative");
    EchComplex cx;
    cx.origin = "planar torsion domain";
    const int tori = desc.n + desc.r;
    const Rational step(1, 256);
    std::vector<int> max_mult;
    const int ell_mult = desc.r > 0 ? 2 : 1;
    for (int i = 1; i <= tori; ++i) {
        cx.orbits.push_back({"e" + std::to_string(i), EchOrbitKind::elliptic, 1 + step * (2 * i), {1}});
        max_mult.push_back(ell_mult);
        cx.orbits.push_back({"h" + std::to_string(i), EchOrbitKind::positive_hyperbolic, 1 + step * (2 * i - 1), {0}});
        max_mult.push_back(1);
    }
    for (int j = 1; j <= desc.m; ++j) {
        cx.orbits.push_back({"b" + std::to_string(j), EchOrbitKind::elliptic, 1 + step * (2 * tori + j), {1}});
        max_mult.push_back(1);
    }
    OrbitSet page{{"h1", 1}};
    for (int j = 1; j <= desc.m; ++j) page["b" + std::to_string(j)] = 1;
    for (int i = 2; i <= desc.n; ++i) page["e" + std::to_string(i)] = 1;
    for (int i = desc.n + 1; i <= tori; ++i) page["e" + std::to_string(i)] = 2;
    const Rational bound = L ? *L : cx.action(page) + 1;
    enumerate_sets(cx, max_mult, bound, cx.generators);

    for (int i = 1; i <= tori; ++i) {
        const std::string e = "e" + std::to_string(i), h = "h" + std::to_string(i);
        for (int s : {1, -1}) {
            EchContribution proto;
            proto.irreducible = true;
            proto.ind_equals_I = true;
            proto.origin = std::string("gradient ") + (s > 0 ? "+" : "-") + " T" + std::to_string(i);
            add_with_trivial_pieces(cx, OrbitSet{{e, 1}}, OrbitSet{{h, 1}}, s, 0, proto);
        }
    }
    EchContribution proto;
    proto.irreducible = true;
    proto.ind_equals_I = desc.r == 0;
    proto.n_plus = page;
    proto.origin = "page";
    long c_tau = 1 - cz_sum(cx, page, false);
    add_with_trivial_pieces(cx, page, OrbitSet{}, 1, c_tau, proto);
    finish_derived(cx);
    return cx;
}

}  // namespace tk
