#include "torsionkit/surface.hpp"

#include "torsionkit/errors.hpp"
#include "torsionkit/linalg.hpp"

#include <numeric>
#include <set>

namespace tk {

std::string side_name(Side s) { return s == Side::plus ? "plus" : "minus"; }

namespace {

std::string side_locus(Side s) { return "/surface/" + side_name(s); }

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Returns circle id -> component index for one side.
std::map<std::string, int> check_side(const SidedSurface& s) {
    const std::string base = side_locus(s.side);
    if (s.components.empty()) throw ValidationError(base + "/components", "side has no components");
    std::map<std::string, int> circle_component;
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        const auto& comp = s.components[c];
        const std::string loc = base + "/components/" + std::to_string(c);
        if (comp.genus < 0) throw ValidationError(loc + "/genus", "negative genus");
        if (comp.boundary.empty()) throw ValidationError(loc + "/boundary", "component has empty boundary");
        for (const auto& circ : comp.boundary)
            if (!circle_component.emplace(circ, static_cast<int>(c)).second)
                throw ValidationError(loc + "/boundary", "duplicate boundary circle '" + circ + "'");
    }
    std::vector<int> idx0(s.components.size(), 0), idx1(s.components.size(), 0);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < s.critical_points.size(); ++i) {
        const auto& p = s.critical_points[i];
        const std::string loc = base + "/critical_points/" + std::to_string(i);
        if (p.id.empty() || !ids.insert(p.id).second) throw ValidationError(loc + "/id", "missing or duplicate id");
        if (circle_component.count(p.id)) throw ValidationError(loc + "/id", "id collides with a boundary circle");
        if (p.component < 0 || p.component >= static_cast<int>(s.components.size()))
            throw ValidationError(loc + "/component", "component index out of range");
        if (p.index == 0) ++idx0[p.component];
        else if (p.index == 1) ++idx1[p.component];
        else throw ValidationError(loc + "/index", "h on a side may only have index 0 or 1");
    }
    for (std::size_t c = 0; c < s.components.size(); ++c) {
        const auto& comp = s.components[c];
        int chi = 2 - 2 * comp.genus - static_cast<int>(comp.boundary.size());
        if (idx0[c] - idx1[c] != chi)
            throw ValidationError(base + "/components/" + std::to_string(c),
                                  "Euler characteristic mismatch: #index0 - #index1 = " +
                                      std::to_string(idx0[c] - idx1[c]) + " but chi = " + std::to_string(chi));
    }
    return circle_component;
}

}  // namespace

DividedSurface DividedSurface::build(SurfaceSpec spec) {
    spec.plus.side = Side::plus;
    spec.minus.side = Side::minus;
    DividedSurface ds;
    auto plus_circles = check_side(spec.plus);
    auto minus_circles = check_side(spec.minus);
    if (plus_circles.size() != minus_circles.size())
        throw ValidationError("/surface/gammas", "boundary circle counts differ: plus has " +
                                                    std::to_string(plus_circles.size()) + ", minus has " +
                                                    std::to_string(minus_circles.size()));
    if (spec.gammas.size() != plus_circles.size())
        throw ValidationError("/surface/gammas", "need exactly one gamma component per boundary circle pair");

    for (Side side : {Side::minus, Side::plus}) {
        const auto& s = side == Side::plus ? spec.plus : spec.minus;
        for (const auto& p : s.critical_points) {
            if (ds.crit_index_.count(p.id))
                throw ValidationError(side_locus(side) + "/critical_points", "id '" + p.id + "' used on both sides");
            int eps = side == Side::minus ? p.index : (p.index == 0 ? 2 : 1);
            ds.crit_index_.emplace(p.id, ds.crit_.size());
            ds.crit_.push_back(CriticalInfo{p.id, side, p.component, p.index, eps});
        }
    }

    // Gluing, connectivity and genus.
    const std::size_t nminus = spec.minus.components.size();
    UnionFind uf(nminus + spec.plus.components.size());
    std::set<std::string> used_plus, used_minus;
    std::vector<long> class_sum(static_cast<std::size_t>(std::max(spec.h1_rank, 0)), 0);
    for (std::size_t i = 0; i < spec.gammas.size(); ++i) {
        const auto& g = spec.gammas[i];
        const std::string loc = "/surface/gammas/" + std::to_string(i);
        if (g.id.empty() || !ds.gamma_index_.emplace(g.id, i).second)
            throw ValidationError(loc + "/id", "missing or duplicate gamma id");
        auto pc = plus_circles.find(g.plus_circle);
        auto mc = minus_circles.find(g.minus_circle);
        if (pc == plus_circles.end()) throw ValidationError(loc + "/plus_circle", "unknown plus circle");
        if (mc == minus_circles.end()) throw ValidationError(loc + "/minus_circle", "unknown minus circle");
        if (!used_plus.insert(g.plus_circle).second || !used_minus.insert(g.minus_circle).second)
            throw ValidationError(loc, "gluing is not a bijection");
        uf.unite(static_cast<std::size_t>(mc->second), nminus + static_cast<std::size_t>(pc->second));
        if (g.h1_class.size() != class_sum.size())
            throw ValidationError(loc + "/h1_class", "class length differs from h1_rank");
        for (std::size_t j = 0; j < class_sum.size(); ++j) class_sum[j] += g.h1_class[j];
    }
    for (std::size_t c = 1; c < uf.parent.size(); ++c)
        if (uf.find(c) != uf.find(0)) throw ValidationError("/surface/gammas", "glued surface is disconnected");
    for (long v : class_sum)
        if (v != 0) throw ValidationError("/surface/gammas", "gamma h1 classes do not sum to zero");

    int chi = 0;
    for (const auto* s : {&spec.plus, &spec.minus})
        for (const auto& c : s->components) chi += 2 - 2 * c.genus - static_cast<int>(c.boundary.size());
    ds.chi_ = chi;
    ds.genus_ = (2 - chi) / 2;
    if (spec.h1_rank != 2 * ds.genus_)
        throw ValidationError("/surface/h1_rank", "h1_rank must be 2*genus = " + std::to_string(2 * ds.genus_));
    auto counts = ds.index_counts();
    if (counts[0] - counts[1] + counts[2] != chi)
        throw ValidationError("/surface", "critical points of h_eps do not match chi(Sigma)");

    // Flow lines.
    for (Side side : {Side::minus, Side::plus}) {
        const auto& s = side == Side::plus ? spec.plus : spec.minus;
        const auto& circles = side == Side::plus ? plus_circles : minus_circles;
        std::set<std::string> ids;
        for (std::size_t i = 0; i < s.flow_lines.size(); ++i) {
            const auto& l = s.flow_lines[i];
            const std::string loc = side_locus(side) + "/flow_lines/" + std::to_string(i);
            if (l.sign != 1 && l.sign != -1) throw ValidationError(loc + "/sign", "sign must be +1 or -1");
            auto endpoint = [&](const std::string& id, const char* field) -> int {
                auto it = ds.crit_index_.find(id);
                if (it != ds.crit_index_.end()) {
                    const auto& info = ds.crit_[it->second];
                    if (info.side != side) throw ValidationError(loc + "/" + field, "endpoint on the other side");
                    return info.component;
                }
                auto c = circles.find(id);
                if (c == circles.end()) throw ValidationError(loc + "/" + field, "unknown endpoint '" + id + "'");
                return c->second;
            };
            int cf = endpoint(l.from, "from");
            int ct = endpoint(l.to, "to");
            if (cf != ct) throw ValidationError(loc, "flow line joins different components");
            bool fc = ds.is_critical(l.from), tc = ds.is_critical(l.to);
            if (!fc && !tc) throw ValidationError(loc, "flow line needs a critical endpoint");
            if (fc && tc) {
                int a = ds.critical(l.from).eps_index, b = ds.critical(l.to).eps_index;
                if (a == 1 && b == 1) throw ValidationError(loc, "saddle-saddle connection");
                if (a >= b) throw ValidationError(loc, "flow line must ascend in h_eps index");
            }
        }
    }
    std::set<std::string> crossing_ids;
    for (std::size_t i = 0; i < spec.crossing.size(); ++i) {
        const auto& x = spec.crossing[i];
        const std::string loc = "/surface/crossing_lines/" + std::to_string(i);
        if (x.id.empty() || !crossing_ids.insert(x.id).second) throw ValidationError(loc + "/id", "missing or duplicate id");
        if (x.sign != 1 && x.sign != -1) throw ValidationError(loc + "/sign", "sign must be +1 or -1");
        if (!ds.is_critical(x.from) || ds.critical(x.from).side != Side::minus)
            throw ValidationError(loc + "/from", "must be a minus-side critical point");
        if (!ds.is_critical(x.to) || ds.critical(x.to).side != Side::plus)
            throw ValidationError(loc + "/to", "must be a plus-side critical point");
        auto git = ds.gamma_index_.find(x.through);
        if (git == ds.gamma_index_.end()) throw ValidationError(loc + "/through", "unknown gamma component");
        const auto& g = spec.gammas[git->second];
        if (minus_circles.at(g.minus_circle) != ds.critical(x.from).component ||
            plus_circles.at(g.plus_circle) != ds.critical(x.to).component)
            throw ValidationError(loc + "/through", "gamma component does not bound the endpoint components");
        if (ds.critical(x.from).eps_index == 1 && ds.critical(x.to).eps_index == 1)
            throw ValidationError(loc, "saddle-saddle connection");
    }
    ds.spec_ = std::move(spec);
    return ds;
}

const CriticalInfo& DividedSurface::critical(const std::string& id) const {
    auto it = crit_index_.find(id);
    if (it == crit_index_.end()) throw ValidationError("", "unknown critical point '" + id + "'");
    return crit_[it->second];
}

const GammaComponent& DividedSurface::gamma(const std::string& id) const {
    auto it = gamma_index_.find(id);
    if (it == gamma_index_.end()) throw ValidationError("", "unknown gamma component '" + id + "'");
    return spec_.gammas[it->second];
}

std::array<int, 3> DividedSurface::index_counts() const {
    std::array<int, 3> c{0, 0, 0};
    for (const auto& p : crit_) ++c[static_cast<std::size_t>(p.eps_index)];
    return c;
}

std::vector<FlowLineRecord> enumerate_flow_lines(const DividedSurface& ds) {
    std::vector<FlowLineRecord> out;
    for (Side side : {Side::minus, Side::plus}) {
        const auto& s = side == Side::plus ? ds.spec().plus : ds.spec().minus;
        for (const auto& l : s.flow_lines) {
            FlowLineRecord r;
            r.id = l.id;
            r.from = l.from;
            r.to = l.to;
            r.side = side;
            r.sign = l.sign;
            r.from_index = ds.is_critical(l.from) ? ds.critical(l.from).eps_index : -1;
            r.to_index = ds.is_critical(l.to) ? ds.critical(l.to).eps_index : -1;
            r.touches_boundary = r.from_index < 0 || r.to_index < 0;
            out.push_back(std::move(r));
        }
    }
    for (const auto& x : ds.spec().crossing) {
        FlowLineRecord r;
        r.id = x.id;
        r.from = x.from;
        r.to = x.to;
        r.through = x.through;
        r.crosses_gamma = true;
        r.sign = x.sign;
        r.from_index = ds.critical(x.from).eps_index;
        r.to_index = ds.critical(x.to).eps_index;
        r.h2_class = x.h2_class;
        out.push_back(std::move(r));
    }
    return out;
}

MorseComplex morse_complex(const DividedSurface& ds) {
    MorseComplex mc;
    std::map<std::string, std::size_t> pos;
    for (const auto& p : ds.critical_points()) {
        auto& g = mc.generators[static_cast<std::size_t>(p.eps_index)];
        pos[p.id] = g.size();
        g.push_back(p.id);
    }
    mc.d1.assign(mc.generators[0].size(), std::vector<Rational>(mc.generators[1].size(), 0));
    mc.d2.assign(mc.generators[1].size(), std::vector<Rational>(mc.generators[2].size(), 0));
    for (const auto& l : enumerate_flow_lines(ds)) {
        if (l.touches_boundary || l.to_index != l.from_index + 1) continue;
        auto& m = l.to_index == 1 ? mc.d1 : mc.d2;
        m[pos.at(l.from)][pos.at(l.to)] += l.sign;
    }
    return mc;
}

std::array<int, 3> morse_homology(const DividedSurface& ds) {
    MorseComplex mc = morse_complex(ds);
    const std::size_t n0 = mc.generators[0].size(), n1 = mc.generators[1].size(), n2 = mc.generators[2].size();
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t k = 0; k < n2; ++k) {
            Rational s = 0;
            for (std::size_t j = 0; j < n1; ++j) s += mc.d1[i][j] * mc.d2[j][k];
            if (s != 0)
                throw ValidationError("/surface", "signed flow data violates d^2 = 0 between " + mc.generators[0][i] +
                                                      " and " + mc.generators[2][k]);
        }
    int r1 = static_cast<int>(matrix_rank(mc.d1));
    int r2 = static_cast<int>(matrix_rank(mc.d2));
    return {static_cast<int>(n0) - r1, static_cast<int>(n1) - r1 - r2, static_cast<int>(n2) - r2};
}

bool null_homology_check(const DividedSurface& ds, const std::vector<std::pair<std::string, int>>& asymptotics) {
    std::vector<long> sum(static_cast<std::size_t>(ds.spec().h1_rank), 0);
    for (const auto& [id, mult] : asymptotics) {
        if (mult < 1) throw ValidationError("", "asymptotic multiplicities must be positive");
        const auto& g = ds.gamma(id);
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += mult * g.h1_class[j];
    }
    for (long v : sum)
        if (v != 0) return false;
    return true;
}

std::size_t gamma_class_rank(const DividedSurface& ds) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& g : ds.spec().gammas) {
        std::vector<Rational> r;
        for (long v : g.h1_class) r.emplace_back(v);
        rows.push_back(std::move(r));
    }
    return matrix_rank(rows);
}

}  // namespace tk
