#include "torsionkit/families.hpp"

#include "torsionkit/errors.hpp"

namespace tk {

namespace {

std::string idx(const std::string& stem, int i) { return stem + std::to_string(i); }

// Two opposite-sign lines: the pattern every closed-up count in these models uses.
void cancelling_pair(SidedSurface& s, const std::string& id, const std::string& from, const std::string& to) {
    s.flow_lines.push_back({id + "a", from, to, 1});
    s.flow_lines.push_back({id + "b", from, to, -1});
}

void cancelling_crossing(SurfaceSpec& spec, const std::string& id, const std::string& from,
                         const std::string& through, const std::string& to) {
    spec.crossing.push_back({id + "a", from, through, to, 1, {}});
    spec.crossing.push_back({id + "b", from, through, to, -1, {}});
}

}  // namespace

SurfaceSpec vg_family_spec(int g, int k) {
    const int gp = g - k + 1;
    if (k < 1 || gp < 0) throw ValidationError("", "need 1 <= k <= g + 1");
    SurfaceSpec spec;
    spec.minus.side = Side::minus;
    spec.plus.side = Side::plus;
    SurfaceComponent mc{0, {}}, pc{gp, {}};
    for (int i = 1; i <= k; ++i) {
        mc.boundary.push_back(idx("m", i));
        pc.boundary.push_back(idx("p", i));
    }
    spec.minus.components.push_back(mc);
    spec.plus.components.push_back(pc);

    spec.minus.critical_points.push_back({"zmin", 0, 0});
    for (int j = 1; j <= k - 1; ++j) spec.minus.critical_points.push_back({idx("s", j), 0, 1});
    spec.plus.critical_points.push_back({"zmax", 0, 0});
    for (int j = 1; j <= 2 * gp + k - 1; ++j) spec.plus.critical_points.push_back({idx("t", j), 0, 1});

    spec.h1_rank = 2 * g;
    for (int i = 1; i <= k; ++i) {
        std::vector<long> cls(static_cast<std::size_t>(2 * g), 0);
        if (i < k) cls[static_cast<std::size_t>(i - 1)] = 1;
        else
            for (int j = 0; j < k - 1; ++j) cls[static_cast<std::size_t>(j)] = -1;
        spec.gammas.push_back({idx("G", i), idx("p", i), idx("m", i), cls});
    }
    for (int j = 1; j <= k - 1; ++j) {
        cancelling_pair(spec.minus, idx("u", j), "zmin", idx("s", j));
        cancelling_crossing(spec, idx("y", j), idx("s", j), "G1", "zmax");
    }
    for (int j = 1; j <= 2 * gp + k - 1; ++j) {
        cancelling_pair(spec.plus, idx("v", j), idx("t", j), "zmax");
        cancelling_crossing(spec, idx("x", j), "zmin", "G1", idx("t", j));
    }
    return spec;
}

SurfaceSpec disconnected_region_spec() {
    SurfaceSpec spec;
    spec.minus.side = Side::minus;
    spec.plus.side = Side::plus;
    spec.minus.components = {{1, {"m1"}}, {1, {"m2"}}};
    spec.plus.components = {{1, {"p1", "p2"}}};
    spec.minus.critical_points = {{"zm1", 0, 0}, {"s11", 0, 1}, {"s12", 0, 1},
                                  {"zm2", 1, 0}, {"s21", 1, 1}, {"s22", 1, 1}};
    spec.plus.critical_points = {{"zmax", 0, 0}, {"zp", 0, 1}, {"t2", 0, 1}, {"t3", 0, 1}};
    spec.h1_rank = 6;
    spec.gammas = {{"G1", "p1", "m1", std::vector<long>(6, 0)}, {"G2", "p2", "m2", std::vector<long>(6, 0)}};
    for (const char* s : {"s11", "s12"}) {
        cancelling_pair(spec.minus, std::string("u_") + s, "zm1", s);
        cancelling_crossing(spec, std::string("y_") + s, s, "G1", "zmax");
    }
    for (const char* s : {"s21", "s22"}) {
        cancelling_pair(spec.minus, std::string("u_") + s, "zm2", s);
        cancelling_crossing(spec, std::string("y_") + s, s, "G2", "zmax");
    }
    for (const char* t : {"zp", "t2", "t3"}) cancelling_pair(spec.plus, std::string("v_") + t, t, "zmax");
    spec.crossing.push_back({"x1", "zm1", "G1", "zp", 1, {}});
    spec.crossing.push_back({"x2", "zm2", "G2", "zp", -1, {}});
    cancelling_crossing(spec, "x_t2", "zm1", "G1", "t2");
    cancelling_crossing(spec, "x_t3", "zm2", "G2", "t3");
    return spec;
}

SurfaceSpec sphere_spec() {
    SurfaceSpec spec;
    spec.minus.side = Side::minus;
    spec.plus.side = Side::plus;
    spec.minus.components = {{0, {"m1"}}};
    spec.plus.components = {{0, {"p1"}}};
    spec.minus.critical_points = {{"zmin", 0, 0}};
    spec.plus.critical_points = {{"zmax", 0, 0}};
    spec.h1_rank = 0;
    spec.gammas = {{"G1", "p1", "m1", {}}};
    return spec;
}

SurfaceSpec torus_spec() {
    SurfaceSpec spec;
    spec.minus.side = Side::minus;
    spec.plus.side = Side::plus;
    spec.minus.components = {{0, {"m1", "m2"}}};
    spec.plus.components = {{0, {"p1", "p2"}}};
    spec.minus.critical_points = {{"zmin", 0, 0}, {"s1", 0, 1}};
    spec.plus.critical_points = {{"zmax", 0, 0}, {"t1", 0, 1}};
    spec.h1_rank = 2;
    spec.gammas = {{"G1", "p1", "m1", {1, 0}}, {"G2", "p2", "m2", {-1, 0}}};
    cancelling_pair(spec.minus, "u1", "zmin", "s1");
    cancelling_pair(spec.plus, "v1", "t1", "zmax");
    cancelling_crossing(spec, "y1", "s1", "G1", "zmax");
    cancelling_crossing(spec, "x1", "zmin", "G2", "t1");
    return spec;
}

}  // namespace tk
