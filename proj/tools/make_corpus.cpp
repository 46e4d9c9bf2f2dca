// Writes the bundled example documents into a directory.
#include "torsionkit/families.hpp"
#include "torsionkit/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace tk;

namespace {

void write(const std::filesystem::path& dir, const std::string& name, const Json& j) {
    std::ofstream(dir / (name + ".json")) << j.dump(2) << "\n";
    std::cout << (dir / (name + ".json")).string() << "\n";
}

Json surface_doc(const SurfaceSpec& s, int cover_max, const std::string& description) {
    return {{"description", description},
            {"surface", surface_spec_json(s)},
            {"truncation", {{"action_bound", "5"}, {"hbar_bound", 3}, {"cover_max", cover_max}, {"exponent_box", 0}}},
            {"coefficients", {{"mode", "untwisted"}}}};
}

Json planar_doc(int m, int n, int r) {
    PlanarTorsionDescriptor d;
    d.m = m;
    d.n = n;
    d.r = r;
    return {{"description", "planar torsion domain with m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                                ", r=" + std::to_string(r)},
            {"planar_torsion", planar_json(d)},
            {"truncation", {{"action_bound", "10"}, {"hbar_bound", d.k0() + 1}, {"cover_max", 1}, {"exponent_box", 0}}},
            {"coefficients", {{"mode", "untwisted"}}}};
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);
    write(dir, "disconnected_region", surface_doc(disconnected_region_spec(), 1,
                                       "two genus one pieces on the minus side glued to one genus one piece with two "
                                       "boundary circles; one rigid two-ended plane survives"));
    for (auto [g, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}})
        write(dir, "vg_" + std::to_string(g) + "_" + std::to_string(k),
              surface_doc(vg_family_spec(g, k), 2,
                          "genus " + std::to_string(g) + " surface split along " + std::to_string(k) +
                              " circles into a planar piece and a genus " + std::to_string(g - k + 1) + " piece"));
    write(dir, "sphere", surface_doc(sphere_spec(), 1, "two disks glued along one circle"));
    write(dir, "torus", surface_doc(torus_spec(), 1, "two annuli glued into a torus"));

    write(dir, "planar_0_1_0", planar_doc(0, 1, 0));
    write(dir, "planar_0_2_0", planar_doc(0, 2, 0));
    write(dir, "planar_0_3_0", planar_doc(0, 3, 0));
    write(dir, "planar_1_2_0", planar_doc(1, 2, 0));
    write(dir, "planar_0_2_1", planar_doc(0, 2, 1));

    {
        PlanarTorsionDescriptor d;
        d.n = 2;
        d.lattice_rank = 2;
        d.page_class = {1, 0};
        d.torus_classes = {{0, 0}, {0, 1}};
        write(dir, "planar_0_2_0_twisted",
              {{"description", "second boundary torus carries a class; omega decides whether hbar stays exact"},
               {"planar_torsion", planar_json(d)},
               {"truncation", {{"action_bound", "4"}, {"hbar_bound", 2}, {"cover_max", 1}, {"exponent_box", 3}}},
               {"coefficients", {{"mode", "twisted"}, {"omega", {"0", "1"}}}}});
    }

    EchComplex toy;
    toy.orbits = {{"gamma", EchOrbitKind::positive_hyperbolic, 1, {0}}};
    toy.generators = {{}, {{"gamma", 1}}};
    EchContribution plane;
    plane.rc = {{{"gamma", 1}}, {}, 1, 0};
    plane.irreducible = true;
    plane.ind_equals_I = true;
    plane.origin = "plane bounding the overtwisted disk";
    toy.contributions = {plane};
    write(dir, "toy_ot_ech", {{"description", "one positive hyperbolic orbit bounding a rigid plane"},
                              {"ech_complex", ech_complex_json(toy)}});

    PlanarTorsionDescriptor v2;
    v2.n = 2;
    write(dir, "vg22_planar_ech", {{"description", "ECH complex of the planar piece of the genus two example"},
                                   {"ech_complex", ech_complex_json(ech_from_planar(v2))}});

    EchComplex chain;
    chain.orbits = {{"e", EchOrbitKind::elliptic, 2, {1}}, {"h", EchOrbitKind::positive_hyperbolic, 1, {0}}};
    chain.generators = {{}, {{"h", 1}}, {{"e", 1}}, {{"e", 1}, {"h", 1}}};
    EchContribution a, b;
    a.rc = {{{"e", 1}}, {{"h", 1}}, 0, 0};
    a.irreducible = true;
    a.ind_equals_I = true;
    b = a;
    b.sign = -1;
    chain.contributions = {a, b};
    write(dir, "cancelling_pair_ech", {{"description", "a cancelling cylinder pair and nothing hitting the empty set"},
                                       {"ech_complex", ech_complex_json(chain)}});
    write(dir, "empty_ech", {{"description", "no orbits"}, {"ech_complex", {{"orbits", Json::array()}}}});
    return 0;
}
