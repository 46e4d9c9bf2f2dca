#pragma once

#include "torsionkit/operator.hpp"
#include "torsionkit/reeb.hpp"
#include "torsionkit/surface.hpp"

#include <map>
#include <string>
#include <vector>

namespace tk {

struct Cylinder {
    std::string flow_line;  // line id, or the critical point id for a trivial cylinder
    bool trivial = false;
    int cover = 1;
    std::vector<std::size_t> positive;  // indices into the orbit list
    std::vector<std::size_t> negative;
    int type = 0;  // 1..5, 0 for trivial
    int fredholm_index = 0;
    int sign = 1;
    Exponent h2_class;
};

std::vector<Cylinder> enumerate_cylinders(const DividedSurface& ds, const std::vector<ReebOrbit>& orbits,
                                          int cover_max);

int fredholm_index(const std::vector<ReebOrbit>& orbits, const std::vector<std::size_t>& positive,
                   const std::vector<std::size_t>& negative);

// ind > 2g - 2 + #(ends at even-CZ orbits) with g = 0.
bool automatic_transversality_check(const Cylinder& c, const std::vector<ReebOrbit>& orbits);

// Branched covers of trivial cylinders satisfy ind >= 2g + 2(#positive ends - 1);
// records below that bound are refused.
void check_branched_cover_record(int genus, int positive_ends, int index);

struct CountEntry {
    std::vector<std::string> positive_orbits;
    Rational total = 0;
    std::map<int, Rational> by_cover;
    std::vector<std::string> lines;
};

struct CountTable {
    int max_ends = 0;
    // Keyed by the sorted positive-end orbit names.
    std::map<std::vector<std::string>, CountEntry> entries;
    // Number of index-1 curves with exactly r positive ends and no negative end.
    std::map<int, int> curves_by_ends;
};

CountTable count_index1_positive_only(const std::vector<ReebOrbit>& orbits, const std::vector<Cylinder>& cylinders,
                                      int max_g_plus_r, const Rational& action_bound);

enum class CoverConvention {
    deck_quotient,  // n_g = n for the n-fold cover
    unweighted      // n_g = 1
};

struct CoefficientConfig {
    std::size_t rank = 0;
    CoverConvention convention = CoverConvention::deck_quotient;
};

// Checks that every broken two-step path min -> saddle -> max cancels in
// each z-exponent separately; throws ValidationError otherwise.
void check_class_consistency(const DividedSurface& ds, std::size_t rank);

DifferentialOperator assemble_sft_differential(const DividedSurface& ds, const std::vector<ReebOrbit>& orbits,
                                               const Registry& reg, const std::vector<Cylinder>& cylinders,
                                               const CoefficientConfig& config);

// Everything the model pipelines need, built in one place.
struct SurfaceModel {
    DividedSurface ds;
    std::vector<ReebOrbit> orbits;
    Registry reg;
    std::vector<Cylinder> cylinders;
    DifferentialOperator D;
    int cover_max = 1;
};

SurfaceModel build_surface_model(DividedSurface ds, int cover_max, const CoefficientConfig& config);

}  // namespace tk
