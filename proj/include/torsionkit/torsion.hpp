#pragma once

#include "torsionkit/cylinders.hpp"
#include "torsionkit/operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tk {

struct PlanarTorsionDescriptor {
    int m = 0;  // binding orbits
    int n = 1;  // boundary tori
    int r = 0;  // interior interface tori
    std::size_t lattice_rank = 0;
    Exponent page_class;                 // empty means zero
    std::vector<Exponent> torus_classes;  // empty means all zero
    std::string origin;

    int k0() const { return m + n + 2 * r - 1; }
};

struct CoefficientMode {
    enum class Kind { untwisted, twisted, full };
    Kind kind = Kind::untwisted;
    std::vector<Rational> omega;  // used when twisted
};

// Quotient of the exponent lattice matching the coefficient mode. A twisted
// functional maps onto its (cyclic) image, rescaled to the integers.
LatticeMap coefficient_projection(const CoefficientMode& mode, std::size_t source_rank);

AlgebraElement coefficient_morphism(const AlgebraElement& x, const LatticeMap& projection);

struct PlanarModel {
    PlanarTorsionDescriptor desc;
    Registry reg;
    DifferentialOperator D;
    AlgebraElement F;
    std::vector<GenId> gens;
    Rational natural_action_bound;  // just above the action of F
};

PlanarModel planar_torsion_differential(const PlanarTorsionDescriptor& desc, const LatticeMap& projection);

struct TorsionBound {
    int k = 0;
    AlgebraElement witness;
    std::string method;  // "curve monomial" or "linear solve"
};

// Least k <= bounds.hbar_bound such that hbar^k has a primitive in the truncation.
std::optional<TorsionBound> torsion_upper_bound(const Registry& reg, const DifferentialOperator& D,
                                                const std::vector<GenId>& gens, const SolveBounds& bounds);

struct GammaConfiguration {
    std::vector<std::pair<std::string, int>> ends;  // (gamma id, multiplicity), one entry per end
    bool null_homologous = false;
};

struct LowerBoundCertificate {
    bool granted = false;
    int K = 0;
    Rational action_bound;
    CountTable counts;
    std::vector<std::string> first_nonzero;
    Rational first_nonzero_count = 0;
    std::vector<GammaConfiguration> gamma_configurations;
    std::size_t gamma_rank = 0;
    std::size_t gamma_count = 0;
    bool solver_crosscheck_failed_to_find_primitive = false;
};

LowerBoundCertificate lower_bound_certificate(const SurfaceModel& model, int K, const SolveBounds& bounds);

// Genus-zero pieces of the divided surface, each read as a planar torsion
// domain with pages bounded by its interface tori.
std::vector<PlanarTorsionDescriptor> planar_descriptors_from_surface(const DividedSurface& ds);

}  // namespace tk
