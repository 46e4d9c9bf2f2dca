#pragma once

#include "torsionkit/cylinders.hpp"
#include "torsionkit/linalg.hpp"
#include "torsionkit/torsion.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tk {

enum class EchOrbitKind { elliptic, positive_hyperbolic, negative_hyperbolic };

std::string kind_name(EchOrbitKind k);
std::optional<EchOrbitKind> parse_kind(const std::string& s);

struct EchOrbit {
    std::string id;
    EchOrbitKind kind = EchOrbitKind::elliptic;
    Rational action = 1;
    // CZ of the k-fold iterate is cz[k-1]; the last entry repeats past the end.
    std::vector<long> cz{1};

    long cz_of(int k) const;
    bool hyperbolic() const { return kind != EchOrbitKind::elliptic; }
};

// Orbit id -> multiplicity. Iteration order is the canonical order.
using OrbitSet = std::map<std::string, int>;

std::string orbit_set_str(const OrbitSet& s);

struct RelClassData {
    OrbitSet from;
    OrbitSet to;
    long c_tau = 0;
    long Q_tau = 0;
};

struct EchContribution {
    RelClassData rc;
    int sign = 1;
    int genus = 0;
    OrbitSet n_plus;   // ends per orbit; empty means one end per orbit of the source
    OrbitSet n_minus;  // same for the target
    bool irreducible = false;    // irreducible and somewhere injective
    bool ind_equals_I = false;
    std::string origin;

    int total_positive_ends() const;
};

using CurveEdge = std::pair<OrbitSet, OrbitSet>;

struct EchComplex {
    std::vector<EchOrbit> orbits;
    std::vector<OrbitSet> generators;
    std::vector<EchContribution> contributions;
    std::vector<CurveEdge> extra_curves;  // non-differential curves, used for simplicity only
    std::string origin;

    const EchOrbit& orbit(const std::string& id) const;
    Rational action(const OrbitSet& s) const;
    bool admissible(const OrbitSet& s) const;
    std::optional<std::size_t> index_of(const OrbitSet& s) const;
};

long ech_index(const EchComplex& cx, const RelClassData& rc);
long j_plus(const EchComplex& cx, const RelClassData& rc);
// Right-hand side 2(g - 1 + |alpha| + sum(N+ - 1) + sum(N- - 1)).
long ji_bound(const EchComplex& cx, const EchContribution& u);
// Number of positive hyperbolic orbits among source and target, with repetition.
int positive_hyperbolic_count(const EchComplex& cx, const RelClassData& rc);

// Checks every structural invariant and inserts the empty set as a generator
// when missing. Throws ValidationError with a locus.
void validate_ech_complex(EchComplex& cx);

struct Decomposition {
    // parts[k][j] is the image of generator j under d_k.
    std::vector<std::vector<SparseVec>> parts;
    int relations_checked = 0;  // relations verified for every total degree up to this
};

// Throws ValidationError naming a witness when a relation fails.
Decomposition decompose_differential(const EchComplex& cx, int check_up_to = 4);

struct Subcomplex {
    std::vector<bool> keep;
    std::optional<Rational> L;
    bool simple_only = false;
};

Subcomplex subcomplex(const EchComplex& cx, const std::optional<Rational>& L, bool simple_only);

struct FValue {
    std::optional<int> f;         // nullopt means the empty set survives every page
    std::vector<SparseVec> chains;  // y_0 .. y_f over generator indices
    int pages_searched = 0;
};

FValue f_value(const EchComplex& cx, const Decomposition& dec, const Subcomplex& sub);
FValue f_value(const EchComplex& cx, const std::optional<Rational>& L, bool simple_only);

struct SufficientSolve {
    std::optional<int> k;
    SparseVec x;
};

// Least k such that (d_0 + ... + d_k) x = empty set for some chain x.
SufficientSolve sufficient_condition(const EchComplex& cx, const Decomposition& dec, const Subcomplex& sub);

std::vector<CurveEdge> default_curve_graph(const EchComplex& cx);

// simple[j] for each generator j.
std::vector<bool> simplicity_closure(const EchComplex& cx, const std::vector<CurveEdge>& curve_graph);

struct EchCountKey {
    OrbitSet alpha;
    long c_tau = 0;
    long Q_tau = 0;
    int genus = 0;
    int n_plus = 0;
    auto operator<=>(const EchCountKey&) const = default;
};

struct EchCertificate {
    bool granted = false;
    int k = 0;
    std::optional<Rational> L;
    std::map<EchCountKey, Rational> counts;
    std::optional<EchCountKey> first_nonzero;
    FValue f;
};

EchCertificate ech_lower_bound_certificate(const EchComplex& cx, const std::optional<Rational>& L, int k);

EchComplex scaling_relabel(const EchComplex& cx, const Rational& c);

// Simple orbits over the critical points; contributions are the simple index-1
// cylinders together with trivial cylinders over disjoint orbits.
EchComplex ech_from_surface_model(const SurfaceModel& model, const Rational& L);

// Gradient cylinder pairs plus the page curve to the empty set.
EchComplex ech_from_planar(const PlanarTorsionDescriptor& desc, const std::optional<Rational>& L = std::nullopt);

}  // namespace tk
