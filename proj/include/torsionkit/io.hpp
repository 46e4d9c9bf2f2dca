#pragma once

#include "torsionkit/ech.hpp"
#include "torsionkit/surface.hpp"
#include "torsionkit/torsion.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace tk {

using Json = nlohmann::json;

struct Truncation {
    Rational action_bound = 5;
    int hbar_bound = 3;
    int cover_max = 1;
    int exponent_box = 0;
};

struct Document {
    enum class Kind { surface, planar, ech };
    Kind kind = Kind::surface;
    SurfaceSpec surface;
    PlanarTorsionDescriptor planar;
    EchComplex ech;
    std::optional<Rational> ech_action_bound;
    Truncation truncation;
    CoefficientMode coefficients;
    std::optional<std::size_t> full_rank;
    Json raw;
};

std::string kind_name(Document::Kind k);

// Schema check plus conversion; errors carry a JSON-pointer locus.
Document parse_document(const Json& j);

Rational parse_rational_json(const Json& j, const std::string& locus);
Json rational_json(const Rational& q);

OrbitSet parse_orbit_set(const Json& j, const std::string& locus);
Json orbit_set_json(const OrbitSet& s);

Json algebra_json(const Registry& reg, const AlgebraElement& x);
AlgebraElement algebra_from_json(const Registry& reg, std::size_t rank, const Json& j, const std::string& locus);

Json operator_json(const Registry& reg, const DifferentialOperator& D);

Json surface_spec_json(const SurfaceSpec& spec);
Json planar_json(const PlanarTorsionDescriptor& d);
Json ech_complex_json(const EchComplex& cx);

Json truncation_json(const Truncation& t);
Json coefficients_json(const CoefficientMode& m, const std::optional<std::size_t>& full_rank);

}  // namespace tk
