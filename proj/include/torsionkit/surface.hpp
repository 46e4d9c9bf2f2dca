#pragma once

#include "torsionkit/group_ring.hpp"
#include "torsionkit/rational.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tk {

enum class Side { plus, minus };
std::string side_name(Side s);

struct SurfaceComponent {
    int genus = 0;
    std::vector<std::string> boundary;
};

struct CriticalPoint {
    std::string id;
    int component = 0;
    int index = 0;  // Morse index of h_plus or h_minus, 0 or 1
};

// Oriented along the gradient of h_eps: from the lower endpoint to the upper.
// Endpoints may be boundary circle ids; such lines are kept but never counted.
struct InternalLine {
    std::string id;
    std::string from;
    std::string to;
    int sign = 1;
};

struct SidedSurface {
    Side side = Side::plus;
    std::vector<SurfaceComponent> components;
    std::vector<CriticalPoint> critical_points;
    std::vector<InternalLine> flow_lines;
};

// One component of Gamma: the plus and minus boundary circles glued there.
struct GammaComponent {
    std::string id;
    std::string plus_circle;
    std::string minus_circle;
    std::vector<long> h1_class;
};

struct CrossingLine {
    std::string id;
    std::string from;     // minus-side critical point
    std::string through;  // gamma id
    std::string to;       // plus-side critical point
    int sign = 1;
    Exponent h2_class;    // empty means zero
};

struct SurfaceSpec {
    SidedSurface plus;
    SidedSurface minus;
    std::vector<GammaComponent> gammas;
    int h1_rank = 0;
    std::vector<CrossingLine> crossing;
    std::map<std::string, Rational> base_actions;  // optional overrides
};

struct CriticalInfo {
    std::string id;
    Side side = Side::minus;
    int component = 0;
    int side_index = 0;
    int eps_index = 0;  // index of h_eps: plus-side minima become maxima
};

struct FlowLineRecord {
    std::string id;
    std::string from;
    std::string to;
    int from_index = -1;  // -1 for a boundary endpoint
    int to_index = -1;
    bool crosses_gamma = false;
    bool touches_boundary = false;
    std::string through;
    Side side = Side::minus;  // meaningful for internal lines
    int sign = 1;
    Exponent h2_class;
};

class DividedSurface {
public:
    // Validates and throws ValidationError with a locus on failure.
    static DividedSurface build(SurfaceSpec spec);

    const SurfaceSpec& spec() const { return spec_; }
    int genus() const { return genus_; }
    int euler_characteristic() const { return chi_; }
    // Minus side first, then plus side, each in listed order.
    const std::vector<CriticalInfo>& critical_points() const { return crit_; }
    const CriticalInfo& critical(const std::string& id) const;
    bool is_critical(const std::string& id) const { return crit_index_.count(id) > 0; }
    std::array<int, 3> index_counts() const;
    const GammaComponent& gamma(const std::string& id) const;

private:
    SurfaceSpec spec_;
    int genus_ = 0;
    int chi_ = 0;
    std::vector<CriticalInfo> crit_;
    std::map<std::string, std::size_t> crit_index_;
    std::map<std::string, std::size_t> gamma_index_;
};

std::vector<FlowLineRecord> enumerate_flow_lines(const DividedSurface& ds);

// Morse chain complex of h_eps with the gradient-descending boundary:
// d<p> = sum over lines q -> p of sign * <q>, with ind q = ind p - 1.
struct MorseComplex {
    std::array<std::vector<std::string>, 3> generators;
    std::vector<std::vector<Rational>> d1;  // rows: index-0 points, cols: index-1 points
    std::vector<std::vector<Rational>> d2;  // rows: index-1 points, cols: index-2 points
};

MorseComplex morse_complex(const DividedSurface& ds);
std::array<int, 3> morse_homology(const DividedSurface& ds);

bool null_homology_check(const DividedSurface& ds, const std::vector<std::pair<std::string, int>>& asymptotics);
std::size_t gamma_class_rank(const DividedSurface& ds);

}  // namespace tk
