#pragma once

#include "torsionkit/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tk {

// coefficient * hbar^hbar * q_{outputs} * d/dq_{inputs[0]} ... d/dq_{inputs[last]}
// The derivatives compose right to left: inputs.back() acts first.
struct OpTerm {
    GroupRingElement coefficient;
    int hbar = 0;
    std::vector<GenId> outputs;
    std::vector<GenId> inputs;
    int genus = 0;
    std::string origin;
};

struct DifferentialOperator {
    std::size_t rank = 0;
    std::vector<OpTerm> terms;

    // Rejects terms without inputs or of even total parity.
    void check_well_formed(const Registry& reg) const;
};

AlgebraElement apply_term(const Registry& reg, const OpTerm& t, const AlgebraElement& x);
AlgebraElement apply_operator(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& x);

// [x,y] = D(xy) - D(x) y - (-1)^{|x|} x D(y), extended bilinearly over parity parts of x.
AlgebraElement bracket(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& x,
                       const AlgebraElement& y);

// All generator words over `gens` with total action < bound (odd letters at most once).
std::vector<std::vector<GenId>> enumerate_words(const Registry& reg, const std::vector<GenId>& gens,
                                                const Rational& action_bound);

struct SquareCheck {
    bool ok = true;
    std::optional<AlgebraElement> witness;
    AlgebraElement residual;
    std::size_t monomials_checked = 0;
};

// Throws SolverError when some term raises action (truncation violation).
void check_action_monotone(const Registry& reg, const DifferentialOperator& D);

SquareCheck verify_square_zero(const Registry& reg, const DifferentialOperator& D, const std::vector<GenId>& gens,
                               const Rational& action_bound, int hbar_bound);

struct SolveOutcome {
    std::optional<AlgebraElement> primitive;
    bool box_limited = false;  // a negative answer only covers the declared exponent box
    std::size_t unknowns = 0;
    std::size_t rank = 0;
};

struct SolveBounds {
    Rational action_bound = 5;
    int hbar_bound = 3;
    int exponent_box = 0;
    // Congruence is taken mod hbar^modulus; defaults to hbar_bound + 1.
    std::optional<int> modulus;
};

SolveOutcome solve_primitive(const Registry& reg, const DifferentialOperator& D, const std::vector<GenId>& gens,
                             const AlgebraElement& target, const SolveBounds& bounds);

AlgebraElement primitive_via_bracket(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& P,
                                     const AlgebraElement& Q, int hbar_bound);

}  // namespace tk
