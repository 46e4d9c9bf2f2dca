#pragma once

#include "torsionkit/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace tk {

using Exponent = std::vector<long>;

Exponent zero_exponent(std::size_t rank);
Exponent add_exponents(const Exponent& a, const Exponent& b);

// Finite Laurent polynomial sum a_i z^{d_i} with exact rational coefficients.
class GroupRingElement {
public:
    explicit GroupRingElement(std::size_t rank = 0) : rank_(rank) {}

    static GroupRingElement constant(std::size_t rank, const Rational& c);
    static GroupRingElement monomial(const Exponent& d, const Rational& c = Rational(1));

    std::size_t rank() const { return rank_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent& d, const Rational& c);
    GroupRingElement operator+(const GroupRingElement& o) const;
    GroupRingElement operator-(const GroupRingElement& o) const;
    GroupRingElement operator*(const GroupRingElement& o) const;
    GroupRingElement scaled(const Rational& c) const;
    bool operator==(const GroupRingElement& o) const { return rank_ == o.rank_ && terms_ == o.terms_; }

    std::string str() const;

private:
    void check_rank(std::size_t r) const;
    std::size_t rank_;
    std::map<Exponent, Rational> terms_;
};

// Integer matrix (rows = target coordinates) applied to exponent vectors.
struct LatticeMap {
    std::size_t source_rank = 0;
    std::vector<std::vector<long>> rows;

    std::size_t target_rank() const { return rows.size(); }
    Exponent apply(const Exponent& d) const;

    static LatticeMap identity(std::size_t rank);
    static LatticeMap to_zero(std::size_t rank);
};

GroupRingElement push_forward(const GroupRingElement& x, const LatticeMap& map);

}  // namespace tk
