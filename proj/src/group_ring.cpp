#include "torsionkit/group_ring.hpp"

#include <sstream>
#include <stdexcept>

namespace tk {

Exponent zero_exponent(std::size_t rank) { return Exponent(rank, 0); }

Exponent add_exponents(const Exponent& a, const Exponent& b) {
    if (a.size() != b.size()) throw std::invalid_argument("exponent rank mismatch");
    Exponent out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

GroupRingElement GroupRingElement::constant(std::size_t rank, const Rational& c) {
    GroupRingElement g(rank);
    g.add_term(zero_exponent(rank), c);
    return g;
}

GroupRingElement GroupRingElement::monomial(const Exponent& d, const Rational& c) {
    GroupRingElement g(d.size());
    g.add_term(d, c);
    return g;
}

void GroupRingElement::check_rank(std::size_t r) const {
    if (r != rank_) throw std::invalid_argument("group ring rank mismatch");
}

void GroupRingElement::add_term(const Exponent& d, const Rational& c) {
    check_rank(d.size());
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(d, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
    check_rank(o.rank_);
    GroupRingElement out = *this;
    for (const auto& [d, c] : o.terms_) out.add_term(d, c);
    return out;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
    return *this + o.scaled(Rational(-1));
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
    check_rank(o.rank_);
    GroupRingElement out(rank_);
    for (const auto& [d1, c1] : terms_)
        for (const auto& [d2, c2] : o.terms_) out.add_term(add_exponents(d1, d2), c1 * c2);
    return out;
}

GroupRingElement GroupRingElement::scaled(const Rational& c) const {
    GroupRingElement out(rank_);
    if (c == 0) return out;
    for (const auto& [d, v] : terms_) out.terms_.emplace(d, v * c);
    return out;
}

std::string GroupRingElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [d, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        bool trivial = true;
        for (long e : d) trivial = trivial && e == 0;
        if (!trivial) {
            os << " z^(";
            for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
            os << ")";
        }
    }
    return os.str();
}

Exponent LatticeMap::apply(const Exponent& d) const {
    if (d.size() != source_rank) throw std::invalid_argument("lattice map: rank mismatch");
    Exponent out(rows.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < source_rank; ++j) out[i] += rows[i][j] * d[j];
    return out;
}

LatticeMap LatticeMap::identity(std::size_t rank) {
    LatticeMap m;
    m.source_rank = rank;
    m.rows.assign(rank, std::vector<long>(rank, 0));
    for (std::size_t i = 0; i < rank; ++i) m.rows[i][i] = 1;
    return m;
}

LatticeMap LatticeMap::to_zero(std::size_t rank) {
    LatticeMap m;
    m.source_rank = rank;
    return m;
}

GroupRingElement push_forward(const GroupRingElement& x, const LatticeMap& map) {
    if (x.rank() != map.source_rank) throw std::invalid_argument("coefficient morphism: rank mismatch");
    GroupRingElement out(map.target_rank());
    for (const auto& [d, c] : x.terms()) out.add_term(map.apply(d), c);
    return out;
}

}  // namespace tk
