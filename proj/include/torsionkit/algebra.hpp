#pragma once

#include "torsionkit/group_ring.hpp"
#include "torsionkit/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tk {

enum class Parity { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b) {
    return static_cast<Parity>((static_cast<int>(a) + static_cast<int>(b)) % 2);
}

using GenId = std::size_t;

struct Generator {
    std::string name;
    Parity parity = Parity::even;
    Rational action = 1;
    int multiplicity = 1;
};

// Generators are ordered by registration; the id is the canonical sort key.
class Registry {
public:
    GenId add(Generator g);
    std::optional<GenId> find(const std::string& name) const;
    GenId id_of(const std::string& name) const;  // throws on unknown names
    const Generator& at(GenId id) const;
    Parity parity(GenId id) const { return at(id).parity; }
    std::size_t size() const { return gens_.size(); }
    std::vector<GenId> all() const;

private:
    std::vector<Generator> gens_;
    std::map<std::string, GenId> by_name_;
};

// One normalized basis element: sorted generator word, z-exponent, hbar power.
struct Key {
    std::vector<GenId> gens;
    Exponent exp;
    int hbar = 0;
    bool operator<(const Key& o) const;
    bool operator==(const Key& o) const = default;
};

// Raw input to normalize(); generators in any order.
struct Monomial {
    std::vector<GenId> generators;
    GroupRingElement coefficient;
    int hbar_power = 0;
};

// Sorts a generator word into canonical order. Returns the Koszul sign, or
// nullopt when an odd generator repeats (the product vanishes).
std::optional<int> koszul_sort(const Registry& reg, std::vector<GenId>& gens);

Parity word_parity(const Registry& reg, const std::vector<GenId>& gens);
Rational word_action(const Registry& reg, const std::vector<GenId>& gens);

class AlgebraElement {
public:
    explicit AlgebraElement(std::size_t rank = 0) : rank_(rank) {}

    static AlgebraElement one(std::size_t rank);
    static AlgebraElement hbar(std::size_t rank, int power, const Rational& c = Rational(1));
    // Product of the given generators (any order) times c z^exp hbar^h.
    static AlgebraElement word(const Registry& reg, std::vector<GenId> gens, const Rational& c,
                               const Exponent& exp, int h = 0);
    static AlgebraElement word(const Registry& reg, std::vector<GenId> gens, std::size_t rank,
                               const Rational& c = Rational(1), int h = 0);

    std::size_t rank() const { return rank_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Key must already be canonical.
    void add_term(const Key& k, const Rational& c);

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    bool operator==(const AlgebraElement& o) const { return rank_ == o.rank_ && terms_ == o.terms_; }

    AlgebraElement scaled(const Rational& c) const;
    AlgebraElement times(const GroupRingElement& g) const;
    AlgebraElement shift_hbar(int j) const;
    AlgebraElement truncated(int hbar_bound) const;  // drops hbar^{>bound}
    std::optional<int> min_hbar() const;
    std::optional<Parity> parity(const Registry& reg) const;  // nullopt if mixed or zero
    std::pair<AlgebraElement, AlgebraElement> split_parity(const Registry& reg) const;
    Rational max_action(const Registry& reg) const;

    std::string str(const Registry& reg) const;

private:
    std::size_t rank_;
    std::map<Key, Rational> terms_;
};

AlgebraElement normalize(const Registry& reg, std::size_t rank, const std::vector<Monomial>& raw);
AlgebraElement multiply(const Registry& reg, const AlgebraElement& a, const AlgebraElement& b);

}  // namespace tk
