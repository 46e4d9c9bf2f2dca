#include "torsionkit/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tk {

GenId Registry::add(Generator g) {
    if (by_name_.count(g.name)) throw std::invalid_argument("duplicate generator '" + g.name + "'");
    if (g.action <= 0) throw std::invalid_argument("generator '" + g.name + "' needs positive action");
    GenId id = gens_.size();
    by_name_.emplace(g.name, id);
    gens_.push_back(std::move(g));
    return id;
}

std::optional<GenId> Registry::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

GenId Registry::id_of(const std::string& name) const {
    auto id = find(name);
    if (!id) throw std::invalid_argument("unknown generator '" + name + "'");
    return *id;
}

const Generator& Registry::at(GenId id) const {
    if (id >= gens_.size()) throw std::invalid_argument("unknown generator id " + std::to_string(id));
    return gens_[id];
}

std::vector<GenId> Registry::all() const {
    std::vector<GenId> out(gens_.size());
    for (GenId i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

bool Key::operator<(const Key& o) const {
    return std::tie(gens, exp, hbar) < std::tie(o.gens, o.exp, o.hbar);
}

std::optional<int> koszul_sort(const Registry& reg, std::vector<GenId>& gens) {
    // Insertion sort; each swap of two odd neighbours flips the sign.
    int sign = 1;
    for (std::size_t i = 1; i < gens.size(); ++i) {
        for (std::size_t j = i; j > 0 && gens[j - 1] > gens[j]; --j) {
            if (reg.parity(gens[j - 1]) == Parity::odd && reg.parity(gens[j]) == Parity::odd) sign = -sign;
            std::swap(gens[j - 1], gens[j]);
        }
    }
    for (std::size_t i = 1; i < gens.size(); ++i)
        if (gens[i] == gens[i - 1] && reg.parity(gens[i]) == Parity::odd) return std::nullopt;
    return sign;
}

Parity word_parity(const Registry& reg, const std::vector<GenId>& gens) {
    Parity p = Parity::even;
    for (GenId g : gens) p = p + reg.parity(g);
    return p;
}

Rational word_action(const Registry& reg, const std::vector<GenId>& gens) {
    Rational a = 0;
    for (GenId g : gens) a += reg.at(g).action;
    return a;
}

AlgebraElement AlgebraElement::one(std::size_t rank) { return hbar(rank, 0); }

AlgebraElement AlgebraElement::hbar(std::size_t rank, int power, const Rational& c) {
    AlgebraElement x(rank);
    x.add_term(Key{{}, zero_exponent(rank), power}, c);
    return x;
}

AlgebraElement AlgebraElement::word(const Registry& reg, std::vector<GenId> gens, const Rational& c,
                                    const Exponent& exp, int h) {
    AlgebraElement x(exp.size());
    for (GenId g : gens) reg.at(g);
    auto sign = koszul_sort(reg, gens);
    if (!sign) return x;
    x.add_term(Key{std::move(gens), exp, h}, c * *sign);
    return x;
}

AlgebraElement AlgebraElement::word(const Registry& reg, std::vector<GenId> gens, std::size_t rank,
                                    const Rational& c, int h) {
    return word(reg, std::move(gens), c, zero_exponent(rank), h);
}

void AlgebraElement::add_term(const Key& k, const Rational& c) {
    if (k.exp.size() != rank_) throw std::invalid_argument("algebra element: exponent rank mismatch");
    if (k.hbar < 0) throw std::invalid_argument("algebra element: negative hbar power");
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    if (o.rank_ != rank_) throw std::invalid_argument("algebra element: rank mismatch");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    AlgebraElement out = *this;
    out += o;
    return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + o.scaled(Rational(-1)); }

AlgebraElement AlgebraElement::scaled(const Rational& c) const {
    AlgebraElement out(rank_);
    if (c == 0) return out;
    for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * c);
    return out;
}

AlgebraElement AlgebraElement::times(const GroupRingElement& g) const {
    if (g.rank() != rank_) throw std::invalid_argument("algebra element: coefficient rank mismatch");
    AlgebraElement out(rank_);
    for (const auto& [k, v] : terms_)
        for (const auto& [d, c] : g.terms()) out.add_term(Key{k.gens, add_exponents(k.exp, d), k.hbar}, v * c);
    return out;
}

AlgebraElement AlgebraElement::shift_hbar(int j) const {
    AlgebraElement out(rank_);
    for (const auto& [k, v] : terms_) out.add_term(Key{k.gens, k.exp, k.hbar + j}, v);
    return out;
}

AlgebraElement AlgebraElement::truncated(int hbar_bound) const {
    AlgebraElement out(rank_);
    for (const auto& [k, v] : terms_)
        if (k.hbar <= hbar_bound) out.terms_.emplace(k, v);
    return out;
}

std::optional<int> AlgebraElement::min_hbar() const {
    std::optional<int> m;
    for (const auto& [k, v] : terms_)
        if (!m || k.hbar < *m) m = k.hbar;
    return m;
}

std::optional<Parity> AlgebraElement::parity(const Registry& reg) const {
    std::optional<Parity> p;
    for (const auto& [k, v] : terms_) {
        Parity q = word_parity(reg, k.gens);
        if (p && *p != q) return std::nullopt;
        p = q;
    }
    return p;
}

std::pair<AlgebraElement, AlgebraElement> AlgebraElement::split_parity(const Registry& reg) const {
    AlgebraElement even(rank_), odd(rank_);
    for (const auto& [k, v] : terms_) {
        (word_parity(reg, k.gens) == Parity::even ? even : odd).terms_.emplace(k, v);
    }
    return {even, odd};
}

Rational AlgebraElement::max_action(const Registry& reg) const {
    Rational a = 0;
    for (const auto& [k, v] : terms_) a = std::max(a, word_action(reg, k.gens));
    return a;
}

std::string AlgebraElement::str(const Registry& reg) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rational mag = abs(c);
        bool bare = true;
        if (mag != 1 || (k.gens.empty() && k.hbar == 0)) {
            os << mag.get_str();
            bare = false;
        }
        auto sep = [&] {
            if (!bare) os << " ";
            bare = false;
        };
        bool nontrivial = false;
        for (long e : k.exp) nontrivial = nontrivial || e != 0;
        if (nontrivial) {
            sep();
            os << "z^(";
            for (std::size_t i = 0; i < k.exp.size(); ++i) os << (i ? "," : "") << k.exp[i];
            os << ")";
        }
        if (k.hbar > 0) {
            sep();
            os << "hbar";
            if (k.hbar > 1) os << "^" << k.hbar;
        }
        for (GenId g : k.gens) {
            sep();
            os << "q[" << reg.at(g).name << "]";
        }
        if (bare) os << "1";
    }
    return os.str();
}

AlgebraElement normalize(const Registry& reg, std::size_t rank, const std::vector<Monomial>& raw) {
    AlgebraElement out(rank);
    for (const auto& m : raw) {
        for (const auto& [d, c] : m.coefficient.terms())
            out += AlgebraElement::word(reg, m.generators, c, d, m.hbar_power);
    }
    return out;
}

AlgebraElement multiply(const Registry& reg, const AlgebraElement& a, const AlgebraElement& b) {
    if (a.rank() != b.rank()) throw std::invalid_argument("multiply: rank mismatch");
    AlgebraElement out(a.rank());
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            std::vector<GenId> gens = ka.gens;
            gens.insert(gens.end(), kb.gens.begin(), kb.gens.end());
            auto sign = koszul_sort(reg, gens);
            if (!sign) continue;
            out.add_term(Key{std::move(gens), add_exponents(ka.exp, kb.exp), ka.hbar + kb.hbar}, ca * cb * *sign);
        }
    }
    return out;
}

}  // namespace tk
