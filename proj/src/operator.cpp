#include "torsionkit/operator.hpp"

#include "torsionkit/errors.hpp"
#include "torsionkit/linalg.hpp"

#include <algorithm>
#include <functional>

namespace tk {

void DifferentialOperator::check_well_formed(const Registry& reg) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        const std::string where = "term " + std::to_string(i) + (t.origin.empty() ? "" : " (" + t.origin + ")");
        if (t.inputs.empty()) throw InvariantBreach(where + " has no input generator");
        if (t.coefficient.rank() != rank) throw InvariantBreach(where + " has coefficient of wrong rank");
        if (word_parity(reg, t.outputs) + word_parity(reg, t.inputs) != Parity::odd)
            throw InvariantBreach(where + " is not odd");
        if (t.hbar < 0) throw InvariantBreach(where + " has negative hbar power");
    }
}

namespace {

struct Partial {
    std::vector<GenId> gens;
    Rational coeff;
};

// Derivative by q_a acting on a word; a derivative by an odd letter
// anticommutes with every odd letter it passes.
void differentiate(const Registry& reg, GenId a, const Partial& p, std::vector<Partial>& out) {
    const bool odd_a = reg.parity(a) == Parity::odd;
    int odd_before = 0;
    for (std::size_t i = 0; i < p.gens.size(); ++i) {
        if (p.gens[i] == a) {
            Partial q{p.gens, p.coeff};
            q.gens.erase(q.gens.begin() + static_cast<long>(i));
            if (odd_a && (odd_before % 2 == 1)) q.coeff = -q.coeff;
            out.push_back(std::move(q));
        }
        if (reg.parity(p.gens[i]) == Parity::odd) ++odd_before;
    }
}

}  // namespace

AlgebraElement apply_term(const Registry& reg, const OpTerm& t, const AlgebraElement& x) {
    AlgebraElement out(x.rank());
    for (const auto& [key, c] : x.terms()) {
        std::vector<Partial> cur{{key.gens, c}};
        for (auto it = t.inputs.rbegin(); it != t.inputs.rend() && !cur.empty(); ++it) {
            std::vector<Partial> next;
            for (const auto& p : cur) differentiate(reg, *it, p, next);
            cur = std::move(next);
        }
        for (auto& p : cur) {
            std::vector<GenId> gens = t.outputs;
            gens.insert(gens.end(), p.gens.begin(), p.gens.end());
            auto sign = koszul_sort(reg, gens);
            if (!sign) continue;
            for (const auto& [d, a] : t.coefficient.terms())
                out.add_term(Key{gens, add_exponents(key.exp, d), key.hbar + t.hbar}, p.coeff * a * *sign);
        }
    }
    return out;
}

AlgebraElement apply_operator(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& x) {
    AlgebraElement out(x.rank());
    for (const auto& t : D.terms) out += apply_term(reg, t, x);
    return out;
}

AlgebraElement bracket(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& x,
                       const AlgebraElement& y) {
    auto [even, odd] = x.split_parity(reg);
    AlgebraElement Dy = apply_operator(reg, D, y);
    AlgebraElement out(x.rank());
    for (int part = 0; part < 2; ++part) {
        const AlgebraElement& xp = part == 0 ? even : odd;
        if (xp.is_zero()) continue;
        AlgebraElement v = apply_operator(reg, D, multiply(reg, xp, y));
        v = v - multiply(reg, apply_operator(reg, D, xp), y);
        AlgebraElement last = multiply(reg, xp, Dy);
        v = part == 0 ? v - last : v + last;
        out += v;
    }
    return out;
}

std::vector<std::vector<GenId>> enumerate_words(const Registry& reg, const std::vector<GenId>& gens,
                                                const Rational& action_bound) {
    std::vector<GenId> sorted = gens;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::vector<GenId>> out;
    std::vector<GenId> cur;
    std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t start, const Rational& used) {
        out.push_back(cur);
        for (std::size_t i = start; i < sorted.size(); ++i) {
            const auto& g = reg.at(sorted[i]);
            Rational next = used + g.action;
            if (next >= action_bound) continue;
            cur.push_back(sorted[i]);
            rec(g.parity == Parity::odd ? i + 1 : i, next);
            cur.pop_back();
        }
    };
    rec(0, Rational(0));
    std::sort(out.begin(), out.end());
    return out;
}

void check_action_monotone(const Registry& reg, const DifferentialOperator& D) {
    for (const auto& t : D.terms) {
        if (word_action(reg, t.outputs) > word_action(reg, t.inputs))
            throw SolverError("truncation violation: term " + (t.origin.empty() ? std::string("?") : t.origin) +
                              " increases action");
    }
}

SquareCheck verify_square_zero(const Registry& reg, const DifferentialOperator& D, const std::vector<GenId>& gens,
                               const Rational& action_bound, int hbar_bound) {
    check_action_monotone(reg, D);
    SquareCheck result;
    result.residual = AlgebraElement(D.rank);
    for (const auto& w : enumerate_words(reg, gens, action_bound)) {
        AlgebraElement m = AlgebraElement::word(reg, w, D.rank);
        ++result.monomials_checked;
        AlgebraElement dd = apply_operator(reg, D, apply_operator(reg, D, m).truncated(hbar_bound)).truncated(hbar_bound);
        if (!dd.is_zero()) {
            result.ok = false;
            result.witness = m;
            result.residual = dd;
            return result;
        }
    }
    return result;
}

namespace {

void box_points(std::size_t rank, int box, std::vector<Exponent>& out) {
    Exponent cur(rank, -box);
    if (rank == 0) {
        out.push_back(cur);
        return;
    }
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < rank && cur[i] == box) cur[i++] = -box;
        if (i == rank) break;
        ++cur[i];
    }
}

bool in_box(const Exponent& e, int box) {
    for (long v : e)
        if (v < -box || v > box) return false;
    return true;
}

}  // namespace

SolveOutcome solve_primitive(const Registry& reg, const DifferentialOperator& D, const std::vector<GenId>& gens,
                             const AlgebraElement& target, const SolveBounds& bounds) {
    check_action_monotone(reg, D);
    if (target.rank() != D.rank) throw SolverError("solve_primitive: target rank differs from operator rank");
    const int modulus = bounds.modulus.value_or(bounds.hbar_bound + 1);
    const int box = D.rank == 0 ? 0 : bounds.exponent_box;
    AlgebraElement goal = target.truncated(modulus - 1);
    for (const auto& [k, c] : goal.terms()) {
        if (!in_box(k.exp, box))
            throw SolverError("exponent-box overflow: target exponent lies outside the declared box");
        if (word_action(reg, k.gens) >= bounds.action_bound)
            throw SolverError("target lies outside the action truncation");
    }

    SolveOutcome outcome;
    if (goal.is_zero()) {
        outcome.primitive = AlgebraElement(D.rank);
        return outcome;
    }

    // D is odd, so primitives of an even target are odd and vice versa.
    auto [even_part, odd_part] = goal.split_parity(reg);
    const bool want_odd = !even_part.is_zero();
    const bool want_even = !odd_part.is_zero();

    std::vector<Exponent> shifts;
    box_points(D.rank, box, shifts);

    std::vector<Key> columns;
    std::map<std::vector<GenId>, AlgebraElement> image_of;
    for (const auto& w : enumerate_words(reg, gens, bounds.action_bound)) {
        Parity p = word_parity(reg, w);
        if ((p == Parity::odd && !want_odd) || (p == Parity::even && !want_even)) continue;
        AlgebraElement base = apply_operator(reg, D, AlgebraElement::word(reg, w, D.rank)).truncated(modulus - 1);
        if (base.is_zero()) continue;
        for (int j = 0; j <= bounds.hbar_bound && j < modulus; ++j)
            for (const auto& e : shifts) columns.push_back(Key{w, e, j});
        image_of.emplace(w, std::move(base));
    }
    std::sort(columns.begin(), columns.end());

    std::map<Key, std::size_t> rows;
    auto row_of = [&](const Key& k) { return rows.emplace(k, rows.size()).first->second; };
    Echelon ech;
    for (std::size_t ci = 0; ci < columns.size(); ++ci) {
        const Key& col = columns[ci];
        SparseVec v;
        for (const auto& [k, c] : image_of.at(col.gens).terms()) {
            Key shifted{k.gens, add_exponents(k.exp, col.exp), k.hbar + col.hbar};
            if (shifted.hbar >= modulus) continue;
            v.emplace(row_of(shifted), c);
        }
        if (!v.empty()) ech.add_column(v, ci);
    }
    outcome.unknowns = columns.size();
    outcome.rank = ech.rank();
    outcome.box_limited = D.rank > 0;

    SparseVec tv;
    for (const auto& [k, c] : goal.terms()) {
        auto r = rows.find(k);
        if (r == rows.end()) return outcome;
        tv.emplace(r->second, c);
    }
    auto combo = ech.express(tv);
    if (!combo) return outcome;
    AlgebraElement Q(D.rank);
    for (const auto& [ci, c] : *combo) Q.add_term(columns[ci], c);
    AlgebraElement check = (apply_operator(reg, D, Q) - goal).truncated(modulus - 1);
    if (!check.is_zero()) throw InvariantBreach("solve_primitive produced a primitive that does not verify");
    outcome.primitive = Q;
    return outcome;
}

AlgebraElement primitive_via_bracket(const Registry& reg, const DifferentialOperator& D, const AlgebraElement& P,
                                     const AlgebraElement& Q, int hbar_bound) {
    const std::size_t rank = D.rank;
    if ((apply_operator(reg, D, P) - AlgebraElement::one(rank)).truncated(hbar_bound).is_zero() == false)
        throw SolverError("primitive_via_bracket: D(P) != 1");
    if (!apply_operator(reg, D, Q).truncated(hbar_bound).is_zero())
        throw SolverError("primitive_via_bracket: Q is not closed");
    if (P.parity(reg) != Parity::odd) throw SolverError("primitive_via_bracket: P must be odd");

    AlgebraElement result(rank);
    auto [even, odd] = Q.truncated(hbar_bound).split_parity(reg);
    for (const AlgebraElement* part : {&even, &odd}) {
        if (part->is_zero()) continue;
        AlgebraElement series = *part;
        AlgebraElement term = *part;
        Rational sign = 1;
        while (true) {
            AlgebraElement next = bracket(reg, D, P, term).truncated(hbar_bound);
            if (next.is_zero()) break;
            if (*next.min_hbar() <= *term.min_hbar())
                throw SolverError("primitive_via_bracket: bracket with P does not raise the hbar order");
            sign = -sign;
            series += next.scaled(sign);
            term = std::move(next);
        }
        result += multiply(reg, P, series);
    }
    result = result.truncated(hbar_bound);
    AlgebraElement check = (apply_operator(reg, D, result) - Q).truncated(hbar_bound);
    if (!check.is_zero()) throw InvariantBreach("primitive_via_bracket: D(P*B(Q)) != Q");
    return result;
}

}  // namespace tk
