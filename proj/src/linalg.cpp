#include "torsionkit/linalg.hpp"

namespace tk {

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
    if (a == 0) return;
    for (const auto& [row, value] : x) {
        auto it = y.find(row);
        if (it == y.end()) {
            y.emplace(row, a * value);
        } else {
            it->second += a * value;
            if (it->second == 0) y.erase(it);
        }
    }
}

void Echelon::reduce(SparseVec& vec, SparseVec& combo) const {
    // Pivot vectors have their leading row as smallest entry, so subtracting
    // one only touches rows at or after the current position.
    auto it = vec.begin();
    while (it != vec.end()) {
        auto p = pivots_.find(it->first);
        if (p == pivots_.end()) {
            ++it;
            continue;
        }
        const std::size_t row = it->first;
        Rational factor = -it->second / p->second.vec.at(row);
        axpy(vec, factor, p->second.vec);
        axpy(combo, factor, p->second.combo);
        it = vec.upper_bound(row);
    }
}

bool Echelon::add_column(const SparseVec& column, std::size_t tag) {
    SparseVec vec = column;
    SparseVec combo{{tag, Rational(1)}};
    reduce(vec, combo);
    if (vec.empty()) return false;
    const std::size_t lead = vec.begin()->first;
    pivots_.emplace(lead, Pivot{std::move(vec), std::move(combo)});
    return true;
}

std::optional<SparseVec> Echelon::express(const SparseVec& target) const {
    SparseVec vec = target;
    SparseVec combo;
    reduce(vec, combo);
    if (!vec.empty()) return std::nullopt;
    // vec_target + combo . columns == 0
    SparseVec out;
    axpy(out, Rational(-1), combo);
    return out;
}

std::size_t matrix_rank(const std::vector<std::vector<Rational>>& rows) {
    Echelon ech;
    std::size_t tag = 0;
    for (const auto& row : rows) {
        SparseVec v;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) v.emplace(j, row[j]);
        ech.add_column(v, tag++);
    }
    return ech.rank();
}

}  // namespace tk
