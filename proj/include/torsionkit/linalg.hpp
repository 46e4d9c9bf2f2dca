#pragma once

#include "torsionkit/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace tk {

using SparseVec = std::map<std::size_t, Rational>;

void axpy(SparseVec& y, const Rational& a, const SparseVec& x);

// Incremental column echelon form over Q. Each stored pivot remembers which
// combination of the original columns produced it, so membership queries
// return an explicit preimage.
class Echelon {
public:
    // Returns true when the column was independent of all earlier ones.
    bool add_column(const SparseVec& column, std::size_t tag);

    // Coefficients c_tag with sum c_tag * column_tag == target, if any.
    std::optional<SparseVec> express(const SparseVec& target) const;

    std::size_t rank() const { return pivots_.size(); }

private:
    struct Pivot {
        SparseVec vec;    // leading row == key in pivots_
        SparseVec combo;  // expression in terms of tags
    };
    void reduce(SparseVec& vec, SparseVec& combo) const;
    std::map<std::size_t, Pivot> pivots_;
};

// Dense-ish helper for small integer/rational matrices given as rows.
std::size_t matrix_rank(const std::vector<std::vector<Rational>>& rows);

}  // namespace tk
