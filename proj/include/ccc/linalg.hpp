#pragma once

// Exact Gaussian elimination and subspace calculus over Q.
//
// Subspaces are carried as lists of spanning vectors; `span_basis` extracts an
// independent subset so that `size()` is the dimension.

#include "ccc/rational.hpp"

#include <optional>
#include <vector>

namespace ccc {

struct RowEchelon {
    QMatrix reduced;                   // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

RowEchelon rref(QMatrix m);
std::size_t rank(const QMatrix& m);
std::size_t rank(const std::vector<QVector>& vectors, std::size_t dim);

/// Basis of {x : m x = 0}.
std::vector<QVector> nullspace(const QMatrix& m);

/// Some solution of m x = b, or nullopt.
std::optional<QVector> solve(const QMatrix& m, const QVector& b);

using Subspace = std::vector<QVector>;

/// Independent subset spanning the same space (reduced echelon rows).
Subspace span_basis(const Subspace& vectors, std::size_t dim);
bool in_span(const Subspace& space, const QVector& v, std::size_t dim);
bool is_subspace_of(const Subspace& a, const Subspace& b, std::size_t dim);
Subspace subspace_sum(const Subspace& a, const Subspace& b, std::size_t dim);
Subspace subspace_intersection(const Subspace& a, const Subspace& b, std::size_t dim);

/// Vectors of `ambient` (in order of appearance, after reduction) completing a
/// basis of `inner` to a basis of inner + ambient.
Subspace complement_in(const Subspace& inner, const Subspace& ambient, std::size_t dim);

/// Coordinates of v in the (independent) basis, or nullopt if v is not in the span.
std::optional<QVector> coordinates(const Subspace& basis, const QVector& v, std::size_t dim);

/// Integer solution of A m = phi where the rows of A extend to a Z-basis
/// (unimodular completion).  Returns nullopt when no integral solution exists.
std::optional<LatticePoint> solve_integral(const std::vector<LatticePoint>& rows,
                                           const LatticePoint& rhs,
                                           std::size_t dim);

/// gcd of the maximal minors of the k x n integer matrix (0 when rank < k).
std::int64_t maximal_minor_gcd(const std::vector<LatticePoint>& rows, std::size_t dim);

Q determinant(QMatrix m);

}  // namespace ccc
