#pragma once

// Mixed systems of linear equalities, weak and strict inequalities, handled by
// exact Fourier-Motzkin elimination.  Ambient dimensions are small (<= 4 in
// practice), so the quadratic blow-up of FM is kept in check by normalising
// every derived row to a primitive integer normal and discarding duplicates.

#include "ccc/rational.hpp"

#include <optional>
#include <vector>

namespace ccc {

enum class Relation { Eq, Ge, Gt };

/// coeffs . x  (= | >= | >)  rhs
struct LinearConstraint {
    QVector coeffs;
    Q rhs;
    Relation rel = Relation::Ge;
};

/// Result of eliminating a set of variables.
struct Projection {
    bool feasible = true;
    std::vector<LinearConstraint> constraints;  // in the kept variables (full-length vectors)
};

/// Feasibility of the system; when feasible also returns a witness point
/// chosen by back substitution (midpoints of bounded ranges, bound+1 on rays).
std::optional<QVector> find_point(const std::vector<LinearConstraint>& system, std::size_t dim);

bool is_feasible(const std::vector<LinearConstraint>& system, std::size_t dim);

/// Eliminates the variables flagged in `drop` (true = eliminate).
Projection project(const std::vector<LinearConstraint>& system, std::size_t dim,
                   const std::vector<bool>& drop);

/// Removes inequalities implied by the remaining rows (exact, one FM test per row).
std::vector<LinearConstraint> remove_redundant(std::vector<LinearConstraint> system,
                                               std::size_t dim);

bool satisfies(const LinearConstraint& c, const QVector& x);
bool satisfies(const std::vector<LinearConstraint>& system, const QVector& x);

/// Canonical form of a single row: primitive integer normal.  Equalities are
/// additionally sign-normalised.  Returns nullopt when the row is trivially
/// true; throws nothing - a trivially false row is reported through `false_row`.
std::optional<LinearConstraint> normalize(LinearConstraint c, bool& false_row);

}  // namespace ccc
