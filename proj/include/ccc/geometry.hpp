#pragma once

// Relatively open polyhedral cells, rational polyhedral cones and the
// arrangements that stratify them.
//
// A Cell is {x : a_i.x = b_i, c_j.x > d_j}.  It is nonempty by construction,
// relatively open, and of dimension ambient - rank(equalities), so its
// compactly supported Euler characteristic is (-1)^dim.  Closed sets are
// handled as unions of the cells returned by faces().

#include "ccc/polyhedra.hpp"

#include <optional>
#include <vector>

namespace ccc {

/// normal . x = offset (or, inside a Cell's inequality list, normal . x > offset).
struct Hyperplane {
    QVector normal;
    Q offset;

    friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// Primitive integer normal with positive leading coefficient; nullopt for a zero normal.
std::optional<Hyperplane> canonical_hyperplane(Hyperplane h);

class Cell {
public:
    /// Throws InvariantError when the system has no solution.
    Cell(std::size_t ambient_dim, std::vector<Hyperplane> equalities,
         std::vector<Hyperplane> strict);

    /// nullopt when empty.
    static std::optional<Cell> make(std::size_t ambient_dim, std::vector<Hyperplane> equalities,
                                    std::vector<Hyperplane> strict);
    static Cell whole_space(std::size_t ambient_dim);
    static Cell point(const QVector& p);
    /// Open interval (lo, hi) in R^1.
    static Cell open_interval(const Q& lo, const Q& hi);
    /// Open box prod (lo_i, hi_i).
    static Cell open_box(const QVector& lo, const QVector& hi);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return ambient_ - equalities_.size(); }
    const std::vector<Hyperplane>& equalities() const { return equalities_; }
    const std::vector<Hyperplane>& inequalities() const { return strict_; }
    const QVector& sample() const { return sample_; }

    bool contains(const QVector& x) const;
    bool closure_contains(const QVector& x) const;
    bool is_homogeneous() const;
    bool is_bounded() const;

    /// Equalities and strict inequalities as one system.
    std::vector<LinearConstraint> constraints() const;
    /// The closure: equalities plus the weak versions of the inequalities.
    std::vector<LinearConstraint> closure_constraints() const;

    /// Cell intersected with more constraints (nullopt when empty).
    std::optional<Cell> restrict(const std::vector<Hyperplane>& eqs,
                                 const std::vector<Hyperplane>& strict) const;

    /// True when n.x is constant on the affine hull (n lies in the row space of the equalities).
    bool constant_on(const QVector& normal) const;

private:
    Cell() = default;
    static std::optional<Cell> build(std::size_t ambient_dim, std::vector<Hyperplane> equalities,
                                     std::vector<Hyperplane> strict);

    std::size_t ambient_ = 0;
    std::vector<Hyperplane> equalities_;  // rref-derived, primitive integer normals
    std::vector<Hyperplane> strict_;      // reduced modulo the equalities, irredundant
    QVector sample_;
};

/// All relatively open faces of the closure of c (a partition of the closure).
std::vector<Cell> faces(const Cell& c);

/// True iff inner is contained in the closure of outer (exact).
bool closure_contains(const Cell& outer, const Cell& inner);
/// True iff inner is contained in outer (exact).
bool contains(const Cell& outer, const Cell& inner);

std::optional<Cell> intersect(const Cell& a, const Cell& b);

/// Image of the cell under the linear map y = u x (FM projection).
Cell image(const QMatrix& u, const Cell& c);

/// Closed rational polyhedral cone generated by primitive integer vectors.
class Cone {
public:
    Cone() = default;
    Cone(std::size_t ambient_dim, std::vector<LatticePoint> generators);
    /// Cone from rational generators, rescaled to primitive integer vectors.
    static Cone from_rational(std::size_t ambient_dim, const std::vector<QVector>& generators);

    std::size_t ambient_dim() const { return ambient_; }
    const std::vector<LatticePoint>& generators() const { return generators_; }
    /// Normals spanning the orthogonal complement of the linear span.
    const std::vector<LatticePoint>& equations() const { return equations_; }
    /// Irredundant facet normals f with f.x >= 0 on the cone (within its span).
    const std::vector<LatticePoint>& facets() const { return facets_; }

    std::size_t dim() const { return ambient_ - equations_.size(); }
    bool is_pointed() const;
    bool contains(const QVector& x) const;
    bool contains(const LatticePoint& x) const { return contains(to_qvector(x)); }
    bool contains(const Cone& other) const;
    bool relint_contains(const QVector& x) const;

    std::vector<LinearConstraint> closed_constraints() const;
    Cell relative_interior() const;
    /// Cone of -v for v in the cone.
    Cone antipode() const;

    friend bool operator==(const Cone& a, const Cone& b);

private:
    std::size_t ambient_ = 0;
    std::vector<LatticePoint> generators_;
    std::vector<LatticePoint> equations_;
    std::vector<LatticePoint> facets_;
};

Cone dual_cone(const Cone& c);
std::vector<Cell> faces(const Cone& c);

/// Pairwise disjoint cells covering the ambient space (or a base cell).
struct Arrangement {
    std::size_t ambient_dim = 0;
    std::vector<Hyperplane> hyperplanes;
    std::vector<Cell> cells;
};

Arrangement make_arrangement(std::size_t ambient_dim, const std::vector<Hyperplane>& hyperplanes);
/// The arrangement restricted to one cell: a partition of `base`.
Arrangement arrangement_within(const Cell& base, const std::vector<Hyperplane>& hyperplanes);
/// Arrangement generated by all defining hyperplanes of the cells.
Arrangement refine(const std::vector<Cell>& cells);
/// Defining hyperplanes of a cell (equalities and inequality boundaries), canonicalised.
std::vector<Hyperplane> defining_hyperplanes(const Cell& c);

}  // namespace ccc
