#include "ccc/geometry.hpp"

#include "ccc/linalg.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace ccc {

namespace {

LinearConstraint as_constraint(const Hyperplane& h, Relation rel)
{
    return LinearConstraint{h.normal, h.offset, rel};
}

std::vector<LinearConstraint> closed_cone_system(std::size_t n, const std::vector<LatticePoint>& gens,
                                                 Relation lambda_rel)
{
    // Variables (x_1..x_n, lambda_1..lambda_k):  x - sum lambda_i g_i = 0, lambda rel 0.
    const std::size_t k = gens.size();
    std::vector<LinearConstraint> sys;
    for (std::size_t j = 0; j < n; ++j) {
        LinearConstraint c{QVector(n + k), 0, Relation::Eq};
        c.coeffs[j] = 1;
        for (std::size_t i = 0; i < k; ++i)
            c.coeffs[n + i] = -static_cast<long>(gens[i][j]);
        sys.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < k; ++i) {
        LinearConstraint c{QVector(n + k), 0, lambda_rel};
        c.coeffs[n + i] = 1;
        sys.push_back(std::move(c));
    }
    return sys;
}

std::vector<LinearConstraint> truncate(const std::vector<LinearConstraint>& rows, std::size_t n)
{
    std::vector<LinearConstraint> out;
    for (const auto& r : rows) {
        LinearConstraint c{QVector(r.coeffs.begin(), r.coeffs.begin() + static_cast<std::ptrdiff_t>(n)),
                           r.rhs, r.rel};
        out.push_back(std::move(c));
    }
    return out;
}

LatticePoint primitive_integer(QVector v)
{
    Q dummy = 0;
    clear_denominators(v, dummy);
    return to_lattice(v);
}

// In the cone generated by gens (lambda >= 0)?
bool in_generated_cone(const std::vector<LatticePoint>& gens, const QVector& v)
{
    const std::size_t n = v.size();
    const std::size_t k = gens.size();
    if (k == 0)
        return is_zero(v);
    std::vector<LinearConstraint> sys;
    for (std::size_t j = 0; j < n; ++j) {
        LinearConstraint c{QVector(k), v[j], Relation::Eq};
        for (std::size_t i = 0; i < k; ++i)
            c.coeffs[i] = static_cast<long>(gens[i][j]);
        sys.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < k; ++i) {
        LinearConstraint c{QVector(k), 0, Relation::Ge};
        c.coeffs[i] = 1;
        sys.push_back(std::move(c));
    }
    return is_feasible(sys, k);
}

}  // namespace

std::optional<Hyperplane> canonical_hyperplane(Hyperplane h)
{
    if (is_zero(h.normal))
        return std::nullopt;
    clear_denominators(h.normal, h.offset);
    for (const auto& a : h.normal) {
        if (sgn(a) == 0)
            continue;
        if (sgn(a) < 0) {
            h.normal = negate(h.normal);
            h.offset = -h.offset;
        }
        break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Cell

std::optional<Cell> Cell::build(std::size_t n, std::vector<Hyperplane> equalities,
                                std::vector<Hyperplane> strict)
{
    for (const auto& h : equalities)
        if (h.normal.size() != n)
            throw InputError("cell equality has wrong dimension");
    for (const auto& h : strict)
        if (h.normal.size() != n)
            throw InputError("cell inequality has wrong dimension");

    Cell cell;
    cell.ambient_ = n;

    // Equalities: reduced row echelon form of [A | b].
    QMatrix aug(equalities.size(), n + 1);
    for (std::size_t r = 0; r < equalities.size(); ++r) {
        for (std::size_t c = 0; c < n; ++c)
            aug(r, c) = equalities[r].normal[c];
        aug(r, n) = equalities[r].offset;
    }
    auto e = rref(aug);
    std::vector<std::pair<std::size_t, QVector>> rows;  // pivot, rref row (length n+1)
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == n)
            return std::nullopt;
        rows.emplace_back(e.pivots[r], e.reduced.row(r));
    }
    for (const auto& [p, row] : rows) {
        Hyperplane h{QVector(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n)), row[n]};
        clear_denominators(h.normal, h.offset);
        cell.equalities_.push_back(std::move(h));
    }

    // Inequalities: reduce modulo the equalities, canonicalise, keep the tightest per normal.
    std::map<QVector, Q> tight;
    for (auto& h : strict) {
        for (const auto& [p, row] : rows) {
            if (sgn(h.normal[p]) == 0)
                continue;
            Q f = h.normal[p];
            for (std::size_t c = 0; c < n; ++c)
                if (sgn(row[c]) != 0)
                    h.normal[c] -= f * row[c];
            h.offset -= f * row[n];
        }
        if (is_zero(h.normal)) {
            if (sgn(h.offset) >= 0)
                return std::nullopt;
            continue;
        }
        clear_denominators(h.normal, h.offset);
        auto it = tight.find(h.normal);
        if (it == tight.end())
            tight.emplace(h.normal, h.offset);
        else if (h.offset > it->second)
            it->second = h.offset;
    }
    for (auto& [normal, offset] : tight)
        cell.strict_.push_back(Hyperplane{normal, offset});

    auto sys = cell.constraints();
    if (!is_feasible(sys, n))
        return std::nullopt;
    if (cell.strict_.size() > 1) {
        std::vector<LinearConstraint> ineqs;
        for (const auto& h : cell.strict_)
            ineqs.push_back(as_constraint(h, Relation::Gt));
        // Redundancy relative to the equalities as well.
        std::vector<LinearConstraint> all;
        for (const auto& h : cell.equalities_)
            all.push_back(as_constraint(h, Relation::Eq));
        all.insert(all.end(), ineqs.begin(), ineqs.end());
        auto kept = remove_redundant(all, n);
        cell.strict_.clear();
        for (const auto& c : kept)
            if (c.rel == Relation::Gt)
                cell.strict_.push_back(Hyperplane{c.coeffs, c.rhs});
        sys = cell.constraints();
    }
    auto p = find_point(sys, n);
    if (!p)
        throw InternalError("cell became infeasible after redundancy removal");
    cell.sample_ = std::move(*p);
    return cell;
}

Cell::Cell(std::size_t ambient_dim, std::vector<Hyperplane> equalities, std::vector<Hyperplane> strict)
{
    auto c = build(ambient_dim, std::move(equalities), std::move(strict));
    if (!c)
        throw InvariantError("empty cell");
    *this = std::move(*c);
}

std::optional<Cell> Cell::make(std::size_t ambient_dim, std::vector<Hyperplane> equalities,
                               std::vector<Hyperplane> strict)
{
    return build(ambient_dim, std::move(equalities), std::move(strict));
}

Cell Cell::whole_space(std::size_t ambient_dim) { return Cell(ambient_dim, {}, {}); }

Cell Cell::point(const QVector& p)
{
    const std::size_t n = p.size();
    std::vector<Hyperplane> eqs;
    for (std::size_t i = 0; i < n; ++i) {
        QVector e(n);
        e[i] = 1;
        eqs.push_back(Hyperplane{e, p[i]});
    }
    return Cell(n, eqs, {});
}

Cell Cell::open_interval(const Q& lo, const Q& hi)
{
    return Cell(1, {}, {Hyperplane{{Q(1)}, lo}, Hyperplane{{Q(-1)}, -hi}});
}

Cell Cell::open_box(const QVector& lo, const QVector& hi)
{
    if (lo.size() != hi.size())
        throw InputError("box corner dimension mismatch");
    const std::size_t n = lo.size();
    std::vector<Hyperplane> s;
    for (std::size_t i = 0; i < n; ++i) {
        QVector e(n);
        e[i] = 1;
        s.push_back(Hyperplane{e, lo[i]});
        e[i] = -1;
        s.push_back(Hyperplane{e, -hi[i]});
    }
    return Cell(n, {}, s);
}

bool Cell::contains(const QVector& x) const
{
    if (x.size() != ambient_)
        throw InputError("point dimension mismatch");
    for (const auto& h : equalities_)
        if (dot(h.normal, x) != h.offset)
            return false;
    for (const auto& h : strict_)
        if (!(dot(h.normal, x) > h.offset))
            return false;
    return true;
}

bool Cell::closure_contains(const QVector& x) const
{
    if (x.size() != ambient_)
        throw InputError("point dimension mismatch");
    for (const auto& h : equalities_)
        if (dot(h.normal, x) != h.offset)
            return false;
    for (const auto& h : strict_)
        if (dot(h.normal, x) < h.offset)
            return false;
    return true;
}

bool Cell::is_homogeneous() const
{
    for (const auto& h : equalities_)
        if (sgn(h.offset) != 0)
            return false;
    for (const auto& h : strict_)
        if (sgn(h.offset) != 0)
            return false;
    return true;
}

bool Cell::is_bounded() const
{
    // Bounded iff the recession cone of the closure is {0}.
    std::vector<LinearConstraint> rec;
    for (const auto& h : equalities_)
        rec.push_back(LinearConstraint{h.normal, 0, Relation::Eq});
    for (const auto& h : strict_)
        rec.push_back(LinearConstraint{h.normal, 0, Relation::Ge});
    for (std::size_t i = 0; i < ambient_; ++i) {
        for (int s : {1, -1}) {
            auto sys = rec;
            QVector e(ambient_);
            e[i] = s;
            sys.push_back(LinearConstraint{e, 0, Relation::Gt});
            if (is_feasible(sys, ambient_))
                return false;
        }
    }
    return true;
}

std::vector<LinearConstraint> Cell::constraints() const
{
    std::vector<LinearConstraint> sys;
    for (const auto& h : equalities_)
        sys.push_back(as_constraint(h, Relation::Eq));
    for (const auto& h : strict_)
        sys.push_back(as_constraint(h, Relation::Gt));
    return sys;
}

std::vector<LinearConstraint> Cell::closure_constraints() const
{
    std::vector<LinearConstraint> sys;
    for (const auto& h : equalities_)
        sys.push_back(as_constraint(h, Relation::Eq));
    for (const auto& h : strict_)
        sys.push_back(as_constraint(h, Relation::Ge));
    return sys;
}

std::optional<Cell> Cell::restrict(const std::vector<Hyperplane>& eqs,
                                   const std::vector<Hyperplane>& strict) const
{
    auto e = equalities_;
    e.insert(e.end(), eqs.begin(), eqs.end());
    auto s = strict_;
    s.insert(s.end(), strict.begin(), strict.end());
    return make(ambient_, std::move(e), std::move(s));
}

bool Cell::constant_on(const QVector& normal) const
{
    Subspace eqs;
    for (const auto& h : equalities_)
        eqs.push_back(h.normal);
    return in_span(eqs, normal, ambient_);
}

// ---------------------------------------------------------------------------
// Cell relations

std::vector<Cell> faces(const Cell& c)
{
    const auto& ineqs = c.inequalities();
    const std::size_t n = c.ambient_dim();
    std::vector<Cell> out;
    std::vector<int> tight(ineqs.size(), -1);  // -1 unassigned, 0 strict, 1 tight

    auto partial = [&]() {
        std::vector<LinearConstraint> sys;
        for (const auto& h : c.equalities())
            sys.push_back(as_constraint(h, Relation::Eq));
        for (std::size_t i = 0; i < ineqs.size(); ++i) {
            Relation r = tight[i] == 1 ? Relation::Eq : tight[i] == 0 ? Relation::Gt : Relation::Ge;
            sys.push_back(as_constraint(ineqs[i], r));
        }
        return sys;
    };
    auto dfs = [&](auto&& self, std::size_t i) -> void {
        if (!is_feasible(partial(), n))
            return;
        if (i == ineqs.size()) {
            std::vector<Hyperplane> eqs = c.equalities(), strict;
            for (std::size_t k = 0; k < ineqs.size(); ++k)
                (tight[k] == 1 ? eqs : strict).push_back(ineqs[k]);
            out.emplace_back(n, std::move(eqs), std::move(strict));
            return;
        }
        for (int t : {0, 1}) {
            tight[i] = t;
            self(self, i + 1);
        }
        tight[i] = -1;
    };
    dfs(dfs, 0);
    return out;
}

namespace {

// Is inner contained in {h.x rel h.offset}?  rel is Eq, Ge or Gt.
bool inside_halfspace(const Cell& inner, const Hyperplane& h, Relation rel)
{
    Q v = dot(h.normal, inner.sample());
    if (inner.constant_on(h.normal)) {
        switch (rel) {
        case Relation::Eq:
            return v == h.offset;
        case Relation::Ge:
            return v >= h.offset;
        case Relation::Gt:
            return v > h.offset;
        }
    }
    if (rel == Relation::Eq)
        return false;
    auto sys = inner.constraints();
    LinearConstraint neg{negate(h.normal), -h.offset, rel == Relation::Ge ? Relation::Gt : Relation::Ge};
    sys.push_back(neg);
    return !is_feasible(sys, inner.ambient_dim());
}

}  // namespace

bool closure_contains(const Cell& outer, const Cell& inner)
{
    if (outer.ambient_dim() != inner.ambient_dim())
        throw InputError("cell dimension mismatch");
    for (const auto& h : outer.equalities())
        if (!inside_halfspace(inner, h, Relation::Eq))
            return false;
    for (const auto& h : outer.inequalities())
        if (!inside_halfspace(inner, h, Relation::Ge))
            return false;
    return true;
}

bool contains(const Cell& outer, const Cell& inner)
{
    if (outer.ambient_dim() != inner.ambient_dim())
        throw InputError("cell dimension mismatch");
    for (const auto& h : outer.equalities())
        if (!inside_halfspace(inner, h, Relation::Eq))
            return false;
    for (const auto& h : outer.inequalities())
        if (!inside_halfspace(inner, h, Relation::Gt))
            return false;
    return true;
}

std::optional<Cell> intersect(const Cell& a, const Cell& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("cell dimension mismatch");
    return a.restrict(b.equalities(), b.inequalities());
}

Cell image(const QMatrix& u, const Cell& c)
{
    const std::size_t k = u.rows();
    const std::size_t m = u.cols();
    if (m != c.ambient_dim())
        throw InputError("linear map domain does not match the cell");
    // Variables (y_1..y_k, x_1..x_m).
    std::vector<LinearConstraint> sys;
    for (std::size_t i = 0; i < k; ++i) {
        LinearConstraint r{QVector(k + m), 0, Relation::Eq};
        r.coeffs[i] = 1;
        for (std::size_t j = 0; j < m; ++j)
            r.coeffs[k + j] = -u(i, j);
        sys.push_back(std::move(r));
    }
    for (const auto& r : c.constraints()) {
        LinearConstraint s{QVector(k + m), r.rhs, r.rel};
        for (std::size_t j = 0; j < m; ++j)
            s.coeffs[k + j] = r.coeffs[j];
        sys.push_back(std::move(s));
    }
    std::vector<bool> drop(k + m, false);
    for (std::size_t j = 0; j < m; ++j)
        drop[k + j] = true;
    auto proj = project(sys, k + m, drop);
    if (!proj.feasible)
        throw InternalError("image of a nonempty cell is empty");
    std::vector<Hyperplane> eqs, strict;
    for (const auto& r : truncate(proj.constraints, k)) {
        if (r.rel == Relation::Ge)
            throw InternalError("projection of a relatively open cell produced a weak row");
        (r.rel == Relation::Eq ? eqs : strict).push_back(Hyperplane{r.coeffs, r.rhs});
    }
    return Cell(k, std::move(eqs), std::move(strict));
}

// ---------------------------------------------------------------------------
// Cone

Cone::Cone(std::size_t ambient_dim, std::vector<LatticePoint> generators) : ambient_(ambient_dim)
{
    for (auto& g : generators) {
        if (g.size() != ambient_dim)
            throw InputError("cone generator has wrong dimension");
        if (gcd_of(g) == 0)
            continue;
        generators_.push_back(primitive(g));
    }
    std::sort(generators_.begin(), generators_.end());
    generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());

    const std::size_t n = ambient_dim;
    std::vector<QVector> gq;
    for (const auto& g : generators_)
        gq.push_back(to_qvector(g));
    for (const auto& v : nullspace(QMatrix::from_rows(gq, n)))
        equations_.push_back(primitive_integer(v));

    // Facets: project x = G lambda, lambda >= 0 onto x, then keep the inequality rows,
    // orthogonally projected into the span so the normal is canonical.
    std::vector<bool> drop(n + generators_.size(), true);
    for (std::size_t j = 0; j < n; ++j)
        drop[j] = false;
    auto proj = project(closed_cone_system(n, generators_, Relation::Ge), n + generators_.size(), drop);
    Subspace span = span_basis(gq, n);
    std::map<LatticePoint, bool> seen;
    std::vector<LinearConstraint> cand;
    for (const auto& r : truncate(proj.constraints, n)) {
        if (r.rel != Relation::Ge)
            continue;
        QVector f = r.coeffs;
        if (!span.empty() && span.size() < n) {
            // orthogonal projection onto span: B^T (B B^T)^{-1} B f
            const std::size_t d = span.size();
            QMatrix gram(d, d);
            QVector bf(d);
            for (std::size_t a = 0; a < d; ++a) {
                bf[a] = dot(span[a], f);
                for (std::size_t b = 0; b < d; ++b)
                    gram(a, b) = dot(span[a], span[b]);
            }
            auto coef = solve(gram, bf);
            QVector p(n);
            for (std::size_t a = 0; a < d; ++a)
                p = add(p, scale(span[a], (*coef)[a]));
            f = p;
        } else if (span.empty()) {
            continue;
        }
        if (is_zero(f))
            continue;
        auto lp = primitive_integer(f);
        if (seen.emplace(lp, true).second)
            cand.push_back(LinearConstraint{to_qvector(lp), 0, Relation::Ge});
    }
    std::vector<LinearConstraint> sys;
    for (const auto& e : equations_)
        sys.push_back(LinearConstraint{to_qvector(e), 0, Relation::Eq});
    sys.insert(sys.end(), cand.begin(), cand.end());
    for (const auto& r : remove_redundant(sys, n))
        if (r.rel == Relation::Ge)
            facets_.push_back(to_lattice(r.coeffs));
    std::sort(facets_.begin(), facets_.end());
}

Cone Cone::from_rational(std::size_t ambient_dim, const std::vector<QVector>& generators)
{
    std::vector<LatticePoint> g;
    for (const auto& v : generators) {
        if (v.size() != ambient_dim)
            throw InputError("cone generator has wrong dimension");
        if (is_zero(v))
            continue;
        g.push_back(primitive_integer(v));
    }
    return Cone(ambient_dim, std::move(g));
}

bool Cone::is_pointed() const
{
    std::vector<QVector> rows;
    for (const auto& e : equations_)
        rows.push_back(to_qvector(e));
    for (const auto& f : facets_)
        rows.push_back(to_qvector(f));
    return rank(rows, ambient_) == ambient_;
}

bool Cone::contains(const QVector& x) const
{
    if (x.size() != ambient_)
        throw InputError("point dimension mismatch");
    for (const auto& e : equations_)
        if (sgn(dot(to_qvector(e), x)) != 0)
            return false;
    for (const auto& f : facets_)
        if (sgn(dot(to_qvector(f), x)) < 0)
            return false;
    return true;
}

bool Cone::contains(const Cone& other) const
{
    for (const auto& g : other.generators_)
        if (!contains(g))
            return false;
    return true;
}

bool Cone::relint_contains(const QVector& x) const
{
    if (x.size() != ambient_)
        throw InputError("point dimension mismatch");
    for (const auto& e : equations_)
        if (sgn(dot(to_qvector(e), x)) != 0)
            return false;
    for (const auto& f : facets_)
        if (sgn(dot(to_qvector(f), x)) <= 0)
            return false;
    return true;
}

std::vector<LinearConstraint> Cone::closed_constraints() const
{
    std::vector<LinearConstraint> sys;
    for (const auto& e : equations_)
        sys.push_back(LinearConstraint{to_qvector(e), 0, Relation::Eq});
    for (const auto& f : facets_)
        sys.push_back(LinearConstraint{to_qvector(f), 0, Relation::Ge});
    return sys;
}

Cell Cone::relative_interior() const
{
    std::vector<Hyperplane> eqs, strict;
    for (const auto& e : equations_)
        eqs.push_back(Hyperplane{to_qvector(e), 0});
    for (const auto& f : facets_)
        strict.push_back(Hyperplane{to_qvector(f), 0});
    return Cell(ambient_, std::move(eqs), std::move(strict));
}

Cone Cone::antipode() const
{
    std::vector<LatticePoint> g;
    for (const auto& v : generators_)
        g.push_back(negate(v));
    return Cone(ambient_, std::move(g));
}

bool operator==(const Cone& a, const Cone& b)
{
    return a.ambient_ == b.ambient_ && a.contains(b) && b.contains(a);
}

Cone dual_cone(const Cone& c)
{
    std::vector<LatticePoint> gens = c.facets();
    for (const auto& e : c.equations()) {
        gens.push_back(e);
        gens.push_back(negate(e));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    for (std::size_t i = 0; i < gens.size();) {
        std::vector<LatticePoint> others;
        for (std::size_t k = 0; k < gens.size(); ++k)
            if (k != i)
                others.push_back(gens[k]);
        if (in_generated_cone(others, to_qvector(gens[i])))
            gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return Cone(c.ambient_dim(), std::move(gens));
}

std::vector<Cell> faces(const Cone& c) { return faces(c.relative_interior()); }

// ---------------------------------------------------------------------------
// Arrangements

std::vector<Hyperplane> defining_hyperplanes(const Cell& c)
{
    std::vector<Hyperplane> out;
    for (const auto& h : c.equalities())
        if (auto k = canonical_hyperplane(h))
            out.push_back(*k);
    for (const auto& h : c.inequalities())
        if (auto k = canonical_hyperplane(h))
            out.push_back(*k);
    return out;
}

Arrangement arrangement_within(const Cell& base, const std::vector<Hyperplane>& hyperplanes)
{
    const std::size_t n = base.ambient_dim();
    Arrangement arr;
    arr.ambient_dim = n;
    std::map<std::pair<QVector, Q>, bool> seen;
    for (const auto& h : hyperplanes) {
        if (h.normal.size() != n)
            throw InputError("hyperplane dimension mismatch");
        auto k = canonical_hyperplane(h);
        if (!k)
            continue;
        if (seen.emplace(std::make_pair(k->normal, k->offset), true).second)
            arr.hyperplanes.push_back(*k);
    }
    std::vector<Cell> cells{base};
    for (const auto& h : arr.hyperplanes) {
        std::vector<Cell> next;
        for (const auto& c : cells) {
            if (c.constant_on(h.normal)) {
                next.push_back(c);
                continue;
            }
            if (auto a = c.restrict({}, {h}))
                next.push_back(std::move(*a));
            if (auto b = c.restrict({h}, {}))
                next.push_back(std::move(*b));
            if (auto d = c.restrict({}, {Hyperplane{negate(h.normal), -h.offset}}))
                next.push_back(std::move(*d));
        }
        cells = std::move(next);
    }
    arr.cells = std::move(cells);
    return arr;
}

Arrangement make_arrangement(std::size_t ambient_dim, const std::vector<Hyperplane>& hyperplanes)
{
    return arrangement_within(Cell::whole_space(ambient_dim), hyperplanes);
}

Arrangement refine(const std::vector<Cell>& cells)
{
    if (cells.empty())
        throw InputError("refine needs at least one cell");
    const std::size_t n = cells.front().ambient_dim();
    std::vector<Hyperplane> hs;
    for (const auto& c : cells) {
        if (c.ambient_dim() != n)
            throw InputError("cells of different ambient dimension");
        auto d = defining_hyperplanes(c);
        hs.insert(hs.end(), d.begin(), d.end());
    }
    return make_arrangement(n, hs);
}

}  // namespace ccc
