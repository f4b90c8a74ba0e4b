#include "ccc/euler.hpp"

#include "ccc/linalg.hpp"
#include "ccc/parallel.hpp"

namespace ccc {

namespace {

Weight euler_sign(std::size_t dim) { return dim % 2 ? -1 : 1; }

void require_dim(const ConstructibleFunction& f, std::size_t n, const char* what)
{
    if (f.ambient_dim() != n)
        throw InputError(std::string("dimension mismatch in ") + what);
}

// A point of c different from its stored sample (nullopt for a point cell).
std::optional<QVector> second_sample(const Cell& c)
{
    const std::size_t n = c.ambient_dim();
    for (std::size_t i = 0; i < n; ++i) {
        QVector e(n);
        e[i] = 1;
        if (c.constant_on(e))
            continue;
        auto sub = c.restrict({}, {Hyperplane{e, c.sample()[i]}});
        if (!sub)
            throw InternalError("cell has no point beyond its sample along a free coordinate");
        return sub->sample();
    }
    return std::nullopt;
}

Arrangement common_refinement(std::size_t n, const std::vector<const ConstructibleFunction*>& fs)
{
    std::vector<Hyperplane> hs;
    for (const auto* f : fs)
        for (const auto& t : f->terms()) {
            auto d = defining_hyperplanes(t.cell);
            hs.insert(hs.end(), d.begin(), d.end());
        }
    return make_arrangement(n, hs);
}

// Dual of the closure of a homogeneous cell, as a cone.
Cone dual_of_closure(const Cell& c)
{
    const std::size_t n = c.ambient_dim();
    std::vector<QVector> gens;
    for (const auto& h : c.inequalities())
        gens.push_back(h.normal);
    for (const auto& h : c.equalities()) {
        gens.push_back(h.normal);
        gens.push_back(negate(h.normal));
    }
    return Cone::from_rational(n, gens);
}

}  // namespace

void ConstructibleFunction::add(Cell cell, Weight w)
{
    if (cell.ambient_dim() != ambient_)
        throw InputError("term cell has the wrong ambient dimension");
    if (w != 0)
        terms_.push_back(Term{std::move(cell), w});
}

void ConstructibleFunction::add(const ConstructibleFunction& g, Weight scale)
{
    require_dim(g, ambient_, "function sum");
    for (const auto& t : g.terms_)
        add(t.cell, t.weight * scale);
}

bool ConstructibleFunction::is_conical() const
{
    for (const auto& t : terms_)
        if (!t.cell.is_homogeneous())
            return false;
    return true;
}

ConstructibleFunction operator+(ConstructibleFunction a, const ConstructibleFunction& b)
{
    a.add(b, 1);
    return a;
}

ConstructibleFunction operator-(ConstructibleFunction a, const ConstructibleFunction& b)
{
    a.add(b, -1);
    return a;
}

ConstructibleFunction operator*(Weight k, const ConstructibleFunction& f)
{
    ConstructibleFunction out(f.ambient_dim());
    out.add(f, k);
    return out;
}

ConstructibleFunction cf_indicator(IndicatorKind kind, const Cell& p)
{
    ConstructibleFunction f(p.ambient_dim());
    if (kind == IndicatorKind::Costandard) {
        f.add(p, euler_sign(p.dim()));
        return f;
    }
    for (auto& face : faces(p))
        f.add(std::move(face), 1);
    return f;
}

ConstructibleFunction cf_constant(std::size_t ambient_dim, Weight c)
{
    ConstructibleFunction f(ambient_dim);
    f.add(Cell::whole_space(ambient_dim), c);
    return f;
}

Weight cf_evaluate(const ConstructibleFunction& f, const QVector& x)
{
    if (x.size() != f.ambient_dim())
        throw InputError("evaluation point has the wrong dimension");
    Weight v = 0;
    for (const auto& t : f.terms())
        if (t.cell.contains(x))
            v += t.weight;
    return v;
}

Weight cf_integrate(const ConstructibleFunction& f)
{
    Weight v = 0;
    for (const auto& t : f.terms())
        v += t.weight * euler_sign(t.cell.dim());
    return v;
}

ConstructibleFunction cf_pullback(const QMatrix& u, const ConstructibleFunction& f)
{
    if (u.rows() != f.ambient_dim())
        throw InputError("pullback map codomain does not match the function");
    const std::size_t m = u.cols();
    const QMatrix ut = u.transpose();
    auto pull = [&](const std::vector<Hyperplane>& hs) {
        std::vector<Hyperplane> out;
        for (const auto& h : hs)
            out.push_back(Hyperplane{ut.apply(h.normal), h.offset});
        return out;
    };
    ConstructibleFunction out(m);
    for (const auto& t : f.terms())
        if (auto c = Cell::make(m, pull(t.cell.equalities()), pull(t.cell.inequalities())))
            out.add(std::move(*c), t.weight);
    return out;
}

ConstructibleFunction cf_pushforward(const QMatrix& u, const ConstructibleFunction& f)
{
    if (u.cols() != f.ambient_dim())
        throw InputError("pushforward map domain does not match the function");
    const std::size_t k = u.rows();
    std::vector<Hyperplane> hs;
    for (const auto& t : f.terms()) {
        auto d = defining_hyperplanes(image(u, t.cell));
        hs.insert(hs.end(), d.begin(), d.end());
    }
    auto arr = make_arrangement(k, hs);

    auto fiber_integral = [&](const QVector& y) {
        std::vector<Hyperplane> fiber;
        for (std::size_t i = 0; i < k; ++i)
            fiber.push_back(Hyperplane{u.row(i), y[i]});
        Weight v = 0;
        for (const auto& t : f.terms())
            if (auto c = t.cell.restrict(fiber, {}))
                v += t.weight * euler_sign(c->dim());
        return v;
    };

    auto values = parallel_map<Weight>(arr.cells.size(), [&](std::size_t i) {
        const auto& cell = arr.cells[i];
        Weight v = fiber_integral(cell.sample());
        if (auto s2 = second_sample(cell); s2 && fiber_integral(*s2) != v)
            throw InternalError("pushforward is not constant on a target cell");
        return v;
    });
    ConstructibleFunction out(k);
    for (std::size_t i = 0; i < arr.cells.size(); ++i)
        out.add(arr.cells[i], values[i]);
    return out;
}

ConstructibleFunction cf_product(const ConstructibleFunction& f, const ConstructibleFunction& g)
{
    const std::size_t n = f.ambient_dim(), m = g.ambient_dim();
    auto lift = [&](const std::vector<Hyperplane>& hs, std::size_t at) {
        std::vector<Hyperplane> out;
        for (const auto& h : hs) {
            QVector a(n + m);
            for (std::size_t i = 0; i < h.normal.size(); ++i)
                a[at + i] = h.normal[i];
            out.push_back(Hyperplane{a, h.offset});
        }
        return out;
    };
    ConstructibleFunction out(n + m);
    for (const auto& s : f.terms())
        for (const auto& t : g.terms()) {
            auto eqs = lift(s.cell.equalities(), 0);
            auto e2 = lift(t.cell.equalities(), n);
            eqs.insert(eqs.end(), e2.begin(), e2.end());
            auto gts = lift(s.cell.inequalities(), 0);
            auto g2 = lift(t.cell.inequalities(), n);
            gts.insert(gts.end(), g2.begin(), g2.end());
            out.add(Cell(n + m, std::move(eqs), std::move(gts)), s.weight * t.weight);
        }
    return out;
}

ConstructibleFunction cf_convolve(const ConstructibleFunction& f, const ConstructibleFunction& g)
{
    const std::size_t n = f.ambient_dim();
    require_dim(g, n, "convolution");
    if (2 * n > 4)
        throw UnsupportedError("convolution needs a product space of dimension <= 4");
    QMatrix sum(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        sum(i, i) = 1;
        sum(i, n + i) = 1;
    }
    return cf_pushforward(sum, cf_product(f, g));
}

ConstructibleFunction cf_scale(const ConstructibleFunction& f, Weight k)
{
    if (k <= 0)
        throw InputError("dilation factor must be positive");
    QMatrix u = QMatrix::identity(f.ambient_dim());
    for (std::size_t i = 0; i < f.ambient_dim(); ++i)
        u(i, i) = Q(1, static_cast<unsigned long>(k));
    return cf_pullback(u, f);
}

ConstructibleFunction cf_translate(const ConstructibleFunction& f, const QVector& v)
{
    if (v.size() != f.ambient_dim())
        throw InputError("translation vector has the wrong dimension");
    auto shift = [&](const std::vector<Hyperplane>& hs) {
        std::vector<Hyperplane> out;
        for (const auto& h : hs)
            out.push_back(Hyperplane{h.normal, h.offset + dot(h.normal, v)});
        return out;
    };
    ConstructibleFunction out(f.ambient_dim());
    for (const auto& t : f.terms())
        out.add(Cell(f.ambient_dim(), shift(t.cell.equalities()), shift(t.cell.inequalities())),
                t.weight);
    return out;
}

ConstructibleFunction cf_antipode(const ConstructibleFunction& f)
{
    QMatrix u = QMatrix::identity(f.ambient_dim());
    for (std::size_t i = 0; i < f.ambient_dim(); ++i)
        u(i, i) = -1;
    return cf_pullback(u, f);
}

ConstructibleFunction cf_simplify(const ConstructibleFunction& f)
{
    auto arr = common_refinement(f.ambient_dim(), {&f});
    ConstructibleFunction out(f.ambient_dim());
    for (auto& c : arr.cells) {
        Weight v = cf_evaluate(f, c.sample());
        out.add(std::move(c), v);
    }
    return out;
}

std::optional<QVector> cf_difference_witness(const ConstructibleFunction& f,
                                             const ConstructibleFunction& g)
{
    require_dim(g, f.ambient_dim(), "function comparison");
    auto arr = common_refinement(f.ambient_dim(), {&f, &g});
    for (const auto& c : arr.cells)
        if (cf_evaluate(f, c.sample()) != cf_evaluate(g, c.sample()))
            return c.sample();
    return std::nullopt;
}

bool cf_equal(const ConstructibleFunction& f, const ConstructibleFunction& g)
{
    return !cf_difference_witness(f, g);
}

ConstructibleFunction cf_specialize(const ConstructibleFunction& f, const QVector& x)
{
    const std::size_t n = f.ambient_dim();
    if (x.size() != n)
        throw InputError("specialization point has the wrong dimension");
    ConstructibleFunction out(n);
    for (const auto& t : f.terms()) {
        if (!t.cell.closure_contains(x))
            continue;
        std::vector<Hyperplane> eqs, gts;
        for (const auto& h : t.cell.equalities())
            eqs.push_back(Hyperplane{h.normal, 0});
        for (const auto& h : t.cell.inequalities())
            if (dot(h.normal, x) == h.offset)
                gts.push_back(Hyperplane{h.normal, 0});
        out.add(Cell(n, std::move(eqs), std::move(gts)), t.weight);
    }
    return out;
}

ConstructibleFunction cf_fourier_sato(const ConstructibleFunction& f)
{
    if (!f.is_conical())
        throw InputError("Fourier-Sato transform needs a conical function");
    const std::size_t n = f.ambient_dim();
    std::vector<Hyperplane> hs;
    for (const auto& t : f.terms()) {
        Cone d = dual_of_closure(t.cell);
        for (const auto& e : d.equations())
            hs.push_back(Hyperplane{to_qvector(e), 0});
        for (const auto& fct : d.facets())
            hs.push_back(Hyperplane{to_qvector(fct), 0});
    }
    auto arr = make_arrangement(n, hs);
    auto values = parallel_map<Weight>(arr.cells.size(), [&](std::size_t i) {
        const QVector& xi = arr.cells[i].sample();
        // {<xi,v> <= 1} = {<xi,v> < 1} disjoint union {<xi,v> = 1}
        Hyperplane below{negate(xi), Q(-1)};
        Hyperplane level{xi, Q(1)};
        Weight v = 0;
        for (const auto& t : f.terms()) {
            if (auto c = t.cell.restrict({}, {below}))
                v += t.weight * euler_sign(c->dim());
            if (auto c = t.cell.restrict({level}, {}))
                v += t.weight * euler_sign(c->dim());
        }
        return v;
    });
    ConstructibleFunction out(n);
    for (std::size_t i = 0; i < arr.cells.size(); ++i)
        out.add(arr.cells[i], values[i]);
    return out;
}

ConstructibleFunction cf_microlocalize(const ConstructibleFunction& f, const QVector& x)
{
    return cf_fourier_sato(cf_specialize(f, x));
}

SingularSupportCore cf_singular_support(const ConstructibleFunction& f)
{
    const std::size_t n = f.ambient_dim();
    SingularSupportCore core;
    core.ambient_dim = n;
    if (f.empty())
        return core;
    auto arr = common_refinement(n, {&f});
    auto entries = parallel_map<std::optional<SSEntry>>(arr.cells.size(), [&](std::size_t i) {
        const auto& base = arr.cells[i];
        auto mu = cf_microlocalize(f, base.sample());
        if (auto s2 = second_sample(base)) {
            if (!cf_equal(mu, cf_microlocalize(f, *s2)))
                throw InternalError("microlocal pattern is not constant on a base cell");
        }
        std::optional<SSEntry> e;
        if (mu.empty())
            return e;
        e = SSEntry{base, {}};
        for (const auto& t : mu.terms())
            e->covectors.push_back(CovectorCell{t.cell, t.weight});
        return e;
    });
    for (auto& e : entries)
        if (e)
            core.entries.push_back(std::move(*e));
    return core;
}

bool ss_core_contains(const SingularSupportCore& core, const QVector& x, const QVector& xi)
{
    for (const auto& e : core.entries) {
        if (!e.base.contains(x))
            continue;
        for (const auto& c : e.covectors)
            if (c.value != 0 && c.cell.contains(xi))
                return true;
    }
    return false;
}

LambdaCheck ss_subset_lambda(const SingularSupportCore& core, const std::vector<Cone>& cones)
{
    const std::size_t n = core.ambient_dim;
    std::vector<Cell> minus;
    for (const auto& t : cones) {
        if (t.ambient_dim() != n)
            throw InputError("cone dimension does not match the function");
        minus.push_back(t.antipode().relative_interior());
    }
    // Cone walls: every covector cell is split along them so that each piece sits
    // inside the relative interior of one -tau or outside the support.
    std::vector<Hyperplane> walls;
    for (const auto& t : cones) {
        for (const auto& e : t.equations())
            walls.push_back(Hyperplane{to_qvector(e), 0});
        for (const auto& f : t.facets())
            walls.push_back(Hyperplane{to_qvector(f), 0});
    }
    auto admissible = [&](const Cell& base, std::size_t k) {
        // affine span of base inside m + tau^perp for one lattice point m
        std::vector<LatticePoint> rows;
        LatticePoint rhs;
        for (const auto& rho : cones[k].generators()) {
            QVector r = to_qvector(rho);
            if (!base.constant_on(r))
                return false;
            Q c = dot(r, base.sample());
            if (!is_integral(c))
                return false;
            rows.push_back(rho);
            rhs.push_back(c.get_num().get_si());
        }
        return rows.empty() || solve_integral(rows, rhs, n).has_value();
    };
    auto uncovered = [&](const Cell& base, const Cell& cov) -> std::optional<Cell> {
        std::vector<std::size_t> ok;
        for (std::size_t k = 0; k < cones.size(); ++k)
            if (admissible(base, k))
                ok.push_back(k);
        for (const auto& piece : arrangement_within(cov, walls).cells) {
            bool inside = false;
            for (auto k : ok)
                if (closure_contains(minus[k], piece)) {
                    inside = true;
                    break;
                }
            if (!inside)
                return piece;
        }
        return std::nullopt;
    };
    LambdaCheck out;
    for (const auto& e : core.entries)
        for (const auto& c : e.covectors) {
            if (c.value == 0)
                continue;
            auto bad = uncovered(e.base, c.cell);
            if (!bad)
                continue;
            out.holds = false;
            out.base = e.base;
            out.covector = *bad;
            out.value = c.value;
            return out;
        }
    return out;
}

LambdaCheck ss_subset_lambda(const ConstructibleFunction& f, const std::vector<Cone>& cones)
{
    return ss_subset_lambda(cf_singular_support(f), cones);
}

}  // namespace ccc
