#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"

#include "ccc/polyhedra.hpp"

using namespace ccc;
using gen::qv;

namespace {

Cell ray_open() { return Cell(1, {}, {Hyperplane{qv({1}), 0}}); }
Cell closed_ray_relint() { return ray_open(); }

ConstructibleFunction i_closed(const Cell& c) { return cf_indicator(IndicatorKind::Standard, c); }
ConstructibleFunction j_open(const Cell& c) { return cf_indicator(IndicatorKind::Costandard, c); }

// Oracle: x in P + Q iff some p in closure(P) has x - p in closure(Q).
bool in_minkowski_sum(const Cell& p, const Cell& q, const QVector& x)
{
    const std::size_t n = x.size();
    std::vector<LinearConstraint> sys = p.closure_constraints();
    for (const auto& r : q.closure_constraints()) {
        // a.(x - p) rel b  <=>  -a.p rel b - a.x
        sys.push_back(LinearConstraint{negate(r.coeffs), r.rhs - dot(r.coeffs, x), r.rel});
    }
    return is_feasible(sys, n);
}

QMatrix projection_first(std::size_t n)
{
    QMatrix u(1, n);
    u(0, 0) = 1;
    return u;
}

}  // namespace

TEST_CASE("indicators and evaluation")
{
    auto unit = Cell::open_interval(0, 1);
    auto j = j_open(unit);
    CHECK(cf_evaluate(j, qv({0})) == 0);
    CHECK(cf_evaluate(j, QVector{Q(1, 2)}) == -1);
    auto i = i_closed(unit);
    CHECK(cf_evaluate(i, qv({1})) == 1);
    CHECK(cf_evaluate(i - j, QVector{Q(1, 2)}) == 2);
    auto ray = i_closed(closed_ray_relint());
    CHECK(cf_evaluate(ray, qv({0})) == 1);
    CHECK(cf_evaluate(ray, qv({5})) == 1);
    CHECK(cf_evaluate(ray, qv({-1})) == 0);
    auto sq = j_open(Cell::open_box(qv({0, 0}), qv({1, 1})));
    CHECK(cf_evaluate(sq, QVector{Q(1, 2), Q(1, 2)}) == 1);
    CHECK(cf_evaluate(sq, qv({0, 0})) == 0);
}

TEST_CASE("integration")
{
    std::mt19937 rng(11);
    for (int t = 0; t < 40; ++t) {
        auto c = gen::random_cell(rng, 1 + t % 3);
        CHECK(cf_integrate(j_open(c)) == 1);
    }
    CHECK(cf_integrate(i_closed(Cell::open_box(qv({0, 0}), qv({2, 1})))) == 1);
    CHECK(cf_integrate(i_closed(closed_ray_relint())) == 0);
}

TEST_CASE("pullback")
{
    auto sq = i_closed(Cell::open_box(qv({0, 0}), qv({1, 1})));
    QMatrix diag(2, 1);
    diag(0, 0) = 1;
    diag(1, 0) = 1;
    auto g = cf_pullback(diag, sq);
    CHECK(cf_equal(g, i_closed(Cell::open_interval(0, 1))));
    CHECK(cf_equal(cf_pullback(QMatrix::identity(2), sq), sq));
    QMatrix zero(2, 2);
    auto z = cf_pullback(zero, sq);
    CHECK(cf_equal(z, cf_constant(2, 1)));
}

TEST_CASE("pushforward")
{
    auto sq = j_open(Cell::open_box(qv({0, 0}), qv({1, 1})));
    auto p = cf_pushforward(projection_first(2), sq);
    CHECK(cf_equal(p, j_open(Cell::open_interval(0, 1))));
    Cell tri(2, {}, {Hyperplane{qv({1, 0}), 0}, Hyperplane{qv({0, 1}), 0}, Hyperplane{qv({-1, -1}), -1}});
    auto t = cf_pushforward(projection_first(2), i_closed(tri));
    CHECK(cf_equal(t, i_closed(Cell::open_interval(0, 1))));
    std::mt19937 rng(3);
    for (int k = 0; k < 10; ++k) {
        ConstructibleFunction f(2);
        f.add(gen::random_cell(rng, 2), 1 + k % 3);
        f.add(gen::random_cell(rng, 2), -2);
        QMatrix to_point(0, 2);
        auto pt = cf_pushforward(to_point, f);
        CHECK(cf_evaluate(pt, QVector{}) == cf_integrate(f));
        CHECK(cf_integrate(cf_pushforward(projection_first(2), f)) == cf_integrate(f));
    }
}

TEST_CASE("pushforward is functorial")
{
    std::mt19937 rng(5);
    for (int k = 0; k < 4; ++k) {
        ConstructibleFunction f(3);
        f.add(gen::random_cell(rng, 3), 1);
        f.add(gen::random_cell(rng, 3), -1);
        QMatrix v(2, 3), u(1, 2);
        std::uniform_int_distribution<int> c(-2, 2);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 3; ++s)
                v(r, s) = c(rng);
        u(0, 0) = c(rng);
        u(0, 1) = c(rng);
        CHECK(cf_equal(cf_pushforward(u, cf_pushforward(v, f)), cf_pushforward(u * v, f)));
    }
}

TEST_CASE("convolution")
{
    auto a = i_closed(Cell::open_interval(0, 1));
    auto b = i_closed(Cell::open_interval(0, 2));
    CHECK(cf_equal(cf_convolve(a, b), i_closed(Cell::open_interval(0, 3))));
    auto dirac = i_closed(Cell::point(qv({0})));
    CHECK(cf_equal(cf_convolve(dirac, b), b));
    std::mt19937 rng(9);
    auto p = gen::random_polytope(rng, 2), q = gen::random_polytope(rng, 2);
    auto conv = cf_convolve(i_closed(p), i_closed(q));
    for (int x = -8; x <= 8; ++x)
        for (int y = -8; y <= 8; ++y) {
            QVector pt{gen::q(x, 2), gen::q(y, 2)};
            CHECK(cf_evaluate(conv, pt) == (in_minkowski_sum(p, q, pt) ? 1 : 0));
        }
    CHECK_THROWS_AS(cf_convolve(cf_constant(3, 1), cf_constant(3, 1)), UnsupportedError);
}

TEST_CASE("dilation and translation")
{
    auto f = j_open(Cell::open_interval(0, 1));
    CHECK(cf_equal(cf_scale(f, 2), j_open(Cell::open_interval(0, 2))));
    CHECK(cf_equal(cf_scale(f, 1), f));
    auto d = i_closed(Cell::point(qv({0, 0})));
    CHECK(cf_equal(cf_scale(d, 3), d));
    CHECK_THROWS_AS(cf_scale(f, 0), InputError);
    CHECK(cf_equal(cf_translate(f, qv({2})), j_open(Cell::open_interval(2, 3))));
}

TEST_CASE("specialization")
{
    auto ray = i_closed(closed_ray_relint());
    CHECK(cf_equal(cf_specialize(ray, qv({0})), ray));
    auto sq = i_closed(Cell::open_box(qv({0, 0}), qv({1, 1})));
    auto quad = i_closed(Cell(2, {}, {Hyperplane{qv({1, 0}), 0}, Hyperplane{qv({0, 1}), 0}}));
    CHECK(cf_equal(cf_specialize(sq, qv({0, 0})), quad));
    CHECK(cf_equal(cf_specialize(cf_constant(2, 1), qv({3, 4})), cf_constant(2, 1)));
}

TEST_CASE("Fourier-Sato transform")
{
    auto ray = i_closed(closed_ray_relint());
    auto ft = cf_fourier_sato(ray);
    CHECK(cf_evaluate(ft, qv({1})) == 1);
    CHECK(cf_evaluate(ft, qv({0})) == 0);
    CHECK(cf_evaluate(ft, qv({-1})) == 0);
    CHECK_THROWS_AS(cf_fourier_sato(j_open(Cell::open_interval(0, 1))), InputError);

    SUBCASE("closed form (-1)^d [xi <= 0 on C] for single cones")
    {
        std::mt19937 rng(21);
        for (int t = 0; t < 15; ++t) {
            std::size_t n = 1 + t % 3;
            auto f = gen::random_conical(rng, n);
            const auto& term = f.terms().front();
            ConstructibleFunction g(n);
            g.add(term.cell, 1);
            auto h = cf_fourier_sato(g);
            // sample a grid of covectors
            std::vector<QVector> pts;
            for (int a = -2; a <= 2; ++a)
                for (int b = (n > 1 ? -2 : 0); b <= (n > 1 ? 2 : 0); ++b)
                    for (int e = (n > 2 ? -2 : 0); e <= (n > 2 ? 2 : 0); ++e) {
                        QVector xi(n);
                        xi[0] = a;
                        if (n > 1)
                            xi[1] = b;
                        if (n > 2)
                            xi[2] = e;
                        pts.push_back(xi);
                    }
            for (const auto& xi : pts) {
                auto sys = term.cell.constraints();
                sys.push_back(LinearConstraint{xi, 0, Relation::Gt});
                bool nonpositive = !is_feasible(sys, n);
                Weight expect = nonpositive ? (term.cell.dim() % 2 ? -1 : 1) : 0;
                CHECK(cf_evaluate(h, xi) == expect);
            }
        }
    }

    SUBCASE("involution up to antipode and the sign (-1)^n")
    {
        // FT(1_{0}) = 1 and FT(1) = (-1)^n 1_{0}, so the literal definition squares
        // to (-1)^n times the antipode.
        for (std::size_t n = 1; n <= 3; ++n) {
            auto delta = cf_indicator(IndicatorKind::Standard, Cell::point(QVector(n)));
            CHECK(cf_equal(cf_fourier_sato(delta), cf_constant(n, 1)));
            CHECK(cf_equal(cf_fourier_sato(cf_constant(n, 1)), (n % 2 ? -1 : 1) * delta));
        }
        std::mt19937 rng(1);
        for (int t = 0; t < 12; ++t) {
            std::size_t n = 1 + t % 3;
            auto f = gen::random_conical(rng, n);
            Weight sign = n % 2 ? -1 : 1;
            CHECK(cf_equal(cf_fourier_sato(cf_fourier_sato(f)), sign * cf_antipode(f)));
        }
    }
}

TEST_CASE("microlocalization")
{
    auto ray = i_closed(closed_ray_relint());
    CHECK(cf_equal(cf_microlocalize(ray, qv({0})), cf_fourier_sato(ray)));
    for (std::size_t n = 1; n <= 3; ++n) {
        auto mu = cf_microlocalize(cf_constant(n, 3), QVector(n));
        CHECK(mu.terms().size() == 1);
        CHECK(mu.terms()[0].cell.dim() == 0);
        CHECK(mu.terms()[0].weight == 3 * (n % 2 ? -1 : 1));
    }
    auto sq = j_open(Cell::open_box(qv({0, 0}), qv({1, 1})));
    CHECK(cf_equal(cf_microlocalize(sq, QVector{Q(1, 3), Q(1, 2)}), cf_microlocalize(cf_constant(2, 1), qv({0, 0}))));
}

TEST_CASE("singular support")
{
    auto ray = i_closed(closed_ray_relint());
    auto core = cf_singular_support(ray);
    CHECK(ss_core_contains(core, qv({1}), qv({0})));
    CHECK(!ss_core_contains(core, qv({1}), qv({1})));
    CHECK(ss_core_contains(core, qv({0}), qv({1})));
    CHECK(!ss_core_contains(core, qv({0}), qv({-1})));
    CHECK(!ss_core_contains(core, qv({-1}), qv({0})));
    for (const auto& e : core.entries)
        for (const auto& c : e.covectors)
            CHECK(e.base.dim() + c.cell.dim() <= 1);

    auto flat = cf_singular_support(cf_constant(2, 1));
    REQUIRE(flat.entries.size() == 1);
    CHECK(flat.entries[0].covectors.size() == 1);
    CHECK(flat.entries[0].covectors[0].cell.dim() == 0);

    std::mt19937 rng(2);
    for (int t = 0; t < 4; ++t) {
        auto f = i_closed(gen::random_polytope(rng, 2));
        for (const auto& e : cf_singular_support(f).entries)
            for (const auto& c : e.covectors)
                CHECK(e.base.dim() + c.cell.dim() <= 2);
    }
}

TEST_CASE("singular support inside the fan Lagrangian")
{
    // P1 x P1 fan cones
    std::vector<Cone> cones{Cone(2, {})};
    std::vector<LatticePoint> rays{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& r : rays)
        cones.emplace_back(2, std::vector<LatticePoint>{r});
    for (std::size_t i = 0; i < 4; ++i)
        cones.emplace_back(2, std::vector<LatticePoint>{rays[i], rays[(i + 1) % 4]});

    auto aligned = i_closed(Cell::open_box(qv({0, 0}), qv({1, 1})));
    CHECK(ss_subset_lambda(aligned, cones).holds);
    auto point = i_closed(Cell::point(qv({1, 2})));
    CHECK(ss_subset_lambda(point, cones).holds);
    // square rotated by 45 degrees
    Cell diamond(2, {},
                 {Hyperplane{qv({1, 1}), -1}, Hyperplane{qv({-1, -1}), -1}, Hyperplane{qv({1, -1}), -1},
                  Hyperplane{qv({-1, 1}), -1}});
    auto check = ss_subset_lambda(i_closed(diamond), cones);
    CHECK(!check.holds);
    REQUIRE(check.base);
    CHECK(check.base->dim() >= 0);
    // an offset that is not a lattice value also fails
    auto shifted = i_closed(Cell::open_box(QVector{Q(1, 2), 0}, qv({1, 1})));
    CHECK(!ss_subset_lambda(shifted, cones).holds);
}
