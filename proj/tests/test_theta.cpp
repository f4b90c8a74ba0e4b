#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"

#include "ccc/fixtures.hpp"
#include "ccc/theta.hpp"

#include <algorithm>

using namespace ccc;
using gen::qv;
namespace fx = ccc::fixtures;

namespace {

using Betti = std::map<int, std::size_t>;

ThetaComplex kappa(const CartierData& L) { return cech_complex(cartier_to_klyachko(L)); }

std::size_t total_degree(const std::map<LatticePoint, Betti>& table, int degree)
{
    std::size_t s = 0;
    for (const auto& [x, b] : table) {
        auto it = b.find(degree);
        if (it != b.end())
            s += it->second;
    }
    return s;
}

// Integer points strictly inside [lo, hi].
std::vector<LatticePoint> interior_points_1d(std::int64_t lo, std::int64_t hi)
{
    std::vector<LatticePoint> out;
    for (std::int64_t x = lo + 1; x < hi; ++x)
        out.push_back({x});
    return out;
}

}  // namespace

TEST_CASE("Cech complexes")
{
    auto F = kappa(fx::o_p1(1));
    REQUIRE(F.generators().size() == 3);
    std::multiset<std::pair<int, LatticePoint>> gens;
    for (const auto& g : F.generators())
        gens.insert({g.degree, g.base});
    CHECK(gens == std::multiset<std::pair<int, LatticePoint>>{{0, {0}}, {0, {1}}, {1, {0}}});
    CHECK(F.differential().size() == 2);
    for (const auto& e : F.differential())
        CHECK(abs(e.value) == 1);
    CHECK(compactly_supported_sections(F).betti_map() == Betti{{0, 1}});

    auto T = cech_complex(fx::trivial(fx::p2(), 1));
    std::vector<std::size_t> per_degree(3);
    for (const auto& g : T.generators()) {
        per_degree[static_cast<std::size_t>(g.degree)]++;
        CHECK(g.base == LatticePoint{0, 0});
    }
    CHECK(per_degree == std::vector<std::size_t>{3, 3, 1});
    CHECK(compactly_supported_sections(T).betti() == std::vector<std::size_t>{1, 0, 0});

    std::mt19937 rng(12);
    auto a = fx::random_bundle(rng, fx::p2(), 2);
    auto b = fx::tangent_p2();
    auto count = [](const ThetaComplex& c) {
        std::map<int, std::size_t> m;
        for (const auto& g : c.generators())
            m[g.degree]++;
        return m;
    };
    auto ca = count(cech_complex(a)), cb = count(cech_complex(b)), cs = count(cech_complex(direct_sum(a, b)));
    for (int k = 0; k <= 2; ++k)
        CHECK(cs[k] == ca[k] + cb[k]);
}

TEST_CASE("generic fiber")
{
    for (auto& nb : fx::bundle_fixtures()) {
        auto v = compactly_supported_sections(cech_complex(nb.bundle));
        CHECK_MESSAGE((v.betti_map() == Betti{{0, nb.bundle.rank()}}), nb.name);
    }
    std::mt19937 rng(3);
    for (int t = 0; t < 8; ++t) {
        auto fan = t % 2 ? fx::p1xp1() : fx::p2();
        auto b = fx::random_bundle(rng, fan, 1 + t % 3);
        CHECK((compactly_supported_sections(cech_complex(b)).betti_map() == Betti{{0, b.rank()}}));
    }
}

TEST_CASE("complex validation")
{
    Fan fan = fx::p1();
    auto pos = fan.index_of({0}), zero = fan.index_of({});
    std::vector<ThetaGenerator> gens{{pos, {0}, 0, 0}, {zero, {1}, 1, 0}};
    // the zero cone has no rays, so any base difference is allowed
    CHECK_NOTHROW(ThetaComplex(fan, gens, {ThetaEntry{1, 0, 1}}));
    // the reverse direction (from the zero cone to a ray) is forbidden
    std::vector<ThetaGenerator> back{{zero, {0}, 0, 0}, {pos, {0}, 1, 0}};
    CHECK_THROWS_AS(ThetaComplex(fan, back, {ThetaEntry{1, 0, 1}}), InvariantError);
    // base difference outside the dual of the target cone
    std::vector<ThetaGenerator> lower{{pos, {0}, 0, 0}, {pos, {1}, 1, 0}};
    CHECK_THROWS_AS(ThetaComplex(fan, lower, {ThetaEntry{1, 0, 1}}), InvariantError);
    // d o d != 0
    Fan p2 = fx::p2();
    std::vector<ThetaGenerator> chain{{p2.index_of({0, 1}), {0, 0}, 0, 0},
                                      {p2.index_of({0}), {0, 0}, 1, 0},
                                      {p2.index_of({}), {0, 0}, 2, 0}};
    CHECK_THROWS_AS(ThetaComplex(p2, chain, {ThetaEntry{1, 0, 1}, ThetaEntry{2, 1, 1}}), InvariantError);
}

TEST_CASE("maps and cones")
{
    auto L = fx::o_p1xp1(1, 1);
    auto f = line_bundle_map({0, 0}, L);
    for (const auto& e : f.entries)
        CHECK(e.value == 1);
    CHECK_NOTHROW(line_bundle_map({1, 1}, L));
    CHECK_THROWS_AS(line_bundle_map({2, 0}, L), InputError);
    CHECK_THROWS_AS(line_bundle_map({-1, 0}, L), InputError);

    // cone of the identity is acyclic
    auto F = kappa(fx::o_p2(1));
    ThetaMap id{F, F, {}};
    for (std::size_t i = 0; i < F.generators().size(); ++i)
        id.entries.push_back({i, i, 1});
    CHECK(compactly_supported_sections(theta_cone(id)).is_zero_cohomology());
    // cone of the zero map is B + A[1]
    ThetaMap zero{F, kappa(fx::o_p2(0)), {}};
    auto c = compactly_supported_sections(theta_cone(zero));
    CHECK(c.betti_map() == Betti{{-1, 1}, {0, 1}});
    CHECK(compactly_supported_sections(shift(F, 2)).betti_map() == Betti{{-2, 1}});

    // M_L (x) L' on P1 x P1 with L = O(3,2), L' = O(1,1)
    auto Lml = fx::o_p1xp1(3, 2), Lp = fx::o_p1xp1(1, 1);
    auto M = kernel_bundle_complex(Lml, Lp);
    std::size_t h_L = polytope_sections(Lml).size();
    std::size_t h_Lp = polytope_sections(Lp).size();
    std::size_t h_LLp = polytope_sections(tensor(Lml, Lp)).size();
    CHECK(h_L == 12);
    CHECK(h_Lp == 4);
    CHECK(h_LLp == 20);
    CHECK(compactly_supported_sections(M).betti_map() == Betti{{0, h_L - 1}});
    auto table = cohomology_table(M, M.fan().index_of({}));
    CHECK(total_degree(table, 0) == h_L * h_Lp - h_LLp);
    for (const auto& [x, b] : table)
        CHECK(b.size() == 1);
}

TEST_CASE("Morse filtrations")
{
    auto F = kappa(fx::o_p1(2));
    std::vector<std::optional<Q>> w;
    for (std::size_t i = 0; i < F.generators().size(); ++i)
        w.push_back(morse_weight(F, i, qv({1})));
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<std::optional<Q>>{std::nullopt, std::nullopt, Q(0)});
    auto up = morse_report(F, qv({1}));
    CHECK(up.jumps == std::vector<Q>{0});
    CHECK(up.levels.front().h0 == 0);
    CHECK(up.levels.back().h0 == 1);
    CHECK(up.strict);
    auto down = morse_report(F, qv({-1}));
    CHECK(down.jumps == std::vector<Q>{-2});

    std::mt19937 rng(6);
    for (auto& nb : fx::bundle_fixtures()) {
        auto K = cech_complex(nb.bundle);
        std::size_t n = nb.bundle.fan().dim();
        for (int t = 0; t < 6; ++t) {
            QVector xi(n);
            std::uniform_int_distribution<int> c(-3, 3);
            for (auto& x : xi)
                x = c(rng);
            CHECK_MESSAGE(morse_report(K, xi).strict, nb.name);
        }
    }
}

TEST_CASE("Klyachko filtrations from Morse levels")
{
    auto F = kappa(fx::o_p1(2));
    CHECK(klyachko_extract(F, 0) == std::vector<std::pair<std::int64_t, std::size_t>>{{0, 1}});
    auto T3 = cech_complex(fx::trivial(fx::p2(), 3));
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(klyachko_extract(T3, r) == std::vector<std::pair<std::int64_t, std::size_t>>{{0, 3}});
    CHECK_THROWS_AS(klyachko_extract(F, 5), InputError);

    auto roundtrip = [](const KlyachkoBundle& b) {
        auto K = cech_complex(b);
        for (std::size_t r = 0; r < b.fan().rays().size(); ++r)
            if (klyachko_extract(K, r) != filtration_profile(b.filtrations()[r]))
                return false;
        return oracle::filtrations_recovered(b);
    };
    for (auto& nb : fx::bundle_fixtures())
        CHECK_MESSAGE(roundtrip(nb.bundle), nb.name);
    std::mt19937 rng(20);
    for (int t = 0; t < 20; ++t) {
        auto fan = t % 2 ? fx::p1() : fx::p2();
        CHECK(roundtrip(fx::random_bundle(rng, fan, 1 + t % 3)));
    }
}

TEST_CASE("Morse filtrations are local")
{
    std::mt19937 rng(2);
    std::vector<KlyachkoBundle> bs{fx::tangent_p2(), fx::random_bundle(rng, fx::p1xp1(), 2),
                                   cartier_to_klyachko(fx::f1_line({0, 1, -1, 0}))};
    for (const auto& b : bs) {
        auto K = cech_complex(b);
        const auto& fan = b.fan();
        for (std::size_t tau = 0; tau < fan.cones().size(); ++tau) {
            QVector xi(fan.dim());
            for (const auto& r : fan.ray_vectors(tau))
                xi = add(xi, to_qvector(r));
            auto a = morse_report(K, xi), c = morse_report(restrict_to_chart(K, tau), xi);
            CHECK(a.jumps == c.jumps);
            REQUIRE(a.levels.size() == c.levels.size());
            for (std::size_t i = 0; i < a.levels.size(); ++i)
                CHECK(a.levels[i].h0 == c.levels[i].h0);
        }
    }
}

TEST_CASE("microlocal complexes")
{
    auto F = kappa(fx::o_p1(1));
    const auto& fan = F.fan();
    auto costalk = microlocal_complex(F, qv({0}), fan.index_of({}));
    CHECK(costalk.dims == std::vector<std::size_t>{2, 1});
    CHECK(costalk.betti_map() == Betti{{0, 1}});
    CHECK(microlocal_complex(F, qv({0}), fan.index_of({1})).dims == std::vector<std::size_t>{0, 0});

    auto mu = mu_sheaf(F, qv({0}));
    CHECK(mu.stalks[fan.index_of({})].betti_at(0) == 1);
    CHECK(mu.stalks[fan.index_of({0})].betti_at(0) == 1);
    CHECK(mu.stalks[fan.index_of({1})].betti_at(0) == 0);
    CHECK(mu.restrictions.size() == 2);

    // a trivial character: only the vertex generator survives at a top cone
    CartierData chi{fx::p2(), {{1, 2}, {1, 2}, {1, 2}}};
    auto K = kappa(chi);
    auto top = K.fan().index_of({0, 1});
    auto v = microlocal_complex(K, qv({1, 2}), top);
    CHECK(v.betti_map() == Betti{{0, 1}});
    std::size_t kept = 0;
    for (auto d : v.dims)
        kept += d;
    CHECK(kept == 1);

    // degree window and sheaf axioms on a grid
    for (auto& nb : fx::bundle_fixtures()) {
        if (nb.bundle.fan().dim() != 2)
            continue;
        auto C = cech_complex(nb.bundle);
        for (int x = -1; x <= 1; ++x)
            for (int y = -1; y <= 1; ++y) {
                auto m = mu_sheaf(C, qv({x, y}));
                for (const auto& s : m.stalks)
                    for (const auto& [deg, b] : s.betti_map())
                        CHECK((deg >= 0 && deg <= 2));
            }
    }
}

TEST_CASE("cohomology tables")
{
    auto zero_cone = [](const ThetaComplex& F) { return F.fan().index_of({}); };
    // O(d) on P1: h0 weights [0, d], h1 weights strictly between d and 0
    for (std::int64_t d = -3; d <= 3; ++d) {
        auto F = kappa(fx::o_p1(d));
        auto table = cohomology_table(F, zero_cone(F));
        std::map<LatticePoint, Betti> expect;
        for (std::int64_t x = 0; x <= d; ++x)
            expect[{x}] = Betti{{0, 1}};
        for (const auto& p : interior_points_1d(d, 0))
            expect[p] = Betti{{1, 1}};
        CHECK_MESSAGE(table == expect, "d = " << d);
    }
    auto F = kappa(fx::o_p2(-3));
    CHECK(cohomology_table(F, zero_cone(F)) == std::map<LatticePoint, Betti>{{{-1, -1}, Betti{{2, 1}}}});
    auto G = kappa(fx::o_p2(2));
    auto tg = cohomology_table(G, zero_cone(G));
    auto pts = polytope_sections(fx::o_p2(2));
    CHECK(tg.size() == pts.size());
    for (const auto& p : pts)
        CHECK(tg[p] == Betti{{0, 1}});

    // tangent bundle of P2: eight sections, weights the roots plus 0 twice
    auto T = cech_complex(fx::tangent_p2());
    auto tt = cohomology_table(T, zero_cone(T));
    std::map<LatticePoint, Betti> roots;
    for (const LatticePoint& r : std::vector<LatticePoint>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}})
        roots[r] = Betti{{0, 1}};
    roots[{0, 0}] = Betti{{0, 2}};
    CHECK(tt == roots);

    // Riemann-Roch on P1 x P1: chi(O(a,b)) = (a+1)(b+1)
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            auto K = kappa(fx::o_p1xp1(a, b));
            auto t = cohomology_table(K, zero_cone(K));
            long chi = static_cast<long>(total_degree(t, 0)) - static_cast<long>(total_degree(t, 1)) +
                       static_cast<long>(total_degree(t, 2));
            CHECK(chi == (a + 1) * (b + 1));
        }

    // top cones: the weights are the generator bases there
    auto top = T.fan().index_of({0, 1});
    auto ttop = cohomology_table(T, top);
    CHECK(ttop == std::map<LatticePoint, Betti>{{{-1, 0}, Betti{{0, 1}}}, {{0, -1}, Betti{{0, 1}}}});
}

TEST_CASE("Euler functions")
{
    auto F = kappa(fx::o_p1(1));
    ConstructibleFunction open(1), closed(1);
    open.add(Cell::open_interval(0, 1), 1);
    closed.add(cf_indicator(IndicatorKind::Standard, Cell::open_interval(0, 1)));
    CHECK(cf_equal(stalk_euler_function(F), open));
    CHECK(cf_equal(costalk_euler_function(F), closed));

    for (auto& nb : fx::bundle_fixtures()) {
        auto K = cech_complex(nb.bundle);
        CHECK_MESSAGE(cf_equal(morelli_eq1(nb.bundle), stalk_euler_function(K)), nb.name);
        if (nb.bundle.fan().dim() != 2)
            continue;
        auto co = costalk_euler_function(K);
        for (int x = -2; x <= 2; ++x)
            for (int y = -2; y <= 2; ++y) {
                auto v = microlocal_complex(K, qv({x, y}), K.fan().index_of({}));
                long euler = 0;
                for (const auto& [d, b] : v.betti_map())
                    euler += (d % 2 ? -1 : 1) * static_cast<long>(b);
                CHECK(cf_evaluate(co, qv({x, y})) == euler);
            }
    }

    // costalk functions multiply under convolution for ample line bundles
    std::vector<std::pair<CartierData, CartierData>> pairs{
        {fx::o_p1(1), fx::o_p1(2)}, {fx::o_p2(1), fx::o_p2(1)}, {fx::o_p1xp1(1, 1), fx::o_p1xp1(2, 1)}};
    for (const auto& [a, b] : pairs) {
        auto lhs = costalk_euler_function(kappa(tensor(a, b)));
        auto rhs = cf_convolve(costalk_euler_function(kappa(a)), costalk_euler_function(kappa(b)));
        CHECK(cf_equal(lhs, rhs));
    }
}
