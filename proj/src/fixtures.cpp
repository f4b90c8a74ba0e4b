#include "ccc/fixtures.hpp"

namespace ccc::fixtures {

namespace {

QVector vec(std::initializer_list<long> xs)
{
    QVector v;
    for (auto x : xs)
        v.emplace_back(x);
    return v;
}

Filtration flag(std::int64_t k0, Subspace first, std::int64_t k1, std::size_t rank)
{
    Subspace all;
    for (std::size_t i = 0; i < rank; ++i) {
        QVector e(rank);
        e[i] = 1;
        all.push_back(e);
    }
    return Filtration{{FiltrationStep{k0, std::move(first)}, FiltrationStep{k1, all}}};
}

}  // namespace

Fan p1() { return Fan(1, {{1}, {-1}}, {{0}, {1}}); }

Fan p2() { return Fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }

Fan p1xp1() { return Fan(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

Fan f1() { return Fan(2, {{1, 0}, {0, 1}, {-1, 1}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

Fan p3()
{
    return Fan(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
               {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

Fan affine(std::size_t n)
{
    std::vector<LatticePoint> rays;
    RaySet all;
    for (std::size_t i = 0; i < n; ++i) {
        LatticePoint e(n, 0);
        e[i] = 1;
        rays.push_back(e);
        all.push_back(i);
    }
    return Fan(n, rays, {all});
}

CartierData o_p1(std::int64_t d) { return CartierData{p1(), {{0}, {d}}}; }

CartierData o_p2(std::int64_t d)
{
    CartierData L{p2(), {{0, 0}, {d, 0}, {0, d}}};
    validate_cartier(L);
    return L;
}

CartierData o_p1xp1(std::int64_t a, std::int64_t b)
{
    CartierData L{p1xp1(), {{0, 0}, {a, 0}, {a, b}, {0, b}}};
    validate_cartier(L);
    return L;
}

CartierData f1_line(const std::vector<std::int64_t>& a)
{
    std::vector<std::int64_t> jumps;
    for (auto x : a)
        jumps.push_back(-x);
    return line_bundle_from_jumps(f1(), jumps);
}

KlyachkoBundle trivial(const Fan& fan, std::size_t rank)
{
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < fan.rays().size(); ++i)
        fs.push_back(flag(0, {}, 0, rank));
    return KlyachkoBundle(fan, rank, fs);
}

KlyachkoBundle tangent_p2()
{
    Fan fan = p2();
    std::vector<Filtration> fs;
    for (const auto& r : fan.rays())
        fs.push_back(flag(-1, {to_qvector(r)}, 0, 2));
    return KlyachkoBundle(fan, 2, fs);
}

KlyachkoBundle cotangent_p2()
{
    Fan fan = p2();
    std::vector<Filtration> fs;
    for (const auto& r : fan.rays())
        fs.push_back(flag(0, {vec({-static_cast<long>(r[1]), static_cast<long>(r[0])})}, 1, 2));
    return KlyachkoBundle(fan, 2, fs);
}

KlyachkoBundle fujino(std::int64_t n, std::int64_t m)
{
    return tensor_line(frobenius_pullback(tangent_p2(), n), o_p2(-m));
}

KlyachkoBundle condition_c_failure()
{
    Fan fan = p3();
    std::vector<Filtration> fs{flag(0, {vec({1, 0})}, 1, 2), flag(0, {vec({0, 1})}, 1, 2),
                               flag(0, {vec({1, 1})}, 1, 2), flag(0, {}, 0, 2)};
    return KlyachkoBundle(fan, 2, fs);
}

KlyachkoBundle two_lines_p2()
{
    Fan fan = p2();
    std::vector<Filtration> fs{flag(0, {vec({1, 0})}, 1, 2), flag(0, {vec({1, 1})}, 1, 2), flag(0, {}, 0, 2)};
    return KlyachkoBundle(fan, 2, fs);
}

KlyachkoBundle random_bundle(std::mt19937& rng, const Fan& fan, std::size_t rank)
{
    std::uniform_int_distribution<int> jump(-3, 3), coeff(-2, 2);
    while (true) {
        std::vector<Filtration> fs;
        for (std::size_t ray = 0; ray < fan.rays().size(); ++ray) {
            // a random full-rank basis, then nondecreasing jumps along it
            Subspace basis;
            while (basis.size() < rank) {
                QVector v(rank);
                for (auto& x : v)
                    x = coeff(rng);
                basis.push_back(v);
                if (ccc::rank(basis, rank) != basis.size())
                    basis.pop_back();
            }
            std::vector<std::int64_t> js;
            for (std::size_t i = 0; i < rank; ++i)
                js.push_back(jump(rng));
            std::sort(js.begin(), js.end());
            Filtration f;
            for (std::size_t i = 0; i < rank; ++i)
                f.steps.push_back(FiltrationStep{js[i], Subspace(basis.begin(), basis.begin() + i + 1)});
            fs.push_back(std::move(f));
        }
        KlyachkoBundle b(fan, rank, std::move(fs));
        try {
            klyachko_validate(b);
            return b;
        } catch (const InvariantError&) {
        }
    }
}

std::vector<NamedLine> line_fixtures()
{
    std::vector<NamedLine> out;
    for (std::int64_t d = -3; d <= 3; ++d)
        out.push_back({"O(" + std::to_string(d) + ")/P1", o_p1(d)});
    for (std::int64_t d : {-3, -1, 0, 1, 2})
        out.push_back({"O(" + std::to_string(d) + ")/P2", o_p2(d)});
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {3, 2}, {-1, 2}, {-2, -2}})
        out.push_back({"O(" + std::to_string(a) + "," + std::to_string(b) + ")/P1xP1", o_p1xp1(a, b)});
    out.push_back({"ample/F1", f1_line({0, 0, 1, 1})});
    out.push_back({"antiample/F1", f1_line({0, 0, -1, -1})});
    out.push_back({"exceptional/F1", f1_line({0, 1, 0, 0})});
    out.push_back({"mixed/F1", f1_line({0, -2, -1, 0})});
    return out;
}

std::vector<NamedBundle> bundle_fixtures()
{
    std::vector<NamedBundle> out;
    for (auto& l : line_fixtures())
        out.push_back({l.name, cartier_to_klyachko(l.line)});
    out.push_back({"T/P2", tangent_p2()});
    out.push_back({"Omega/P2", cotangent_p2()});
    out.push_back({"trivial2/P1xP1", trivial(p1xp1(), 2)});
    out.push_back({"O(1)+O(-1)/P1", direct_sum(cartier_to_klyachko(o_p1(1)), cartier_to_klyachko(o_p1(-1)))});
    out.push_back({"lines/P2", two_lines_p2()});
    out.push_back({"Fr2*T(-1)/P2", fujino(2, 1)});
    return out;
}

std::vector<std::pair<std::string, Fan>> fan_fixtures()
{
    return {{"P1", p1()}, {"P2", p2()}, {"P1xP1", p1xp1()}, {"F1", f1()}};
}

namespace {

ThetaComplex kappa(const CartierData& L) { return cech_complex(cartier_to_klyachko(L)); }

}  // namespace

ThetaComplex point_resolution()
{
    auto fan = p1();
    return theta_cone(line_bundle_morphism(line_bundle_from_jumps(fan, {1, 0}), line_bundle_from_jumps(fan, {0, 0})));
}

ThetaComplex kernel_bundle_example() { return kernel_bundle_complex(o_p1xp1(3, 2), o_p1xp1(1, 1)); }

std::vector<NamedComplex> complex_fixtures()
{
    std::vector<NamedComplex> out;
    for (auto& b : bundle_fixtures())
        out.push_back({b.name, cech_complex(b.bundle), true});
    out.push_back({"M_L", kernel_bundle_example(), true});
    out.push_back({"resolution", point_resolution(), false});
    auto fp1 = p1();
    out.push_back({"koszul/P1", fixed_point_complex(fp1, fp1.index_of({0}), {0}), false});
    auto fp2 = p2();
    out.push_back({"koszul/P2", fixed_point_complex(fp2, fp2.index_of({0, 1}), {1, 0}), false});
    out.push_back({"O(1)+O(2)[1]/P1", theta_sum({kappa(o_p1(1)), shift(kappa(o_p1(2)), 1)}), false});
    out.push_back({"O(0)[-1]/P2", shift(kappa(o_p2(0)), -1), false});
    out.push_back({"O(1)+O(-1)[1]/P1xP1", theta_sum({kappa(o_p1xp1(1, 0)), shift(kappa(o_p1xp1(-1, 0)), 1)}), false});
    return out;
}

}  // namespace ccc::fixtures
