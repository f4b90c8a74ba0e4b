#include "ccc/toric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace ccc {

namespace {

std::string ray_set_name(const RaySet& s)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i)
        os << (i ? "," : "") << s[i];
    os << '}';
    return os.str();
}

RaySet common_rays(const RaySet& a, const RaySet& b)
{
    RaySet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Does relint-overlap occur outside the common face?  Variables (lambda, mu).
bool overlap_outside_common(const std::vector<LatticePoint>& rays, const RaySet& a, const RaySet& b,
                            std::size_t n)
{
    const std::size_t k = a.size() + b.size();
    std::vector<LinearConstraint> sys;
    for (std::size_t j = 0; j < n; ++j) {
        LinearConstraint c{QVector(k), 0, Relation::Eq};
        for (std::size_t i = 0; i < a.size(); ++i)
            c.coeffs[i] = static_cast<long>(rays[a[i]][j]);
        for (std::size_t i = 0; i < b.size(); ++i)
            c.coeffs[a.size() + i] = -static_cast<long>(rays[b[i]][j]);
        sys.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < k; ++i) {
        LinearConstraint c{QVector(k), 0, Relation::Ge};
        c.coeffs[i] = 1;
        sys.push_back(std::move(c));
    }
    LinearConstraint outside{QVector(k), 0, Relation::Gt};
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::binary_search(b.begin(), b.end(), a[i]))
            outside.coeffs[i] = 1;
    sys.push_back(outside);
    return is_feasible(sys, k);
}

std::vector<QVector> standard_basis(std::size_t r)
{
    std::vector<QVector> out;
    for (std::size_t i = 0; i < r; ++i) {
        QVector e(r);
        e[i] = 1;
        out.push_back(std::move(e));
    }
    return out;
}

Filtration normalise(Filtration f, std::size_t rank, std::size_t ray)
{
    std::sort(f.steps.begin(), f.steps.end(),
              [](const FiltrationStep& a, const FiltrationStep& b) { return a.jump < b.jump; });
    Filtration out;
    for (auto& s : f.steps) {
        for (const auto& v : s.basis)
            if (v.size() != rank)
                throw InputError("filtration vector on ray " + std::to_string(ray) + " has wrong length");
        Subspace span = span_basis(s.basis, rank);
        if (!out.steps.empty() && out.steps.back().jump == s.jump) {
            out.steps.back().basis = subspace_sum(out.steps.back().basis, span, rank);
            continue;
        }
        out.steps.push_back(FiltrationStep{s.jump, span});
    }
    Filtration clean;
    for (auto& s : out.steps) {
        if (!clean.steps.empty()) {
            if (!is_subspace_of(clean.steps.back().basis, s.basis, rank))
                throw InputError("filtration on ray " + std::to_string(ray) + " is not increasing at jump " +
                                 std::to_string(s.jump));
            if (s.basis.size() == clean.steps.back().basis.size())
                continue;
        } else if (s.basis.empty()) {
            continue;
        }
        clean.steps.push_back(std::move(s));
    }
    std::size_t top = clean.steps.empty() ? 0 : clean.steps.back().basis.size();
    if (top != rank)
        throw InputError("filtration on ray " + std::to_string(ray) + " does not reach the full fiber");
    return clean;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fan

Fan::Fan(std::size_t dim, std::vector<LatticePoint> rays, std::vector<RaySet> maximal)
    : dim_(dim), rays_(std::move(rays))
{
    for (std::size_t i = 0; i < rays_.size(); ++i) {
        if (rays_[i].size() != dim_)
            throw InputError("ray " + std::to_string(i) + " has wrong dimension");
        if (gcd_of(rays_[i]) != 1)
            throw InputError("ray " + std::to_string(i) + " is not a primitive nonzero lattice vector");
        for (std::size_t j = 0; j < i; ++j)
            if (rays_[i] == rays_[j])
                throw InputError("rays " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
    std::vector<bool> used(rays_.size(), false);
    for (auto& c : maximal) {
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end())
            throw InputError("cone " + ray_set_name(c) + " repeats a ray");
        for (auto r : c) {
            if (r >= rays_.size())
                throw InputError("cone " + ray_set_name(c) + " refers to a missing ray");
            used[r] = true;
        }
        std::vector<QVector> vs;
        for (auto r : c)
            vs.push_back(to_qvector(rays_[r]));
        if (rank(vs, dim_) != c.size())
            throw UnsupportedError("cone " + ray_set_name(c) + " is not simplicial");
    }
    for (std::size_t i = 0; i < rays_.size(); ++i)
        if (!used[i])
            throw InputError("ray " + std::to_string(i) + " lies in no cone");
    for (std::size_t i = 0; i < maximal.size(); ++i)
        for (std::size_t j = 0; j < maximal.size(); ++j) {
            if (i == j)
                continue;
            if (std::includes(maximal[j].begin(), maximal[j].end(), maximal[i].begin(), maximal[i].end()))
                throw InputError("cone " + ray_set_name(maximal[i]) + " is a face of cone " +
                                 ray_set_name(maximal[j]) + "; list maximal cones only");
        }
    for (std::size_t i = 0; i < maximal.size(); ++i)
        for (std::size_t j = 0; j < maximal.size(); ++j) {
            if (i == j)
                continue;
            if (overlap_outside_common(rays_, maximal[i], maximal[j], dim_))
                throw InvariantError("cones " + ray_set_name(maximal[i]) + " and " + ray_set_name(maximal[j]) +
                                     " meet outside their common face " +
                                     ray_set_name(common_rays(maximal[i], maximal[j])));
        }
    maximal_ = std::move(maximal);

    std::set<RaySet> all{RaySet{}};
    for (const auto& c : maximal_) {
        const std::size_t k = c.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            RaySet s;
            for (std::size_t b = 0; b < k; ++b)
                if (mask >> b & 1)
                    s.push_back(c[b]);
            all.insert(s);
        }
    }
    cones_.assign(all.begin(), all.end());
    std::stable_sort(cones_.begin(), cones_.end(),
                     [](const RaySet& a, const RaySet& b) { return a.size() < b.size(); });
    for (std::size_t i = 0; i < cones_.size(); ++i)
        index_[cones_[i]] = i;
}

std::optional<std::size_t> Fan::find(const RaySet& rays) const
{
    RaySet s = rays;
    std::sort(s.begin(), s.end());
    auto it = index_.find(s);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t Fan::index_of(const RaySet& rays) const
{
    auto i = find(rays);
    if (!i)
        throw InputError("cone " + ray_set_name(rays) + " is not in the fan");
    return *i;
}

Cone Fan::cone(std::size_t c) const { return Cone(dim_, ray_vectors(c)); }

std::vector<std::size_t> Fan::cones_of_dim(std::size_t d) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cones_.size(); ++i)
        if (cones_[i].size() == d)
            out.push_back(i);
    return out;
}

std::size_t Fan::maximal_containing(std::size_t c) const
{
    const auto& s = cones_.at(c);
    for (std::size_t i = 0; i < maximal_.size(); ++i)
        if (std::includes(maximal_[i].begin(), maximal_[i].end(), s.begin(), s.end()))
            return i;
    throw InternalError("cone without a maximal cone");
}

bool Fan::is_face(std::size_t a, std::size_t b) const
{
    return std::includes(cones_[b].begin(), cones_[b].end(), cones_[a].begin(), cones_[a].end());
}

std::vector<LatticePoint> Fan::ray_vectors(std::size_t c) const
{
    std::vector<LatticePoint> out;
    for (auto r : cones_.at(c))
        out.push_back(rays_[r]);
    return out;
}

FanReport fan_validate(const Fan& fan)
{
    FanReport rep;
    rep.simplicial = true;
    rep.smooth = true;
    for (const auto& c : fan.maximal_cones()) {
        std::vector<LatticePoint> vs;
        for (auto r : c)
            vs.push_back(fan.rays()[r]);
        if (maximal_minor_gcd(vs, fan.dim()) != 1) {
            rep.smooth = false;
            if (!rep.singular_cone)
                rep.singular_cone = c;
        }
    }
    const std::size_t n = fan.dim();
    auto tops = fan.cones_of_dim(n);
    if (n == 0) {
        rep.complete = true;
        return rep;
    }
    std::vector<Cone> top_cones;
    std::vector<Hyperplane> walls;
    for (auto t : tops) {
        top_cones.push_back(fan.cone(t));
        for (const auto& f : top_cones.back().facets())
            walls.push_back(Hyperplane{to_qvector(f), 0});
    }
    rep.complete = true;
    for (const auto& cell : make_arrangement(n, walls).cells) {
        if (cell.dim() != n)
            continue;
        bool covered = false;
        for (const auto& c : top_cones)
            if (c.contains(cell.sample())) {
                covered = true;
                break;
            }
        if (!covered) {
            rep.complete = false;
            rep.uncovered = cell.sample();
            break;
        }
    }
    return rep;
}

Fan cone_fan(const Fan& fan, std::size_t cone)
{
    auto rays = fan.ray_vectors(cone);
    RaySet all(rays.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    return Fan(fan.dim(), rays, {all});
}

std::vector<Cone> fan_cones(const Fan& fan)
{
    std::vector<Cone> out;
    for (std::size_t i = 0; i < fan.cones().size(); ++i)
        out.push_back(fan.cone(i));
    return out;
}

// ---------------------------------------------------------------------------
// Line bundles

LatticePoint CartierData::character(std::size_t cone) const { return m.at(fan.maximal_containing(cone)); }

void validate_cartier(const CartierData& L)
{
    const auto& fan = L.fan;
    if (L.m.size() != fan.maximal_cones().size())
        throw InputError("Cartier data needs one character per maximal cone");
    for (const auto& m : L.m)
        if (m.size() != fan.dim())
            throw InputError("Cartier character has wrong dimension");
    for (std::size_t i = 0; i < L.m.size(); ++i)
        for (std::size_t j = i + 1; j < L.m.size(); ++j) {
            auto common = common_rays(fan.maximal_cones()[i], fan.maximal_cones()[j]);
            for (auto r : common)
                if (dot(fan.rays()[r], sub(L.m[i], L.m[j])) != 0)
                    throw InvariantError("incompatible Cartier data on the shared face " + ray_set_name(common) +
                                         " of maximal cones " + std::to_string(i) + " and " + std::to_string(j));
        }
}

CartierData line_bundle_from_jumps(const Fan& fan, const std::vector<std::int64_t>& jumps)
{
    if (jumps.size() != fan.rays().size())
        throw InputError("one jump per ray expected");
    CartierData L{fan, {}};
    for (const auto& c : fan.maximal_cones()) {
        std::vector<LatticePoint> rows;
        LatticePoint rhs;
        for (auto r : c) {
            rows.push_back(fan.rays()[r]);
            rhs.push_back(jumps[r]);
        }
        auto m = solve_integral(rows, rhs, fan.dim());
        if (!m)
            throw InvariantError("jumps are not integral on cone " + ray_set_name(c));
        L.m.push_back(*m);
    }
    validate_cartier(L);
    return L;
}

CartierData tensor(const CartierData& a, const CartierData& b)
{
    if (!(a.fan == b.fan))
        throw InputError("line bundles live on different fans");
    CartierData out{a.fan, {}};
    for (std::size_t i = 0; i < a.m.size(); ++i)
        out.m.push_back(add(a.m[i], b.m[i]));
    return out;
}

// ---------------------------------------------------------------------------
// Filtrations

std::size_t Filtration::dim_at(std::int64_t k, std::size_t) const
{
    std::size_t d = 0;
    for (const auto& s : steps)
        if (s.jump <= k)
            d = s.basis.size();
    return d;
}

Subspace Filtration::space_at(std::int64_t k, std::size_t) const
{
    Subspace out;
    for (const auto& s : steps)
        if (s.jump <= k)
            out = s.basis;
    return out;
}

std::vector<std::int64_t> Filtration::jumps() const
{
    std::vector<std::int64_t> out;
    for (const auto& s : steps)
        out.push_back(s.jump);
    return out;
}

KlyachkoBundle::KlyachkoBundle(Fan fan, std::size_t rank, std::vector<Filtration> filtrations)
    : fan_(std::move(fan)), rank_(rank)
{
    if (filtrations.size() != fan_.rays().size())
        throw InputError("one filtration per ray expected");
    for (std::size_t i = 0; i < filtrations.size(); ++i)
        filtrations_.push_back(normalise(std::move(filtrations[i]), rank_, i));
}

std::optional<ConeSplitting> split_cone(const KlyachkoBundle& b, std::size_t cone)
{
    const auto& fan = b.fan();
    const std::size_t r = b.rank();
    const std::size_t n = fan.dim();
    const RaySet& rays = fan.cones().at(cone);
    const std::size_t d = rays.size();
    ConeSplitting out;
    if (d == 0) {
        out.basis = standard_basis(r);
        out.jumps.assign(r, {});
        out.weights.assign(r, LatticePoint(n, 0));
        return out;
    }
    std::vector<std::vector<std::int64_t>> J(d);
    std::vector<std::vector<Subspace>> S(d);  // S[i][t] = E^{a_i}_{<= J[i][t]}
    for (std::size_t i = 0; i < d; ++i) {
        for (const auto& s : b.filtrations()[rays[i]].steps) {
            J[i].push_back(s.jump);
            S[i].push_back(s.basis);
        }
        if (J[i].empty())
            return out;  // rank 0
    }
    auto E = [&](const std::vector<std::size_t>& t) {
        Subspace acc = S[0][t[0]];
        for (std::size_t i = 1; i < d; ++i)
            acc = subspace_intersection(acc, S[i][t[i]], r);
        return acc;
    };
    std::vector<std::size_t> t(d, 0);
    std::vector<QVector> picks;
    std::vector<std::vector<std::int64_t>> pick_jumps;
    while (true) {
        Subspace here = E(t);
        Subspace below;
        for (std::size_t i = 0; i < d; ++i) {
            if (t[i] == 0)
                continue;
            auto u = t;
            --u[i];
            below = subspace_sum(below, E(u), r);
        }
        // inclusion-exclusion multiplicity over the predecessor cube
        std::int64_t mult = 0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            auto u = t;
            bool empty = false;
            int parity = 0;
            for (std::size_t i = 0; i < d; ++i)
                if (mask >> i & 1) {
                    ++parity;
                    if (u[i] == 0)
                        empty = true;
                    else
                        --u[i];
                }
            std::int64_t dim = empty ? 0 : static_cast<std::int64_t>(E(u).size());
            mult += parity % 2 ? -dim : dim;
        }
        auto comp = complement_in(below, here, r);
        if (mult < 0 || static_cast<std::int64_t>(comp.size()) != mult)
            return std::nullopt;
        std::vector<std::int64_t> phi(d);
        for (std::size_t i = 0; i < d; ++i)
            phi[i] = J[i][t[i]];
        for (auto& v : comp) {
            picks.push_back(v);
            pick_jumps.push_back(phi);
        }
        std::size_t i = 0;
        while (i < d && t[i] + 1 == J[i].size())
            t[i++] = 0;
        if (i == d)
            break;
        ++t[i];
    }
    if (picks.size() != r || rank(picks, r) != r)
        return std::nullopt;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < J[i].size(); ++k) {
            std::size_t count = 0;
            for (const auto& pj : pick_jumps)
                count += pj[i] <= J[i][k];
            if (count != S[i][k].size())
                return std::nullopt;
        }
    std::vector<LatticePoint> rows = fan.ray_vectors(cone);
    for (std::size_t p = 0; p < picks.size(); ++p) {
        LatticePoint rhs(pick_jumps[p].begin(), pick_jumps[p].end());
        auto m = solve_integral(rows, rhs, n);
        if (!m)
            throw UnsupportedError("cone " + ray_set_name(rays) + " is not smooth");
        out.weights.push_back(*m);
    }
    out.basis = std::move(picks);
    out.jumps = std::move(pick_jumps);
    return out;
}

BundleSplitting klyachko_validate(const KlyachkoBundle& b)
{
    BundleSplitting s;
    for (std::size_t c = 0; c < b.fan().cones().size(); ++c) {
        auto sp = split_cone(b, c);
        if (!sp)
            throw InvariantError("condition (C) fails on cone " + ray_set_name(b.fan().cones()[c]));
        s.cones.push_back(std::move(*sp));
    }
    return s;
}

bool condition_c_bruteforce(const KlyachkoBundle& b, std::size_t cone, int height)
{
    const std::size_t r = b.rank();
    if (r == 0)
        return true;
    const auto& rays = b.fan().cones().at(cone);
    // candidate directions: integer vectors with entries in [-h, h], first nonzero positive
    std::vector<QVector> cand;
    std::vector<long> v(r, -height);
    while (true) {
        auto lead = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
        bool zero = lead == v.end();
        bool positive_lead = !zero && *lead > 0;
        if (!zero && positive_lead) {
            QVector q;
            for (auto x : v)
                q.emplace_back(x);
            cand.push_back(q);
        }
        std::size_t i = 0;
        while (i < r && v[i] == height)
            v[i++] = -height;
        if (i == r)
            break;
        ++v[i];
    }
    auto adapted = [&](const std::vector<QVector>& basis) {
        for (auto ray : rays)
            for (const auto& s : b.filtrations()[ray].steps) {
                std::vector<QVector> inside;
                for (const auto& x : basis)
                    if (in_span(s.basis, x, r))
                        inside.push_back(x);
                if (inside.size() != s.basis.size())
                    return false;
            }
        return true;
    };
    std::function<bool(std::size_t, std::size_t, std::vector<QVector>&)> rec =
        [&](std::size_t depth, std::size_t from, std::vector<QVector>& cur) -> bool {
        if (depth == r)
            return adapted(cur);
        for (std::size_t i = from; i < cand.size(); ++i) {
            cur.push_back(cand[i]);
            if (rank(cur, r) == cur.size() && rec(depth + 1, i + 1, cur))
                return true;
            cur.pop_back();
        }
        return false;
    };
    std::vector<QVector> cur;
    return rec(0, 0, cur);
}

std::vector<LatticePoint> weight_multiset(const KlyachkoBundle& b, std::size_t cone)
{
    auto s = split_cone(b, cone);
    if (!s)
        throw InvariantError("condition (C) fails on cone " + ray_set_name(b.fan().cones().at(cone)));
    auto w = s->weights;
    std::sort(w.begin(), w.end());
    return w;
}

std::vector<LatticePoint> weight_multiset(const BundleSplitting& s, std::size_t cone)
{
    auto w = s.cones.at(cone).weights;
    std::sort(w.begin(), w.end());
    return w;
}

ConstructibleFunction morelli_eq1(const KlyachkoBundle& b)
{
    const auto& fan = b.fan();
    const std::size_t n = fan.dim();
    auto split = klyachko_validate(b);
    ConstructibleFunction f(n);
    for (std::size_t c = 0; c < fan.cones().size(); ++c) {
        Weight sign = ((fan.cone_dim(c) + n) % 2) ? -1 : 1;
        auto rays = fan.ray_vectors(c);
        for (const auto& chi : split.cones[c].weights) {
            std::vector<Hyperplane> gts;
            for (const auto& rho : rays)
                gts.push_back(Hyperplane{to_qvector(rho), Q(static_cast<long>(dot(rho, chi)))});
            f.add(Cell(n, {}, std::move(gts)), sign);
        }
    }
    return f;
}

KlyachkoBundle cartier_to_klyachko(const CartierData& L)
{
    validate_cartier(L);
    const auto& fan = L.fan;
    std::vector<Filtration> fs;
    for (std::size_t a = 0; a < fan.rays().size(); ++a) {
        auto c = fan.index_of({a});
        std::int64_t jump = dot(fan.rays()[a], L.character(c));
        fs.push_back(Filtration{{FiltrationStep{jump, {QVector{Q(1)}}}}});
    }
    return KlyachkoBundle(fan, 1, std::move(fs));
}

KlyachkoBundle frobenius_pullback(const KlyachkoBundle& b, std::int64_t n)
{
    if (n <= 0)
        throw InputError("Frobenius degree must be positive");
    auto fs = b.filtrations();
    for (auto& f : fs)
        for (auto& s : f.steps)
            s.jump *= n;
    return KlyachkoBundle(b.fan(), b.rank(), std::move(fs));
}

KlyachkoBundle tensor_line(const KlyachkoBundle& b, const CartierData& L)
{
    if (!(b.fan() == L.fan))
        throw InputError("bundle and line bundle live on different fans");
    validate_cartier(L);
    auto fs = b.filtrations();
    for (std::size_t a = 0; a < fs.size(); ++a) {
        std::int64_t shift = dot(b.fan().rays()[a], L.character(b.fan().index_of({a})));
        for (auto& s : fs[a].steps)
            s.jump += shift;
    }
    return KlyachkoBundle(b.fan(), b.rank(), std::move(fs));
}

KlyachkoBundle direct_sum(const KlyachkoBundle& a, const KlyachkoBundle& b)
{
    if (!(a.fan() == b.fan()))
        throw InputError("bundles live on different fans");
    const std::size_t r1 = a.rank(), r2 = b.rank(), r = r1 + r2;
    std::vector<Filtration> fs;
    for (std::size_t ray = 0; ray < a.fan().rays().size(); ++ray) {
        const auto& fa = a.filtrations()[ray];
        const auto& fb = b.filtrations()[ray];
        std::set<std::int64_t> jumps;
        for (auto j : fa.jumps())
            jumps.insert(j);
        for (auto j : fb.jumps())
            jumps.insert(j);
        Filtration f;
        for (auto k : jumps) {
            Subspace basis;
            for (const auto& v : fa.space_at(k, r1)) {
                QVector w(r);
                std::copy(v.begin(), v.end(), w.begin());
                basis.push_back(w);
            }
            for (const auto& v : fb.space_at(k, r2)) {
                QVector w(r);
                std::copy(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(r1));
                basis.push_back(w);
            }
            f.steps.push_back(FiltrationStep{k, basis});
        }
        fs.push_back(std::move(f));
    }
    return KlyachkoBundle(a.fan(), r, std::move(fs));
}

KlyachkoBundle restrict_to_cone(const KlyachkoBundle& b, std::size_t cone)
{
    Fan sub = cone_fan(b.fan(), cone);
    std::vector<Filtration> fs;
    for (auto r : b.fan().cones().at(cone))
        fs.push_back(b.filtrations()[r]);
    return KlyachkoBundle(sub, b.rank(), std::move(fs));
}

std::vector<LatticePoint> lattice_points(const std::vector<LinearConstraint>& closed, std::size_t n)
{
    if (!is_feasible(closed, n))
        return {};
    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> drop(n, true);
        drop[i] = false;
        auto proj = project(closed, n, drop);
        std::optional<Q> l, h;
        for (const auto& c : proj.constraints) {
            const Q& a = c.coeffs[i];
            if (sgn(a) == 0)
                continue;
            Q v = c.rhs / a;
            if (c.rel == Relation::Eq) {
                l = h = v;
                break;
            }
            if (sgn(a) > 0) {
                if (!l || v > *l)
                    l = v;
            } else if (!h || v < *h) {
                h = v;
            }
        }
        if (!l || !h)
            throw UnsupportedError("lattice point enumeration over an unbounded region");
        mpz_class fl, ce;
        mpz_cdiv_q(ce.get_mpz_t(), l->get_num_mpz_t(), l->get_den_mpz_t());
        mpz_fdiv_q(fl.get_mpz_t(), h->get_num_mpz_t(), h->get_den_mpz_t());
        lo[i] = ce.get_si();
        hi[i] = fl.get_si();
        if (lo[i] > hi[i])
            return {};
    }
    std::vector<LatticePoint> out;
    LatticePoint p = lo;
    while (true) {
        if (satisfies(closed, to_qvector(p)))
            out.push_back(p);
        std::size_t i = 0;
        while (i < n && p[i] == hi[i])
            p[i] = lo[i], ++i;
        if (i == n)
            break;
        ++p[i];
    }
    return out;
}

std::vector<LatticePoint> polytope_sections(const CartierData& L)
{
    validate_cartier(L);
    const auto& fan = L.fan;
    std::vector<LinearConstraint> sys;
    for (std::size_t i = 0; i < fan.maximal_cones().size(); ++i)
        for (auto r : fan.maximal_cones()[i]) {
            const auto& rho = fan.rays()[r];
            sys.push_back(LinearConstraint{to_qvector(rho), Q(static_cast<long>(dot(rho, L.m[i]))), Relation::Ge});
        }
    return lattice_points(sys, fan.dim());
}

}  // namespace ccc
