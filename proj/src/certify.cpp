#include "ccc/certify.hpp"

#include "ccc/parallel.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace ccc {

namespace {

const std::vector<std::pair<WitnessKind, const char*>> kind_names{
    {WitnessKind::Direction, "direction"},
    {WitnessKind::MicrolocalDegree, "microlocal-degree"},
    {WitnessKind::Surjectivity, "surjectivity"},
    {WitnessKind::MuNotConstant, "mu-not-constant"},
    {WitnessKind::OffLattice, "off-lattice"},
    {WitnessKind::OutsideFan, "outside-fan"},
    {WitnessKind::SingularSupport, "singular-support"},
    {WitnessKind::CurveDegree, "curve-degree"},
    {WitnessKind::Cohomology, "cohomology"},
};

void require_complete(const Fan& fan)
{
    if (!fan_validate(fan).complete)
        throw InputError("the fan is not complete");
}

void require_complete_smooth(const Fan& fan)
{
    auto rep = fan_validate(fan);
    if (!rep.complete)
        throw InputError("the fan is not complete");
    if (!rep.smooth)
        throw UnsupportedError("the fan is not smooth");
}

bool concentrated_in_zero(const std::map<int, std::size_t>& betti)
{
    for (const auto& [deg, b] : betti)
        if (deg != 0 && b != 0)
            return false;
    return true;
}

std::vector<std::size_t> top_cones(const Fan& fan) { return fan.cones_of_dim(fan.dim()); }

std::vector<std::size_t> codim_one_cones(const Fan& fan)
{
    return fan.dim() == 0 ? std::vector<std::size_t>{} : fan.cones_of_dim(fan.dim() - 1);
}

// Distinct bases of the generators placed on one cone.
std::vector<LatticePoint> bases_on(const ThetaComplex& F, std::size_t cone)
{
    std::set<LatticePoint> out;
    for (const auto& g : F.generators())
        if (g.cone == cone)
            out.insert(g.base);
    return {out.begin(), out.end()};
}

std::map<int, std::size_t> betti_of(const MorseLevel& L)
{
    std::map<int, std::size_t> out;
    for (std::size_t k = 0; k < L.betti.size(); ++k)
        if (L.betti[k])
            out[L.min_degree + static_cast<int>(k)] = L.betti[k];
    return out;
}

std::optional<Witness> direction_failure(const ThetaComplex& F, const QVector& xi)
{
    auto rep = morse_report(F, xi);
    if (rep.strict)
        return std::nullopt;
    for (const auto& L : rep.levels) {
        auto b = betti_of(L);
        bool degree_ok = concentrated_in_zero(b);
        if (degree_ok && L.h0_injective)
            continue;
        Witness w;
        w.kind = WitnessKind::Direction;
        w.condition = degree_ok ? "sublevel H^0 does not inject into the next level"
                                : "sublevel cohomology outside degree 0";
        w.direction = xi;
        w.level = L.level;
        w.betti = std::move(b);
        return w;
    }
    throw InternalError("Morse report is not strict but every level passes");
}

std::optional<Witness> degree_failure(const ThetaComplex& F, const QVector& x, std::size_t sigma)
{
    auto b = microlocal_complex(F, x, sigma).betti_map();
    if (concentrated_in_zero(b))
        return std::nullopt;
    Witness w;
    w.kind = WitnessKind::MicrolocalDegree;
    w.condition = "microlocal stalk has cohomology outside degree 0";
    w.point = x;
    w.cones = {sigma};
    w.betti = std::move(b);
    return w;
}

std::optional<Witness> surjectivity_failure(const ThetaComplex& F, const QVector& x, std::size_t sigma,
                                            std::size_t top)
{
    auto a = microlocal_complex(F, x, sigma);
    auto b = microlocal_complex(F, x, top);
    const std::size_t h = b.betti_at(0);
    if (h == 0)
        return std::nullopt;
    const std::size_t r = projection_rank(a, b, 0);
    if (r == h)
        return std::nullopt;
    Witness w;
    w.kind = WitnessKind::Surjectivity;
    w.condition = "H^0 restriction to the top cone is not surjective";
    w.point = x;
    w.cones = {sigma, top};
    w.betti = a.betti_map();
    w.expected = {{0, h}};
    w.rank = r;
    return w;
}

// Is the cell inside tau^perp + M, i.e. are the pairings with tau's rays constant and integral?
bool over_lattice_flat(const Cell& cell, const Cone& tau)
{
    const std::size_t n = cell.ambient_dim();
    std::vector<LatticePoint> rows;
    LatticePoint rhs;
    for (const auto& rho : tau.generators()) {
        QVector r = to_qvector(rho);
        if (!cell.constant_on(r))
            return false;
        Q c = dot(r, cell.sample());
        if (!is_integral(c))
            return false;
        rows.push_back(rho);
        rhs.push_back(c.get_num().get_si());
    }
    return rows.empty() || solve_integral(rows, rhs, n).has_value();
}

std::vector<Hyperplane> cone_walls(const std::vector<Cone>& cones)
{
    std::vector<Hyperplane> walls;
    for (const auto& t : cones) {
        if (t.dim() == 0)
            continue;
        for (const auto& e : t.equations())
            walls.push_back(Hyperplane{to_qvector(e), 0});
        for (const auto& f : t.facets())
            walls.push_back(Hyperplane{to_qvector(f), 0});
    }
    return walls;
}

// Witnesses for mu_x(f) at one point x of M.
std::vector<Witness> mu_failures(const ConstructibleFunction& f, const std::vector<Cone>& cones,
                                 const std::vector<Hyperplane>& walls, const Cell& base)
{
    const QVector& x = base.sample();
    auto g = cf_microlocalize(f, x);
    auto hs = walls;
    for (const auto& t : g.terms()) {
        auto more = defining_hyperplanes(t.cell);
        hs.insert(hs.end(), more.begin(), more.end());
    }
    const std::size_t n = f.ambient_dim();
    std::vector<Cell> minus;
    for (const auto& t : cones)
        minus.push_back(t.antipode().relative_interior());
    std::vector<std::optional<std::pair<Weight, QVector>>> seen(cones.size());
    std::vector<Witness> out;
    for (const auto& piece : make_arrangement(n, hs).cells) {
        const QVector& xi = piece.sample();
        Weight v = cf_evaluate(g, xi);
        std::optional<std::size_t> owner;
        for (std::size_t k = 0; k < cones.size(); ++k)
            if (minus[k].contains(xi)) {
                owner = k;
                break;
            }
        Witness w;
        w.point = x;
        w.direction = xi;
        w.value = v;
        if (!owner) {
            if (v != 0) {
                w.kind = WitnessKind::OutsideFan;
                w.condition = "microlocalisation is nonzero outside the antipodal fan";
                out.push_back(std::move(w));
            }
            continue;
        }
        auto& s = seen[*owner];
        w.cones = {*owner};
        if (!s) {
            s = std::make_pair(v, xi);
            if (v != 0 && !over_lattice_flat(base, cones[*owner])) {
                w.kind = WitnessKind::OffLattice;
                w.condition = "microlocalisation is nonzero on -tau away from tau^perp + M";
                out.push_back(std::move(w));
            }
        } else if (s->first != v) {
            w.kind = WitnessKind::MuNotConstant;
            w.condition = "microlocalisation is not constant on the interior of -tau";
            out.push_back(std::move(w));
        }
    }
    return out;
}

}  // namespace

std::string to_string(WitnessKind k)
{
    for (const auto& [kind, name] : kind_names)
        if (kind == k)
            return name;
    throw InternalError("unknown witness kind");
}

std::optional<WitnessKind> witness_kind_from_string(const std::string& s)
{
    for (const auto& [kind, name] : kind_names)
        if (s == name)
            return kind;
    return std::nullopt;
}

bool operator<(const Witness& a, const Witness& b)
{
    auto key = [](const Witness& w) {
        return std::tie(w.kind, w.cones, w.point, w.direction, w.level, w.condition, w.betti, w.value);
    };
    return key(a) < key(b);
}

void CertReport::fail(Witness w)
{
    verdict = false;
    witnesses.push_back(std::move(w));
}

void CertReport::merge(const CertReport& other)
{
    if (!other.verdict)
        verdict = false;
    witnesses.insert(witnesses.end(), other.witnesses.begin(), other.witnesses.end());
}

void CertReport::finish()
{
    std::sort(witnesses.begin(), witnesses.end());
    auto same = [](const Witness& a, const Witness& b) { return !(a < b) && !(b < a); };
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end(), same), witnesses.end());
}

// ---------------------------------------------------------------------------
// Convexity

DirectionSet sufficiency_directions(const ThetaComplex& F)
{
    const auto& fan = F.fan();
    auto hs = cone_walls(fan_cones(fan));
    std::set<LatticePoint> bases;
    for (const auto& g : F.generators())
        bases.insert(g.base);
    for (auto a = bases.begin(); a != bases.end(); ++a)
        for (auto b = std::next(a); b != bases.end(); ++b)
            hs.push_back(Hyperplane{to_qvector(sub(*a, *b)), 0});
    auto arr = make_arrangement(fan.dim(), hs);
    DirectionSet out;
    for (std::size_t i = 0; i < arr.cells.size(); ++i)
        out.samples.push_back(DirectionSample{arr.cells[i].sample(), i, arr.cells[i].dim()});
    return out;
}

CertReport convexity_check(const ThetaComplex& F) { return convexity_check(F, sufficiency_directions(F)); }

CertReport convexity_check(const ThetaComplex& F, const DirectionSet& dirs)
{
    require_complete(F.fan());
    auto found = parallel_map<std::optional<Witness>>(
        dirs.samples.size(), [&](std::size_t i) { return direction_failure(F, dirs.samples[i].xi); });
    CertReport rep;
    for (auto& w : found)
        if (w)
            rep.fail(std::move(*w));
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------------------
// Vector bundles and nefness

CertReport is_vector_bundle(const ThetaComplex& F)
{
    const auto& fan = F.fan();
    require_complete_smooth(fan);
    std::vector<std::pair<QVector, std::size_t>> checks;
    for (auto sigma : top_cones(fan))
        for (const auto& x : bases_on(F, sigma))
            checks.emplace_back(to_qvector(x), sigma);
    auto found = parallel_map<std::optional<Witness>>(
        checks.size(), [&](std::size_t i) { return degree_failure(F, checks[i].first, checks[i].second); });
    CertReport rep;
    for (auto& w : found)
        if (w)
            rep.fail(std::move(*w));
    rep.finish();
    return rep;
}

CertReport is_nef(const ThetaComplex& F)
{
    const auto& fan = F.fan();
    CertReport rep = is_vector_bundle(F);
    if (!rep.verdict)
        return rep;
    // (2a) on codimension-one cones: every weight with cohomology
    for (auto sigma : codim_one_cones(fan))
        for (const auto& [x, betti] : cohomology_table(F, sigma))
            if (!concentrated_in_zero(betti)) {
                Witness w;
                w.kind = WitnessKind::MicrolocalDegree;
                w.condition = "microlocal stalk has cohomology outside degree 0";
                w.point = to_qvector(x);
                w.cones = {sigma};
                w.betti = betti;
                rep.fail(std::move(w));
            }
    // (2b): only weights with nonzero H^0 on the top cone can fail
    std::vector<std::tuple<QVector, std::size_t, std::size_t>> checks;
    for (auto sigma : codim_one_cones(fan))
        for (auto top : top_cones(fan)) {
            if (!fan.is_face(sigma, top))
                continue;
            for (const auto& x : bases_on(F, top))
                checks.emplace_back(to_qvector(x), sigma, top);
        }
    auto found = parallel_map<std::optional<Witness>>(checks.size(), [&](std::size_t i) {
        const auto& [x, sigma, top] = checks[i];
        return surjectivity_failure(F, x, sigma, top);
    });
    for (auto& w : found)
        if (w)
            rep.fail(std::move(*w));
    rep.finish();
    return rep;
}

bool witness_holds(const ThetaComplex& F, const Witness& w)
{
    switch (w.kind) {
    case WitnessKind::Direction:
        if (!w.direction)
            throw InputError("direction witness without a direction");
        return !direction_failure(F, *w.direction);
    case WitnessKind::MicrolocalDegree:
        if (!w.point || w.cones.size() != 1)
            throw InputError("microlocal witness needs a point and one cone");
        return !degree_failure(F, *w.point, w.cones[0]);
    case WitnessKind::Surjectivity:
        if (!w.point || w.cones.size() != 2)
            throw InputError("surjectivity witness needs a point and two cones");
        return !surjectivity_failure(F, *w.point, w.cones[0], w.cones[1]);
    default:
        throw InputError("witness kind " + to_string(w.kind) + " does not apply to a Theta-complex");
    }
}

// ---------------------------------------------------------------------------
// Invariant-curve oracle

namespace {

std::vector<std::int64_t> jump_values(const Filtration& f)
{
    auto js = f.jumps();
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
}

Subspace intersect_all(const KlyachkoBundle& b, const RaySet& rays, const std::vector<std::int64_t>& at)
{
    const std::size_t r = b.rank();
    Subspace w;
    for (std::size_t i = 0; i < r; ++i) {
        QVector e(r);
        e[i] = 1;
        w.push_back(e);
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
        w = subspace_intersection(w, b.filtrations()[rays[i]].space_at(at[i], r), r);
    return span_basis(w, r);
}

}  // namespace

std::vector<CurveSplitting> curve_splittings(const KlyachkoBundle& b)
{
    const auto& fan = b.fan();
    require_complete_smooth(fan);
    const std::size_t r = b.rank();
    const std::size_t n = fan.dim();
    std::vector<CurveSplitting> out;
    for (auto tau : codim_one_cones(fan)) {
        std::vector<std::size_t> tops;
        for (auto top : top_cones(fan))
            if (fan.is_face(tau, top))
                tops.push_back(top);
        if (tops.size() != 2)
            throw InternalError("a wall of a complete fan must lie in two top cones");
        const RaySet& t = fan.cones()[tau];
        auto extra = [&](std::size_t top) {
            for (auto ray : fan.cones()[top])
                if (!std::binary_search(t.begin(), t.end(), ray))
                    return ray;
            throw InternalError("top cone equals its wall");
        };
        const std::size_t r1 = extra(tops[0]), r2 = extra(tops[1]);
        // rho_1 + rho_2 = sum_a coef_a * a over the rays a of tau
        std::vector<QVector> cols;
        for (auto a : t)
            cols.push_back(to_qvector(fan.rays()[a]));
        QVector target = to_qvector(add(fan.rays()[r1], fan.rays()[r2]));
        QVector coef;
        if (!t.empty()) {
            auto sol = solve(QMatrix::from_columns(cols, n), target);
            if (!sol || !is_integral(*sol))
                throw InternalError("transverse rays do not sum into the wall lattice");
            coef = *sol;
        } else if (!is_zero(target)) {
            throw InternalError("transverse rays of a one-dimensional fan must be opposite");
        }
        CurveSplitting cs{tau, tops[0], tops[1], {}};
        std::vector<std::vector<std::int64_t>> grids;
        for (auto a : t)
            grids.push_back(jump_values(b.filtrations()[a]));
        auto j1 = jump_values(b.filtrations()[r1]);
        auto j2 = jump_values(b.filtrations()[r2]);
        std::size_t total = 0;
        std::vector<std::int64_t> c(t.size());
        std::vector<std::size_t> idx(t.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < t.size(); ++i)
                c[i] = grids[i][idx[i]];
            Subspace W = intersect_all(b, t, c);
            Subspace lower;
            for (std::size_t i = 0; i < t.size(); ++i) {
                auto below = c;
                below[i] -= 1;
                lower = subspace_sum(lower, intersect_all(b, t, below), r);
            }
            lower = span_basis(lower, r);
            const std::size_t g = W.size() - lower.size();
            if (g > 0) {
                // induced filtrations on W / lower and their relative position
                auto piece = [&](std::size_t ray, std::int64_t k) {
                    auto s = subspace_intersection(W, b.filtrations()[ray].space_at(k, r), r);
                    return subspace_sum(s, lower, r);
                };
                auto D = [&](std::int64_t a1, std::int64_t a2) {
                    return span_basis(subspace_intersection(piece(r1, a1), piece(r2, a2), r), r).size() -
                           lower.size();
                };
                std::int64_t d0 = 0;
                for (std::size_t i = 0; i < t.size(); ++i)
                    d0 += coef[i].get_num().get_si() * c[i];
                std::size_t counted = 0;
                for (std::size_t p = 0; p < j1.size(); ++p)
                    for (std::size_t q = 0; q < j2.size(); ++q) {
                        const std::int64_t a1 = j1[p], a2 = j2[q];
                        const std::int64_t p1 = a1 - 1, p2 = a2 - 1;
                        long mult = static_cast<long>(D(a1, a2)) - static_cast<long>(D(p1, a2)) -
                                    static_cast<long>(D(a1, p2)) + static_cast<long>(D(p1, p2));
                        if (mult < 0)
                            throw InternalError("negative multiplicity in a relative position count");
                        for (long m = 0; m < mult; ++m)
                            cs.degrees.push_back(d0 - a1 - a2);
                        counted += static_cast<std::size_t>(mult);
                    }
                if (counted != g)
                    throw InternalError("transverse filtrations do not account for a graded piece");
                total += g;
            }
            std::size_t i = 0;
            for (; i < t.size(); ++i) {
                if (++idx[i] < grids[i].size())
                    break;
                idx[i] = 0;
            }
            if (i == t.size())
                break;
        }
        if (total != r)
            throw InternalError("graded pieces of a wall do not add up to the rank");
        std::sort(cs.degrees.begin(), cs.degrees.end());
        out.push_back(std::move(cs));
    }
    return out;
}

bool nef_oracle_curves(const KlyachkoBundle& b)
{
    for (const auto& cs : curve_splittings(b))
        for (auto d : cs.degrees)
            if (d < 0)
                return false;
    return true;
}

// ---------------------------------------------------------------------------
// Morelli image

CertReport mu_constancy_check(const ConstructibleFunction& f, const Fan& fan)
{
    if (f.ambient_dim() != fan.dim())
        throw InputError("function and fan have different dimensions");
    auto cones = fan_cones(fan);
    auto walls = cone_walls(cones);
    std::vector<Cell> cells;
    for (const auto& t : f.terms())
        cells.push_back(t.cell);
    auto arr = refine(cells);
    auto found = parallel_map<std::vector<Witness>>(
        arr.cells.size(), [&](std::size_t i) { return mu_failures(f, cones, walls, arr.cells[i]); });
    CertReport rep;
    for (auto& ws : found)
        for (auto& w : ws)
            rep.fail(std::move(w));
    rep.finish();
    return rep;
}

CertReport lambda_check(const ConstructibleFunction& f, const Fan& fan)
{
    if (f.ambient_dim() != fan.dim())
        throw InputError("function and fan have different dimensions");
    auto check = ss_subset_lambda(f, fan_cones(fan));
    CertReport rep;
    if (!check.holds) {
        Witness w;
        w.kind = WitnessKind::SingularSupport;
        w.condition = "singular support leaves Lambda";
        w.point = check.base->sample();
        w.direction = check.covector->sample();
        w.value = check.value;
        rep.fail(std::move(w));
    }
    rep.finish();
    return rep;
}

CertReport morelli_image_check(const ConstructibleFunction& f, const Fan& fan)
{
    auto rep = mu_constancy_check(f, fan);
    rep.merge(lambda_check(f, fan));
    rep.finish();
    return rep;
}

bool witness_holds(const ConstructibleFunction& f, const Fan& fan, const Witness& w)
{
    if (!w.point || !w.direction)
        throw InputError("function witnesses need a point and a covector");
    const QVector& x = *w.point;
    const QVector& xi = *w.direction;
    auto cones = fan_cones(fan);
    switch (w.kind) {
    case WitnessKind::SingularSupport: {
        auto core = cf_singular_support(f);
        if (!ss_core_contains(core, x, xi))
            return true;
        for (const auto& e : core.entries) {
            if (!e.base.contains(x))
                continue;
            for (std::size_t k = 0; k < cones.size(); ++k)
                if (cones[k].antipode().contains(xi) && over_lattice_flat(e.base, cones[k]))
                    return true;
        }
        return false;
    }
    case WitnessKind::MuNotConstant:
    case WitnessKind::OffLattice:
    case WitnessKind::OutsideFan: {
        std::vector<Cell> cells;
        for (const auto& t : f.terms())
            cells.push_back(t.cell);
        for (const auto& base : refine(cells).cells)
            if (base.contains(x)) {
                auto ws = mu_failures(f, cones, cone_walls(cones), base);
                for (const auto& v : ws)
                    if (v.kind == w.kind && v.cones == w.cones)
                        return false;
                return true;
            }
        return true;
    }
    default:
        throw InputError("witness kind " + to_string(w.kind) + " does not apply to a function");
    }
}

// ---------------------------------------------------------------------------
// Weight cohomology against the coherent Cech complex

std::map<int, std::size_t> klyachko_cech_cohomology(const KlyachkoBundle& b, const LatticePoint& x)
{
    const auto& fan = b.fan();
    if (x.size() != fan.dim())
        throw InputError("weight has wrong dimension");
    const std::size_t r = b.rank();
    const auto& tops = fan.maximal_cones();
    const std::size_t k = tops.size();
    if (k > 20)
        throw UnsupportedError("too many charts for the Cech oracle");
    // sections of weight x over the chart of a cone: intersection of E^a_{<= <a, x>}
    auto sections = [&](const RaySet& rays) {
        std::vector<std::int64_t> at;
        for (auto a : rays)
            at.push_back(dot(fan.rays()[a], x));
        return intersect_all(b, rays, at);
    };
    std::vector<std::vector<std::size_t>> by_size(k + 1);
    std::vector<Subspace> space(std::size_t{1} << k);
    for (std::size_t mask = 1; mask < space.size(); ++mask) {
        RaySet common;
        bool first = true;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) {
                if (first) {
                    common = tops[i];
                    first = false;
                } else {
                    RaySet next;
                    std::set_intersection(common.begin(), common.end(), tops[i].begin(), tops[i].end(),
                                          std::back_inserter(next));
                    common = std::move(next);
                }
            }
        space[mask] = sections(common);
        by_size[static_cast<std::size_t>(__builtin_popcountll(mask))].push_back(mask);
    }
    // C^p = sum over (p+1)-subsets; d inserts one chart with sign (-1)^position
    std::vector<std::size_t> dims(k, 0);
    std::vector<std::map<std::size_t, std::size_t>> offset(k);
    for (std::size_t p = 0; p < k; ++p)
        for (auto mask : by_size[p + 1]) {
            offset[p][mask] = dims[p];
            dims[p] += space[mask].size();
        }
    std::vector<std::size_t> ranks(k, 0);
    for (std::size_t p = 0; p + 1 < k; ++p) {
        QMatrix d(dims[p + 1], dims[p]);
        for (auto mask : by_size[p + 1])
            for (std::size_t j = 0; j < k; ++j) {
                if (mask >> j & 1)
                    continue;
                const std::size_t big = mask | (std::size_t{1} << j);
                const int position = __builtin_popcountll(mask & ((std::size_t{1} << j) - 1));
                const Q sign = position % 2 ? -1 : 1;
                for (std::size_t c = 0; c < space[mask].size(); ++c) {
                    auto coords = coordinates(space[big], space[mask][c], r);
                    if (!coords)
                        throw InternalError("sections over a chart do not restrict to a smaller chart");
                    for (std::size_t i = 0; i < coords->size(); ++i)
                        d(offset[p + 1][big] + i, offset[p][mask] + c) += sign * (*coords)[i];
                }
            }
        ranks[p] = d.rows() && d.cols() ? rank(d) : 0;
    }
    std::map<int, std::size_t> out;
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t h = dims[p] - ranks[p] - (p ? ranks[p - 1] : 0);
        if (h)
            out[static_cast<int>(p)] = h;
    }
    return out;
}

CertReport ccc_consistency(const KlyachkoBundle& b)
{
    const auto& fan = b.fan();
    require_complete_smooth(fan);
    const std::size_t n = fan.dim();
    auto table = cohomology_table(cech_complex(b), 0);
    // Cohomology of a bundle on a complete variety sits at finitely many weights, and
    // the oracle is constant on each cell of the arrangement of the jump hyperplanes,
    // so it vanishes on unbounded cells: the vertex box is enough.
    std::vector<Hyperplane> hs;
    for (std::size_t a = 0; a < fan.rays().size(); ++a)
        for (auto j : jump_values(b.filtrations()[a]))
            hs.push_back(Hyperplane{to_qvector(fan.rays()[a]), Q(static_cast<long>(j))});
    auto arr = make_arrangement(n, hs);
    std::vector<std::int64_t> lo(n, 0), hi(n, 0);
    bool any = false;
    for (const auto& c : arr.cells) {
        if (c.dim() != 0)
            continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Q& v = c.sample()[i];
            mpz_class fl, ce;
            mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
            mpz_cdiv_q(ce.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
            if (!any || fl.get_si() < lo[i])
                lo[i] = fl.get_si();
            if (!any || ce.get_si() > hi[i])
                hi[i] = ce.get_si();
        }
        any = true;
    }
    std::vector<LatticePoint> box;
    LatticePoint p = lo;
    if (n > 0)
        while (true) {
            box.push_back(p);
            std::size_t i = 0;
            for (; i < n; ++i) {
                if (++p[i] <= hi[i])
                    break;
                p[i] = lo[i];
            }
            if (i == n)
                break;
        }
    auto oracle = parallel_map<std::map<int, std::size_t>>(
        box.size(), [&](std::size_t i) { return klyachko_cech_cohomology(b, box[i]); });
    CertReport rep;
    std::set<LatticePoint> in_box(box.begin(), box.end());
    for (std::size_t i = 0; i < box.size(); ++i) {
        auto it = table.find(box[i]);
        std::map<int, std::size_t> got = it == table.end() ? std::map<int, std::size_t>{} : it->second;
        if (got != oracle[i]) {
            Witness w;
            w.kind = WitnessKind::Cohomology;
            w.condition = "weight cohomology differs from the coherent Cech complex";
            w.point = to_qvector(box[i]);
            w.betti = got;
            w.expected = oracle[i];
            rep.fail(std::move(w));
        }
    }
    for (const auto& [x, betti] : table)
        if (!in_box.count(x)) {
            Witness w;
            w.kind = WitnessKind::Cohomology;
            w.condition = "cohomology at a weight where the coherent side vanishes";
            w.point = to_qvector(x);
            w.betti = betti;
            rep.fail(std::move(w));
        }
    rep.finish();
    return rep;
}

std::optional<FujinoHit> fujino_search(std::int64_t n_max, std::int64_t m_min, std::int64_t m_max)
{
    for (std::int64_t n = 1; n <= n_max; ++n)
        for (std::int64_t m = m_min; m <= m_max; ++m) {
            auto F = cech_complex(fixtures::fujino(n, m));
            if (!is_nef(F).verdict)
                continue;
            FujinoHit hit{n, m, 0, 0};
            for (const auto& [x, betti] : cohomology_table(F, 0)) {
                auto it = betti.find(1);
                if (it != betti.end() && it->second) {
                    ++hit.h1_weights;
                    hit.h1_total += it->second;
                }
            }
            if (hit.h1_weights)
                return hit;
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Two-ray microlocal points

std::vector<QVector> two_ray_points(const ThetaComplex& F)
{
    const auto& fan = F.fan();
    const std::size_t n = fan.dim();
    std::vector<Hyperplane> hs;
    for (const auto& g : F.generators())
        for (const auto& r : fan.ray_vectors(g.cone))
            hs.push_back(Hyperplane{to_qvector(r), Q(static_cast<long>(dot(r, g.base)))});
    auto arr = make_arrangement(n, hs);
    auto rays = fan.cones_of_dim(1);
    auto hits = parallel_map<std::optional<QVector>>(arr.cells.size(), [&](std::size_t i) -> std::optional<QVector> {
        const QVector& x = arr.cells[i].sample();
        auto mu = mu_sheaf(F, x);
        std::vector<std::size_t> total(fan.cones().size(), 0);
        std::set<int> degrees;
        for (std::size_t c = 0; c < total.size(); ++c)
            for (const auto& [deg, b] : mu.stalks[c].betti_map()) {
                total[c] += b;
                degrees.insert(deg);
            }
        if (total[0] != 1 || degrees.size() != 1)
            return std::nullopt;
        std::vector<std::size_t> lit;
        for (std::size_t c = 1; c < total.size(); ++c) {
            if (total[c] == 0)
                continue;
            if (total[c] != 1 || fan.cone_dim(c) != 1)
                return std::nullopt;
            lit.push_back(c);
        }
        if (lit.size() != 2)
            return std::nullopt;
        const int deg = *degrees.begin();
        for (auto c : lit)
            if (projection_rank(mu.stalks[0], mu.stalks[c], deg) != 1)
                return std::nullopt;
        return x;
    });
    std::vector<QVector> out;
    for (auto& h : hits)
        if (h)
            out.push_back(std::move(*h));
    return out;
}

}  // namespace ccc
