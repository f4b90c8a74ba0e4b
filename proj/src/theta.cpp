#include "ccc/theta.hpp"

#include "ccc/parallel.hpp"
#include "ccc/polyhedra.hpp"

#include <algorithm>
#include <set>

namespace ccc {

namespace {

using Sparse = std::map<std::pair<std::size_t, std::size_t>, Q>;  // (target, source) -> value

Sparse compose(const std::vector<ThetaEntry>& second, const std::vector<ThetaEntry>& first)
{
    std::map<std::size_t, std::vector<const ThetaEntry*>> by_source;
    for (const auto& e : second)
        by_source[e.source].push_back(&e);
    Sparse out;
    for (const auto& e : first) {
        auto it = by_source.find(e.target);
        if (it == by_source.end())
            continue;
        for (const auto* g : it->second)
            out[{g->target, e.source}] += g->value * e.value;
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

std::string gen_name(const Fan& fan, const ThetaGenerator& g)
{
    std::string s = "(cone {";
    const auto& rays = fan.cones().at(g.cone);
    for (std::size_t i = 0; i < rays.size(); ++i)
        s += (i ? "," : "") + std::to_string(rays[i]);
    return s + "}, base " + format_vector(g.base) + ", degree " + std::to_string(g.degree) + ")";
}

std::size_t intersect_cones(const Fan& fan, std::size_t a, std::size_t b)
{
    RaySet out;
    const auto& x = fan.cones()[a];
    const auto& y = fan.cones()[b];
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return fan.index_of(out);
}

// Rank of the columns of m.
std::size_t column_rank(const QMatrix& m) { return m.rows() == 0 || m.cols() == 0 ? 0 : rank(m); }

std::vector<QVector> columns(const QMatrix& m)
{
    std::vector<QVector> out;
    for (std::size_t c = 0; c < m.cols(); ++c)
        out.push_back(m.column(c));
    return out;
}

// Cycles and boundaries of a VectComplex at index k, in its own coordinates.
std::vector<QVector> cycles(const VectComplex& v, std::size_t k)
{
    if (k >= v.d.size() || v.d[k].rows() == 0) {
        std::vector<QVector> all;
        for (std::size_t i = 0; i < v.dims[k]; ++i) {
            QVector e(v.dims[k]);
            e[i] = 1;
            all.push_back(e);
        }
        return all;
    }
    return nullspace(v.d[k]);
}

std::vector<QVector> boundaries(const VectComplex& v, std::size_t k)
{
    if (k == 0 || v.d[k - 1].cols() == 0)
        return {};
    return columns(v.d[k - 1]);
}

// Embeds vectors written on the labels of `small` into the labels of `large`.
std::vector<QVector> embed(const std::vector<QVector>& vs, const std::vector<std::size_t>& small,
                           const std::vector<std::size_t>& large)
{
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < large.size(); ++i)
        pos[large[i]] = i;
    std::vector<QVector> out;
    for (const auto& v : vs) {
        QVector w(large.size());
        for (std::size_t i = 0; i < small.size(); ++i)
            w[pos.at(small[i])] = v[i];
        out.push_back(w);
    }
    return out;
}

// Is H^k(small) -> H^k(large) injective?  small is a subcomplex of large on generator labels.
bool injective_at(const VectComplex& small, const VectComplex& large, std::size_t k)
{
    const std::size_t n = large.dims[k];
    auto z = cycles(small, k);
    auto bs = boundaries(small, k);
    std::size_t h_small = rank(z, small.dims[k]) - rank(bs, small.dims[k]);
    auto zl = embed(z, small.labels[k], large.labels[k]);
    auto bl = boundaries(large, k);
    std::size_t rb = rank(bl, n);
    auto all = bl;
    all.insert(all.end(), zl.begin(), zl.end());
    return rank(all, n) - rb == h_small;
}

std::vector<Cone> cones_of(const Fan& fan) { return fan_cones(fan); }

}  // namespace

bool theta_leq(const Fan& fan, const ThetaGenerator& s, const ThetaGenerator& t)
{
    if (!fan.is_face(t.cone, s.cone))
        return false;
    auto diff = sub(s.base, t.base);
    for (const auto& r : fan.ray_vectors(t.cone))
        if (dot(r, diff) < 0)
            return false;
    return true;
}

ThetaComplex::ThetaComplex(Fan fan, std::vector<ThetaGenerator> generators, std::vector<ThetaEntry> differential)
    : fan_(std::move(fan)), gens_(std::move(generators))
{
    for (const auto& g : gens_) {
        if (g.cone >= fan_.cones().size())
            throw InputError("generator refers to a missing cone");
        if (g.base.size() != fan_.dim())
            throw InputError("generator base has wrong dimension");
    }
    Sparse merged;
    for (const auto& e : differential) {
        if (e.target >= gens_.size() || e.source >= gens_.size())
            throw InputError("differential entry refers to a missing generator");
        merged[{e.target, e.source}] += e.value;
    }
    for (const auto& [key, value] : merged) {
        if (sgn(value) == 0)
            continue;
        const auto& s = gens_[key.second];
        const auto& t = gens_[key.first];
        if (t.degree != s.degree + 1)
            throw InvariantError("differential entry " + gen_name(fan_, s) + " -> " + gen_name(fan_, t) +
                                 " does not raise the degree by one");
        if (!theta_leq(fan_, s, t))
            throw InvariantError("differential entry " + gen_name(fan_, s) + " -> " + gen_name(fan_, t) +
                                 " violates the generator order");
        d_.push_back(ThetaEntry{key.first, key.second, value});
    }
    auto dd = compose(d_, d_);
    if (!dd.empty())
        throw InvariantError("differential does not square to zero at " +
                             gen_name(fan_, gens_[dd.begin()->first.second]));
}

int ThetaComplex::min_degree() const
{
    int m = 0;
    bool first = true;
    for (const auto& g : gens_)
        if (first || g.degree < m)
            m = g.degree, first = false;
    return m;
}

int ThetaComplex::max_degree() const
{
    int m = 0;
    bool first = true;
    for (const auto& g : gens_)
        if (first || g.degree > m)
            m = g.degree, first = false;
    return m;
}

// ---------------------------------------------------------------------------
// Vector space complexes

std::vector<std::size_t> VectComplex::betti() const
{
    std::vector<std::size_t> ranks(d.size());
    for (std::size_t k = 0; k < d.size(); ++k)
        ranks[k] = column_rank(d[k]);
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
        std::size_t out_rank = k < ranks.size() ? ranks[k] : 0;
        std::size_t in_rank = k > 0 ? ranks[k - 1] : 0;
        out[k] = dims[k] - out_rank - in_rank;
    }
    return out;
}

std::size_t VectComplex::betti_at(int degree) const
{
    int k = degree - min_degree;
    if (k < 0 || k >= static_cast<int>(dims.size()))
        return 0;
    return betti()[static_cast<std::size_t>(k)];
}

std::map<int, std::size_t> VectComplex::betti_map() const
{
    std::map<int, std::size_t> out;
    auto b = betti();
    for (std::size_t k = 0; k < b.size(); ++k)
        if (b[k])
            out[min_degree + static_cast<int>(k)] = b[k];
    return out;
}

bool VectComplex::is_zero_cohomology() const { return betti_map().empty(); }

VectComplex restrict_complex(const ThetaComplex& F, const std::vector<bool>& keep)
{
    VectComplex v;
    const auto& gens = F.generators();
    if (gens.empty())
        return v;
    v.min_degree = F.min_degree();
    const std::size_t len = static_cast<std::size_t>(F.max_degree() - v.min_degree + 1);
    v.labels.assign(len, {});
    std::vector<std::size_t> position(gens.size(), 0);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (keep[i]) {
            auto& lab = v.labels[static_cast<std::size_t>(gens[i].degree - v.min_degree)];
            position[i] = lab.size();
            lab.push_back(i);
        }
    for (const auto& lab : v.labels)
        v.dims.push_back(lab.size());
    for (std::size_t k = 0; k + 1 < len; ++k)
        v.d.emplace_back(v.dims[k + 1], v.dims[k]);
    for (const auto& e : F.differential())
        if (keep[e.source] && keep[e.target]) {
            auto k = static_cast<std::size_t>(gens[e.source].degree - v.min_degree);
            v.d[k](position[e.target], position[e.source]) = e.value;
        }
    for (std::size_t k = 0; k + 2 < len; ++k)
        if (!(v.d[k + 1] * v.d[k]).is_zero())
            throw InternalError("restricted complex does not square to zero");
    return v;
}

std::size_t projection_rank(const VectComplex& a, const VectComplex& b, int degree)
{
    if (a.dims.empty() || b.dims.empty())
        return 0;
    if (a.min_degree != b.min_degree || a.dims.size() != b.dims.size())
        throw InputError("complexes span different degrees");
    const int k = degree - a.min_degree;
    if (k < 0 || k >= static_cast<int>(a.dims.size()))
        return 0;
    const auto idx = static_cast<std::size_t>(k);
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < a.labels[idx].size(); ++i)
        pos[a.labels[idx][i]] = i;
    const auto& lb = b.labels[idx];
    const std::size_t n = lb.size();
    auto all = boundaries(b, idx);
    const std::size_t rb = rank(all, n);
    for (const auto& z : cycles(a, idx)) {
        QVector w(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = pos.find(lb[i]);
            if (it == pos.end())
                throw InputError("target generators are not a subset of the source");
            w[i] = z[it->second];
        }
        all.push_back(std::move(w));
    }
    return rank(all, n) - rb;
}

VectComplex compactly_supported_sections(const ThetaComplex& F)
{
    return restrict_complex(F, std::vector<bool>(F.generators().size(), true));
}

// ---------------------------------------------------------------------------
// Maps and constructions

void validate_map(const ThetaMap& f)
{
    if (!(f.source.fan() == f.target.fan()))
        throw InputError("map between complexes on different fans");
    const auto& fan = f.source.fan();
    for (const auto& e : f.entries) {
        if (e.source >= f.source.generators().size() || e.target >= f.target.generators().size())
            throw InputError("map entry refers to a missing generator");
        const auto& s = f.source.generators()[e.source];
        const auto& t = f.target.generators()[e.target];
        if (s.degree != t.degree)
            throw InvariantError("map entry changes degree");
        if (sgn(e.value) != 0 && !theta_leq(fan, s, t))
            throw InvariantError("map entry " + gen_name(fan, s) + " -> " + gen_name(fan, t) +
                                 " violates the generator order");
    }
    auto left = compose(f.target.differential(), f.entries);
    auto right = compose(f.entries, f.source.differential());
    if (left != right)
        throw InvariantError("map does not commute with the differentials");
}

ThetaComplex cech_complex(const KlyachkoBundle& b)
{
    const auto& fan = b.fan();
    const std::size_t n = fan.dim();
    const std::size_t r = b.rank();
    auto split = klyachko_validate(b);
    std::vector<ThetaGenerator> gens;
    std::vector<std::size_t> first(fan.cones().size());
    for (std::size_t c = 0; c < fan.cones().size(); ++c) {
        first[c] = gens.size();
        for (std::size_t i = 0; i < r; ++i)
            gens.push_back(ThetaGenerator{c, split.cones[c].weights[i],
                                          static_cast<int>(n - fan.cone_dim(c)), static_cast<std::int64_t>(i)});
    }
    std::vector<ThetaEntry> d;
    for (std::size_t c = 0; c < fan.cones().size(); ++c) {
        const auto& rays = fan.cones()[c];
        for (std::size_t p = 0; p < rays.size(); ++p) {
            RaySet face = rays;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(p));
            auto t = fan.index_of(face);
            Q sign = p % 2 ? -1 : 1;
            for (std::size_t i = 0; i < r; ++i) {
                auto coords = coordinates(split.cones[t].basis, split.cones[c].basis[i], r);
                if (!coords)
                    throw InternalError("adapted bases span different spaces");
                for (std::size_t j = 0; j < r; ++j) {
                    if (sgn((*coords)[j]) == 0)
                        continue;
                    if (!theta_leq(fan, gens[first[c] + i], gens[first[t] + j]))
                        throw InternalError("Cech differential has a forbidden entry " +
                                            gen_name(fan, gens[first[c] + i]) + " -> " +
                                            gen_name(fan, gens[first[t] + j]));
                    d.push_back(ThetaEntry{first[t] + j, first[c] + i, sign * (*coords)[j]});
                }
            }
        }
    }
    return ThetaComplex(fan, std::move(gens), std::move(d));
}

ThetaComplex restrict_to_chart(const ThetaComplex& F, std::size_t tau)
{
    auto gens = F.generators();
    for (auto& g : gens)
        g.cone = intersect_cones(F.fan(), g.cone, tau);
    return ThetaComplex(F.fan(), std::move(gens), F.differential());
}

ThetaComplex shift(const ThetaComplex& F, int s)
{
    auto gens = F.generators();
    for (auto& g : gens)
        g.degree -= s;
    auto d = F.differential();
    if (s % 2)
        for (auto& e : d)
            e.value = -e.value;
    return ThetaComplex(F.fan(), std::move(gens), std::move(d));
}

ThetaComplex translate(const ThetaComplex& F, const LatticePoint& v)
{
    if (v.size() != F.fan().dim())
        throw InputError("translation has wrong dimension");
    auto gens = F.generators();
    for (auto& g : gens)
        for (std::size_t i = 0; i < v.size(); ++i)
            g.base[i] += v[i];
    return ThetaComplex(F.fan(), std::move(gens), F.differential());
}

ThetaComplex prune_to_point(const ThetaComplex& F, const QVector& x)
{
    const auto& fan = F.fan();
    const auto& gens = F.generators();
    std::vector<std::size_t> index(gens.size(), gens.size());
    std::vector<ThetaGenerator> kept;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto diff = sub(x, to_qvector(gens[i].base));
        bool in = true;
        for (const auto& r : fan.ray_vectors(gens[i].cone))
            if (sgn(dot(to_qvector(r), diff)) < 0)
                in = false;
        if (in) {
            index[i] = kept.size();
            kept.push_back(gens[i]);
        }
    }
    // closed supports only grow along the differential, so targets of kept sources are kept
    std::vector<ThetaEntry> d;
    for (const auto& e : F.differential())
        if (index[e.source] < gens.size()) {
            if (index[e.target] == gens.size())
                throw InternalError("differential leaves the closed support of a point");
            d.push_back(ThetaEntry{index[e.target], index[e.source], e.value});
        }
    return ThetaComplex(fan, std::move(kept), std::move(d));
}

ThetaComplex theta_sum(const std::vector<ThetaComplex>& parts)
{
    if (parts.empty())
        throw InputError("empty direct sum");
    std::vector<ThetaGenerator> gens;
    std::vector<ThetaEntry> d;
    for (const auto& p : parts) {
        if (!(p.fan() == parts.front().fan()))
            throw InputError("direct sum of complexes on different fans");
        std::size_t off = gens.size();
        gens.insert(gens.end(), p.generators().begin(), p.generators().end());
        for (auto e : p.differential()) {
            e.target += off;
            e.source += off;
            d.push_back(e);
        }
    }
    return ThetaComplex(parts.front().fan(), std::move(gens), std::move(d));
}

ThetaComplex theta_cone(const ThetaMap& f)
{
    validate_map(f);
    std::vector<ThetaGenerator> gens = f.source.generators();
    for (auto& g : gens)
        g.degree -= 1;
    const std::size_t off = gens.size();
    gens.insert(gens.end(), f.target.generators().begin(), f.target.generators().end());
    std::vector<ThetaEntry> d;
    for (auto e : f.source.differential()) {
        e.value = -e.value;
        d.push_back(e);
    }
    for (auto e : f.target.differential()) {
        e.target += off;
        e.source += off;
        d.push_back(e);
    }
    for (auto e : f.entries) {
        e.target += off;
        d.push_back(e);
    }
    return ThetaComplex(f.source.fan(), std::move(gens), std::move(d));
}

ThetaMap line_bundle_morphism(const CartierData& source, const CartierData& target)
{
    if (!(source.fan == target.fan))
        throw InputError("line bundles live on different fans");
    validate_cartier(source);
    validate_cartier(target);
    const auto& fan = source.fan;
    for (std::size_t i = 0; i < fan.maximal_cones().size(); ++i) {
        auto diff = sub(source.m[i], target.m[i]);
        for (auto r : fan.maximal_cones()[i])
            if (dot(fan.rays()[r], diff) < 0)
                throw InputError("no map of line bundles: " + format_vector(diff) +
                                 " is outside the dual of maximal cone " + std::to_string(i));
    }
    ThetaMap f{cech_complex(cartier_to_klyachko(source)), cech_complex(cartier_to_klyachko(target)), {}};
    for (std::size_t i = 0; i < f.source.generators().size(); ++i)
        f.entries.push_back(ThetaEntry{i, i, 1});
    validate_map(f);
    return f;
}

ThetaMap line_bundle_map(const LatticePoint& u, const CartierData& L)
{
    CartierData Ou{L.fan, std::vector<LatticePoint>(L.fan.maximal_cones().size(), u)};
    return line_bundle_morphism(Ou, L);
}

ThetaMap theta_map_sum(const std::vector<ThetaMap>& maps)
{
    if (maps.empty())
        throw InputError("empty sum of maps");
    std::vector<ThetaComplex> sources;
    for (const auto& m : maps)
        sources.push_back(m.source);
    ThetaMap out{theta_sum(sources), maps.front().target, {}};
    std::size_t off = 0;
    for (const auto& m : maps) {
        if (m.target.generators().size() != out.target.generators().size())
            throw InputError("maps have different targets");
        for (auto e : m.entries) {
            e.source += off;
            out.entries.push_back(e);
        }
        off += m.source.generators().size();
    }
    validate_map(out);
    return out;
}

ThetaComplex kernel_bundle_complex(const CartierData& L, const CartierData& Lprime)
{
    auto target = tensor(L, Lprime);
    std::vector<ThetaMap> maps;
    for (const auto& u : polytope_sections(L)) {
        CartierData Ou{L.fan, std::vector<LatticePoint>(L.fan.maximal_cones().size(), u)};
        maps.push_back(line_bundle_morphism(tensor(Ou, Lprime), target));
    }
    if (maps.empty())
        throw InputError("line bundle has no sections");
    return shift(theta_cone(theta_map_sum(maps)), -1);
}

ThetaComplex fixed_point_complex(const Fan& fan, std::size_t top_cone, const LatticePoint& chi)
{
    const std::size_t n = fan.dim();
    if (fan.cone_dim(top_cone) != n)
        throw InputError("fixed points come from top-dimensional cones");
    auto rays = fan.ray_vectors(top_cone);
    std::vector<LatticePoint> dual;
    for (std::size_t i = 0; i < n; ++i) {
        LatticePoint e(n, 0);
        e[i] = 1;
        auto m = solve_integral(rays, e, n);
        if (!m)
            throw UnsupportedError("cone is not smooth");
        dual.push_back(*m);
    }
    std::vector<ThetaGenerator> gens;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        LatticePoint base = chi;
        int size = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1)
                base = add(base, dual[i]), ++size;
        gens.push_back(ThetaGenerator{top_cone, base, -size, static_cast<std::int64_t>(mask)});
    }
    std::vector<ThetaEntry> d;
    for (std::size_t mask = 0; mask < gens.size(); ++mask) {
        int pos = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                d.push_back(ThetaEntry{mask & ~(std::size_t{1} << i), mask, Q(pos % 2 ? -1 : 1)});
                ++pos;
            }
    }
    return ThetaComplex(fan, std::move(gens), std::move(d));
}

// ---------------------------------------------------------------------------
// Morse filtrations

std::optional<Q> morse_weight(const ThetaComplex& F, std::size_t generator, const QVector& xi)
{
    const auto& g = F.generators().at(generator);
    if (!F.fan().cone(g.cone).contains(xi))
        return std::nullopt;
    return dot(xi, to_qvector(g.base));
}

namespace {

std::vector<std::optional<Q>> all_weights(const ThetaComplex& F, const QVector& xi)
{
    auto cones = cones_of(F.fan());
    std::vector<std::optional<Q>> w;
    for (const auto& g : F.generators())
        w.push_back(cones[g.cone].contains(xi) ? std::optional<Q>(dot(xi, to_qvector(g.base))) : std::nullopt);
    return w;
}

}  // namespace

VectComplex morse_level(const ThetaComplex& F, const QVector& xi, const Q& t)
{
    auto w = all_weights(F, xi);
    std::vector<bool> keep(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        keep[i] = !w[i] || *w[i] < t;
    return restrict_complex(F, keep);
}

MorseReport morse_report(const ThetaComplex& F, const QVector& xi)
{
    if (xi.size() != F.fan().dim())
        throw InputError("direction has wrong dimension");
    MorseReport rep;
    rep.xi = xi;
    auto w = all_weights(F, xi);
    std::set<Q> js;
    for (const auto& x : w)
        if (x)
            js.insert(*x);
    rep.jumps.assign(js.begin(), js.end());
    std::optional<VectComplex> prev;
    auto add_level = [&](std::optional<Q> level) {
        std::vector<bool> keep(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            keep[i] = !w[i] || (level && *w[i] <= *level);
        auto v = restrict_complex(F, keep);
        MorseLevel L;
        L.level = level;
        L.betti = v.betti();
        L.min_degree = v.min_degree;
        L.h0 = v.betti_at(0);
        int k0 = -v.min_degree;
        if (prev && k0 >= 0 && k0 < static_cast<int>(v.dims.size()))
            L.h0_injective = injective_at(*prev, v, static_cast<std::size_t>(k0));
        for (std::size_t k = 0; k < L.betti.size(); ++k)
            if (L.betti[k] && v.min_degree + static_cast<int>(k) != 0)
                rep.strict = false;
        if (!L.h0_injective)
            rep.strict = false;
        rep.levels.push_back(std::move(L));
        prev = std::move(v);
    };
    if (F.generators().empty())
        return rep;
    add_level(std::nullopt);
    for (const auto& j : rep.jumps)
        add_level(j);
    return rep;
}

std::vector<std::pair<std::int64_t, std::size_t>> klyachko_extract(const ThetaComplex& F, std::size_t ray)
{
    if (ray >= F.fan().rays().size())
        throw InputError("no ray " + std::to_string(ray));
    auto rep = morse_report(F, to_qvector(F.fan().rays()[ray]));
    std::vector<std::pair<std::int64_t, std::size_t>> out;
    std::size_t last = rep.levels.empty() ? 0 : rep.levels.front().h0;
    if (last != 0)
        throw InvariantError("Morse filtration along ray " + std::to_string(ray) + " does not start at zero");
    for (std::size_t i = 1; i < rep.levels.size(); ++i) {
        const auto& L = rep.levels[i];
        if (L.h0 != last) {
            out.emplace_back(to_lattice({*L.level})[0], L.h0);
            last = L.h0;
        }
    }
    return out;
}

std::vector<std::pair<std::int64_t, std::size_t>> filtration_profile(const Filtration& f)
{
    std::vector<std::pair<std::int64_t, std::size_t>> out;
    for (const auto& s : f.steps)
        out.emplace_back(s.jump, s.basis.size());
    return out;
}

// ---------------------------------------------------------------------------
// Microlocal stalks

std::vector<bool> microlocal_support(const ThetaComplex& F, const QVector& x, std::size_t sigma)
{
    const auto& fan = F.fan();
    if (sigma >= fan.cones().size())
        throw InputError("cone not in the fan");
    if (x.size() != fan.dim())
        throw InputError("point has wrong dimension");
    std::vector<bool> keep;
    for (const auto& g : F.generators()) {
        bool ok = fan.is_face(sigma, g.cone);
        if (ok) {
            auto diff = sub(x, to_qvector(g.base));
            for (const auto& r : fan.ray_vectors(g.cone))
                if (sgn(dot(to_qvector(r), diff)) < 0)
                    ok = false;
            for (const auto& r : fan.ray_vectors(sigma))
                if (sgn(dot(to_qvector(r), diff)) != 0)
                    ok = false;
        }
        keep.push_back(ok);
    }
    return keep;
}

VectComplex microlocal_complex(const ThetaComplex& F, const QVector& x, std::size_t sigma)
{
    return restrict_complex(F, microlocal_support(F, x, sigma));
}

MuSheaf mu_sheaf(const ThetaComplex& F, const QVector& x)
{
    const auto& fan = F.fan();
    MuSheaf mu;
    mu.x = x;
    for (std::size_t c = 0; c < fan.cones().size(); ++c)
        mu.stalks.push_back(microlocal_complex(F, x, c));
    auto projection = [&](std::size_t from, std::size_t to, std::size_t k) {
        const auto& a = mu.stalks[from].labels[k];
        const auto& b = mu.stalks[to].labels[k];
        QMatrix p(b.size(), a.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            auto it = std::find(a.begin(), a.end(), b[i]);
            if (it == a.end())
                throw InternalError("microlocal support grows along a face inclusion");
            p(i, static_cast<std::size_t>(it - a.begin())) = 1;
        }
        return p;
    };
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t s = 0; s < fan.cones().size(); ++s)
        for (std::size_t u = 0; u < fan.cones().size(); ++u) {
            if (s == u || !fan.is_face(s, u))
                continue;
            MuRestriction r{s, u, {}};
            const auto& A = mu.stalks[s];
            const auto& B = mu.stalks[u];
            for (std::size_t k = 0; k < A.dims.size(); ++k)
                r.blocks.push_back(projection(s, u, k));
            for (std::size_t k = 0; k + 1 < A.dims.size(); ++k)
                if (!(r.blocks[k + 1] * A.d[k] == B.d[k] * r.blocks[k]))
                    throw InternalError("microlocal restriction is not a chain map");
            index[{s, u}] = mu.restrictions.size();
            mu.restrictions.push_back(std::move(r));
        }
    for (const auto& [key, i] : index) {
        auto [s, u] = key;
        for (std::size_t w = 0; w < fan.cones().size(); ++w) {
            auto uw = index.find({u, w});
            if (uw == index.end())
                continue;
            const auto& direct = mu.restrictions[index.at({s, w})];
            for (std::size_t k = 0; k < direct.blocks.size(); ++k)
                if (!(mu.restrictions[uw->second].blocks[k] * mu.restrictions[i].blocks[k] == direct.blocks[k]))
                    throw InternalError("microlocal restrictions do not compose");
        }
    }
    return mu;
}

std::map<LatticePoint, std::map<int, std::size_t>> cohomology_table(const ThetaComplex& F, std::size_t sigma)
{
    const auto& fan = F.fan();
    const std::size_t n = fan.dim();
    std::vector<Hyperplane> hs;
    for (const auto& g : F.generators()) {
        if (!fan.is_face(sigma, g.cone))
            continue;
        for (const auto& r : fan.ray_vectors(g.cone))
            hs.push_back(Hyperplane{to_qvector(r), Q(static_cast<long>(dot(r, g.base)))});
    }
    auto arr = make_arrangement(n, hs);
    using Rows = std::vector<std::pair<LatticePoint, std::map<int, std::size_t>>>;
    auto per_cell = parallel_map<Rows>(arr.cells.size(), [&](std::size_t i) {
        const auto& cell = arr.cells[i];
        auto betti = microlocal_complex(F, cell.sample(), sigma).betti_map();
        Rows rows;
        if (betti.empty())
            return rows;
        if (!cell.is_bounded())
            throw UnsupportedError("cohomology is nonzero at infinitely many weights");
        for (const auto& p : lattice_points(cell.closure_constraints(), n))
            if (cell.contains(to_qvector(p)))
                rows.emplace_back(p, betti);
        return rows;
    });
    std::map<LatticePoint, std::map<int, std::size_t>> out;
    for (auto& rows : per_cell)
        for (auto& [p, b] : rows)
            out[p] = b;
    return out;
}

// ---------------------------------------------------------------------------
// Euler functions

namespace {

Cell open_translate(const Fan& fan, const ThetaGenerator& g)
{
    std::vector<Hyperplane> gts;
    for (const auto& r : fan.ray_vectors(g.cone))
        gts.push_back(Hyperplane{to_qvector(r), Q(static_cast<long>(dot(r, g.base)))});
    return Cell(fan.dim(), {}, std::move(gts));
}

}  // namespace

ConstructibleFunction stalk_euler_function(const ThetaComplex& F)
{
    ConstructibleFunction f(F.fan().dim());
    for (const auto& g : F.generators())
        f.add(open_translate(F.fan(), g), g.degree % 2 ? -1 : 1);
    return f;
}

ConstructibleFunction costalk_euler_function(const ThetaComplex& F)
{
    ConstructibleFunction f(F.fan().dim());
    for (const auto& g : F.generators())
        f.add(cf_indicator(IndicatorKind::Standard, open_translate(F.fan(), g)), g.degree % 2 ? -1 : 1);
    return f;
}

}  // namespace ccc
