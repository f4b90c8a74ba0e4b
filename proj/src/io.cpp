#include "ccc/io.hpp"

#include "ccc/fixtures.hpp"
#include "ccc/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ccc::io {

SchemaError::SchemaError(std::string ptr, const std::string& message)
    : InputError((ptr.empty() ? std::string("/") : ptr) + ": " + message), pointer(std::move(ptr))
{
}

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& member(const json& j, const std::string& ptr, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(ptr, std::string("missing required member \"") + key + "\"");
    return *it;
}

void expect_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        throw SchemaError(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = it.key() == "type" || it.key() == "schema_version";
        for (const char* a : allowed)
            ok = ok || it.key() == a;
        if (!ok)
            throw SchemaError(child(ptr, it.key()), "unknown member");
    }
    if (auto v = j.find("schema_version"); v != j.end() && (!v->is_number_integer() || v->get<int>() != kSchemaVersion))
        throw SchemaError(child(ptr, "schema_version"), "unsupported schema version");
}

const json& expect_array(const json& j, const std::string& ptr)
{
    if (!j.is_array())
        throw SchemaError(ptr, "expected an array");
    return j;
}

std::int64_t get_int(const json& j, const std::string& ptr)
{
    if (!j.is_number_integer())
        throw SchemaError(ptr, "expected an integer");
    return j.get<std::int64_t>();
}

std::size_t get_index(const json& j, const std::string& ptr)
{
    auto v = get_int(j, ptr);
    if (v < 0)
        throw SchemaError(ptr, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

Q get_rational(const json& j, const std::string& ptr)
{
    if (j.is_number_integer())
        return Q(static_cast<long>(j.get<std::int64_t>()));
    if (!j.is_string())
        throw SchemaError(ptr, "expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
        throw SchemaError(ptr, e.what());
    }
}

QVector get_qvector(const json& j, const std::string& ptr, std::optional<std::size_t> len = std::nullopt)
{
    expect_array(j, ptr);
    if (len && j.size() != *len)
        throw SchemaError(ptr, "expected " + std::to_string(*len) + " entries");
    QVector v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(get_rational(j[i], child(ptr, i)));
    return v;
}

LatticePoint get_lattice(const json& j, const std::string& ptr, std::optional<std::size_t> len = std::nullopt)
{
    expect_array(j, ptr);
    if (len && j.size() != *len)
        throw SchemaError(ptr, "expected " + std::to_string(*len) + " entries");
    LatticePoint v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(get_int(j[i], child(ptr, i)));
    return v;
}

RaySet get_rayset(const json& j, const std::string& ptr, std::size_t nrays)
{
    expect_array(j, ptr);
    RaySet s;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto r = get_index(j[i], child(ptr, i));
        if (r >= nrays)
            throw SchemaError(child(ptr, i), "ray index out of range");
        s.push_back(r);
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw SchemaError(ptr, "repeated ray index");
    return s;
}

std::size_t get_key_index(const std::string& key, const std::string& ptr, std::size_t bound)
{
    std::size_t pos = 0;
    std::size_t v = 0;
    try {
        v = std::stoul(key, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos == 0 || pos != key.size())
        throw SchemaError(ptr, "key is not an index");
    if (v >= bound)
        throw SchemaError(ptr, "index out of range");
    return v;
}

const json& fan_member(const json& j, const std::string& ptr) { return member(j, ptr, "fan"); }

std::string inferred_type(const json& j)
{
    if (auto t = j.find("type"); t != j.end()) {
        if (!t->is_string())
            throw SchemaError("/type", "expected a string");
        return t->get<std::string>();
    }
    if (!j.is_object())
        throw SchemaError("", "expected an object");
    if (j.contains("terms"))
        return "function";
    if (j.contains("filtrations"))
        return "klyachko";
    if (j.contains("generators"))
        return "theta";
    if (j.contains("m"))
        return "cartier";
    if (j.contains("rays"))
        return "fan";
    throw SchemaError("", "cannot infer the document type");
}

json hyperplane_row(const Hyperplane& h)
{
    json row = json::array();
    for (const auto& a : h.normal)
        row.push_back(rational_json(a));
    row.push_back(rational_json(h.offset));
    return row;
}

json cell_json(const Cell& c)
{
    json eq = json::array(), gt = json::array();
    for (const auto& h : c.equalities())
        eq.push_back(hyperplane_row(h));
    for (const auto& h : c.inequalities())
        gt.push_back(hyperplane_row(h));
    return json{{"eq", eq}, {"gt", gt}};
}

std::vector<Hyperplane> get_rows(const json& j, const std::string& ptr, std::size_t dim)
{
    expect_array(j, ptr);
    std::vector<Hyperplane> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto v = get_qvector(j[i], child(ptr, i), dim + 1);
        Q offset = v.back();
        v.pop_back();
        rows.push_back({v, offset});
    }
    return rows;
}

json lattice_json(const LatticePoint& p)
{
    json a = json::array();
    for (auto x : p)
        a.push_back(x);
    return a;
}

json rayset_json(const RaySet& s)
{
    json a = json::array();
    for (auto r : s)
        a.push_back(r);
    return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Documents

std::string document_kind(const Document& d)
{
    static const char* names[] = {"fan", "cartier", "klyachko", "function", "theta"};
    return names[d.index()];
}

Fan parse_fan(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"dim", "rays", "cones"});
    auto dim = get_index(member(j, ptr, "dim"), child(ptr, "dim"));
    if (dim == 0)
        throw SchemaError(child(ptr, "dim"), "dimension must be positive");
    const auto& rj = expect_array(member(j, ptr, "rays"), child(ptr, "rays"));
    std::vector<LatticePoint> rays;
    for (std::size_t i = 0; i < rj.size(); ++i)
        rays.push_back(get_lattice(rj[i], child(child(ptr, "rays"), i), dim));
    const auto& cj = expect_array(member(j, ptr, "cones"), child(ptr, "cones"));
    std::vector<RaySet> cones;
    for (std::size_t i = 0; i < cj.size(); ++i)
        cones.push_back(get_rayset(cj[i], child(child(ptr, "cones"), i), rays.size()));
    return Fan(dim, std::move(rays), std::move(cones));
}

CartierData parse_cartier(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"fan", "m"});
    CartierData L;
    L.fan = parse_fan(fan_member(j, ptr), child(ptr, "fan"));
    const auto& mj = member(j, ptr, "m");
    auto mptr = child(ptr, "m");
    if (!mj.is_object())
        throw SchemaError(mptr, "expected an object keyed by maximal cone index");
    std::vector<std::optional<LatticePoint>> m(L.fan.maximal_cones().size());
    for (auto it = mj.begin(); it != mj.end(); ++it) {
        auto k = get_key_index(it.key(), child(mptr, it.key()), m.size());
        m[k] = get_lattice(*it, child(mptr, it.key()), L.fan.dim());
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (!m[k])
            throw SchemaError(mptr, "missing character for maximal cone " + std::to_string(k));
        L.m.push_back(*m[k]);
    }
    validate_cartier(L);
    return L;
}

KlyachkoBundle parse_klyachko(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"fan", "rank", "filtrations", "convention"});
    Fan fan = parse_fan(fan_member(j, ptr), child(ptr, "fan"));
    auto rank = get_index(member(j, ptr, "rank"), child(ptr, "rank"));
    if (rank == 0)
        throw SchemaError(child(ptr, "rank"), "rank must be positive");
    // "klyachko": step j lists E(j), the decreasing filtration with E(j) = E_{<= -j}
    bool decreasing = false;
    if (auto c = j.find("convention"); c != j.end()) {
        if (*c == "increasing")
            decreasing = false;
        else if (*c == "klyachko")
            decreasing = true;
        else
            throw SchemaError(child(ptr, "convention"), "expected \"increasing\" or \"klyachko\"");
    }
    Subspace full;
    for (std::size_t i = 0; i < rank; ++i) {
        QVector e(rank);
        e[i] = 1;
        full.push_back(e);
    }
    std::vector<Filtration> filt(fan.rays().size(), Filtration{{FiltrationStep{0, full}}});
    const auto& fj = member(j, ptr, "filtrations");
    auto fptr = child(ptr, "filtrations");
    if (!fj.is_object())
        throw SchemaError(fptr, "expected an object keyed by ray index");
    for (auto it = fj.begin(); it != fj.end(); ++it) {
        auto rptr = child(fptr, it.key());
        auto ray = get_key_index(it.key(), rptr, filt.size());
        expect_array(*it, rptr);
        Filtration f;
        for (std::size_t s = 0; s < it->size(); ++s) {
            auto sptr = child(rptr, s);
            const auto& step = (*it)[s];
            expect_object(step, sptr, {"jump", "basis"});
            auto jump = get_int(member(step, sptr, "jump"), child(sptr, "jump"));
            const auto& bj = expect_array(member(step, sptr, "basis"), child(sptr, "basis"));
            Subspace basis;
            for (std::size_t v = 0; v < bj.size(); ++v)
                basis.push_back(get_qvector(bj[v], child(child(sptr, "basis"), v), rank));
            f.steps.push_back({decreasing ? -jump : jump, basis});
        }
        filt[ray] = std::move(f);
    }
    KlyachkoBundle b(std::move(fan), rank, std::move(filt));
    klyachko_validate(b);
    return b;
}

ConstructibleFunction parse_function(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"dim", "terms"});
    auto dim = get_index(member(j, ptr, "dim"), child(ptr, "dim"));
    if (dim == 0)
        throw SchemaError(child(ptr, "dim"), "dimension must be positive");
    ConstructibleFunction f(dim);
    const auto& tj = expect_array(member(j, ptr, "terms"), child(ptr, "terms"));
    for (std::size_t i = 0; i < tj.size(); ++i) {
        auto tptr = child(child(ptr, "terms"), i);
        const auto& t = tj[i];
        // dim, bounded, shade and label are plotting hints written by dump_cells
        expect_object(t, tptr, {"eq", "gt", "weight", "dim", "bounded", "shade", "label"});
        auto eq = t.contains("eq") ? get_rows(t["eq"], child(tptr, "eq"), dim) : std::vector<Hyperplane>{};
        auto gt = t.contains("gt") ? get_rows(t["gt"], child(tptr, "gt"), dim) : std::vector<Hyperplane>{};
        auto w = get_int(member(t, tptr, "weight"), child(tptr, "weight"));
        auto cell = Cell::make(dim, eq, gt);
        if (!cell)
            throw InvariantError(tptr + ": cell is empty");
        f.add(*cell, w);
    }
    return f;
}

ThetaComplex parse_theta(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"fan", "generators", "differential"});
    Fan fan = parse_fan(fan_member(j, ptr), child(ptr, "fan"));
    std::vector<ThetaGenerator> gens;
    const auto& gj = expect_array(member(j, ptr, "generators"), child(ptr, "generators"));
    for (std::size_t i = 0; i < gj.size(); ++i) {
        auto gptr = child(child(ptr, "generators"), i);
        expect_object(gj[i], gptr, {"cone", "base", "degree", "tag"});
        ThetaGenerator g;
        auto rays = get_rayset(member(gj[i], gptr, "cone"), child(gptr, "cone"), fan.rays().size());
        auto idx = fan.find(rays);
        if (!idx)
            throw SchemaError(child(gptr, "cone"), "not a cone of the fan");
        g.cone = *idx;
        g.base = get_lattice(member(gj[i], gptr, "base"), child(gptr, "base"), fan.dim());
        g.degree = static_cast<int>(get_int(member(gj[i], gptr, "degree"), child(gptr, "degree")));
        if (gj[i].contains("tag"))
            g.tag = get_int(gj[i]["tag"], child(gptr, "tag"));
        gens.push_back(std::move(g));
    }
    std::vector<ThetaEntry> d;
    const auto& dj = expect_array(member(j, ptr, "differential"), child(ptr, "differential"));
    for (std::size_t i = 0; i < dj.size(); ++i) {
        auto eptr = child(child(ptr, "differential"), i);
        expect_object(dj[i], eptr, {"target", "source", "value"});
        ThetaEntry e;
        e.target = get_index(member(dj[i], eptr, "target"), child(eptr, "target"));
        e.source = get_index(member(dj[i], eptr, "source"), child(eptr, "source"));
        if (e.target >= gens.size())
            throw SchemaError(child(eptr, "target"), "generator index out of range");
        if (e.source >= gens.size())
            throw SchemaError(child(eptr, "source"), "generator index out of range");
        e.value = get_rational(member(dj[i], eptr, "value"), child(eptr, "value"));
        d.push_back(std::move(e));
    }
    return ThetaComplex(std::move(fan), std::move(gens), std::move(d));
}

Document parse_document(const json& j)
{
    auto t = inferred_type(j);
    if (t == "fan")
        return parse_fan(j);
    if (t == "cartier")
        return parse_cartier(j);
    if (t == "klyachko")
        return parse_klyachko(j);
    if (t == "function")
        return parse_function(j);
    if (t == "theta")
        return parse_theta(j);
    throw SchemaError("/type", "unknown document type \"" + t + "\"");
}

json read_json(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw SchemaError("", path + ": " + e.what());
    }
}

Document parse_input(const std::string& path) { return parse_document(read_json(path)); }

json rational_json(const Q& q) { return format_rational(q); }

json vector_json(const QVector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(rational_json(x));
    return a;
}

json to_json(const Fan& fan)
{
    json rays = json::array(), cones = json::array();
    for (const auto& r : fan.rays())
        rays.push_back(lattice_json(r));
    for (const auto& c : fan.maximal_cones())
        cones.push_back(rayset_json(c));
    return json{{"type", "fan"}, {"schema_version", kSchemaVersion}, {"dim", fan.dim()}, {"rays", rays}, {"cones", cones}};
}

json to_json(const CartierData& L)
{
    json m = json::object();
    for (std::size_t k = 0; k < L.m.size(); ++k)
        m[std::to_string(k)] = lattice_json(L.m[k]);
    return json{{"type", "cartier"}, {"schema_version", kSchemaVersion}, {"fan", to_json(L.fan)}, {"m", m}};
}

json to_json(const KlyachkoBundle& b)
{
    json f = json::object();
    for (std::size_t r = 0; r < b.filtrations().size(); ++r) {
        json steps = json::array();
        for (const auto& s : b.filtrations()[r].steps) {
            json basis = json::array();
            for (const auto& v : s.basis)
                basis.push_back(vector_json(v));
            steps.push_back(json{{"jump", s.jump}, {"basis", basis}});
        }
        f[std::to_string(r)] = steps;
    }
    return json{{"type", "klyachko"}, {"schema_version", kSchemaVersion}, {"fan", to_json(b.fan())},
                {"rank", b.rank()}, {"filtrations", f}};
}

json to_json(const ConstructibleFunction& f)
{
    json terms = json::array();
    for (const auto& t : f.terms()) {
        json c = cell_json(t.cell);
        c["weight"] = t.weight;
        terms.push_back(c);
    }
    return json{{"type", "function"}, {"schema_version", kSchemaVersion}, {"dim", f.ambient_dim()}, {"terms", terms}};
}

json to_json(const ThetaComplex& F)
{
    json gens = json::array(), d = json::array();
    for (const auto& g : F.generators())
        gens.push_back(json{{"cone", rayset_json(F.fan().cones()[g.cone])},
                            {"base", lattice_json(g.base)},
                            {"degree", g.degree},
                            {"tag", g.tag}});
    for (const auto& e : F.differential())
        d.push_back(json{{"target", e.target}, {"source", e.source}, {"value", rational_json(e.value)}});
    return json{{"type", "theta"}, {"schema_version", kSchemaVersion}, {"fan", to_json(F.fan())},
                {"generators", gens}, {"differential", d}};
}

json to_json(const Document& d)
{
    return std::visit([](const auto& v) { return to_json(v); }, d);
}

json betti_json(const std::map<int, std::size_t>& betti)
{
    json o = json::object();
    for (const auto& [k, v] : betti)
        o[std::to_string(k)] = v;
    return o;
}

namespace {

std::map<int, std::size_t> parse_betti(const json& j, const std::string& ptr)
{
    if (!j.is_object())
        throw SchemaError(ptr, "expected an object keyed by degree");
    std::map<int, std::size_t> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto kptr = child(ptr, it.key());
        int k = 0;
        try {
            std::size_t pos = 0;
            k = std::stoi(it.key(), &pos);
            if (pos != it.key().size())
                throw 0;
        } catch (...) {
            throw SchemaError(kptr, "key is not a degree");
        }
        out[k] = get_index(*it, kptr);
    }
    return out;
}

}  // namespace

json to_json(const Witness& w)
{
    json o{{"kind", to_string(w.kind)}, {"condition", w.condition}};
    if (w.point)
        o["point"] = vector_json(*w.point);
    if (w.direction)
        o["direction"] = vector_json(*w.direction);
    json cones = json::array();
    for (auto c : w.cones)
        cones.push_back(c);
    o["cones"] = cones;
    o["betti"] = betti_json(w.betti);
    o["expected"] = betti_json(w.expected);
    if (w.level)
        o["level"] = rational_json(*w.level);
    o["rank"] = w.rank;
    o["value"] = w.value;
    return o;
}

Witness parse_witness(const json& j, const std::string& ptr)
{
    expect_object(j, ptr, {"kind", "condition", "point", "direction", "cones", "cone_rays", "betti", "expected",
                           "level", "rank", "value"});
    Witness w;
    const auto& k = member(j, ptr, "kind");
    auto kind = k.is_string() ? witness_kind_from_string(k.get<std::string>()) : std::nullopt;
    if (!kind)
        throw SchemaError(child(ptr, "kind"), "unknown witness kind");
    w.kind = *kind;
    if (j.contains("condition")) {
        if (!j["condition"].is_string())
            throw SchemaError(child(ptr, "condition"), "expected a string");
        w.condition = j["condition"].get<std::string>();
    }
    if (j.contains("point"))
        w.point = get_qvector(j["point"], child(ptr, "point"));
    if (j.contains("direction"))
        w.direction = get_qvector(j["direction"], child(ptr, "direction"));
    if (j.contains("cones")) {
        const auto& c = expect_array(j["cones"], child(ptr, "cones"));
        for (std::size_t i = 0; i < c.size(); ++i)
            w.cones.push_back(get_index(c[i], child(child(ptr, "cones"), i)));
    }
    if (j.contains("betti"))
        w.betti = parse_betti(j["betti"], child(ptr, "betti"));
    if (j.contains("expected"))
        w.expected = parse_betti(j["expected"], child(ptr, "expected"));
    if (j.contains("level"))
        w.level = get_rational(j["level"], child(ptr, "level"));
    if (j.contains("rank"))
        w.rank = get_index(j["rank"], child(ptr, "rank"));
    if (j.contains("value"))
        w.value = get_int(j["value"], child(ptr, "value"));
    return w;
}

// ---------------------------------------------------------------------------
// Dumps

namespace {

json shade(Weight w) { return w > 0 ? "positive" : (w < 0 ? "negative" : "zero"); }

std::string signed_label(Weight w) { return (w > 0 ? "+" : "") + std::to_string(w); }

void check_dump_dim(std::size_t dim)
{
    if (dim > 3)
        throw UnsupportedError("cell dumps are limited to dimension 3");
}

}  // namespace

json dump_cells(const ConstructibleFunction& f)
{
    check_dump_dim(f.ambient_dim());
    auto simple = cf_simplify(f);
    // faces of arrangement cells are arrangement cells, so the sign vector of a
    // sample point against all defining hyperplanes identifies a face
    std::vector<Hyperplane> walls;
    for (const auto& t : simple.terms())
        for (auto& h : defining_hyperplanes(t.cell))
            if (std::find(walls.begin(), walls.end(), h) == walls.end())
                walls.push_back(h);
    auto signs = [&](const QVector& x) {
        std::vector<int> s;
        for (const auto& h : walls)
            s.push_back(sgn(dot(h.normal, x) - h.offset));
        return s;
    };
    std::set<std::vector<int>> seen;
    std::vector<Cell> cells;
    for (const auto& t : simple.terms())
        for (auto& face : faces(t.cell))
            if (seen.insert(signs(face.sample())).second)
                cells.push_back(face);
    // higher-dimensional cells first, then by sample point, so dumps are stable
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.dim() != b.dim())
            return a.dim() > b.dim();
        return a.sample() < b.sample();
    });
    json terms = json::array();
    for (const auto& c : cells) {
        auto w = cf_evaluate(f, c.sample());
        json t = cell_json(c);
        t["weight"] = w;
        t["dim"] = c.dim();
        t["bounded"] = c.is_bounded();
        t["shade"] = shade(w);
        t["label"] = signed_label(w);
        terms.push_back(t);
    }
    return json{{"type", "function"}, {"schema_version", kSchemaVersion}, {"dim", f.ambient_dim()}, {"terms", terms}};
}

json dump_mu(const MuSheaf& mu, const Fan& fan)
{
    check_dump_dim(fan.dim());
    json cones = json::array();
    for (std::size_t c = 0; c < fan.cones().size(); ++c) {
        auto betti = mu.stalks[c].betti_map();
        std::string label;
        for (const auto& [k, v] : betti)
            label += (label.empty() ? "" : " + ") + std::string("H^") + std::to_string(k) +
                     (v > 1 ? "^" + std::to_string(v) : "");
        cones.push_back(json{{"cone", c},
                             {"rays", rayset_json(fan.cones()[c])},
                             {"covector_cell", cell_json(fan.cone(c).antipode().relative_interior())},
                             {"betti", betti_json(betti)},
                             {"label", label.empty() ? "0" : label}});
    }
    return json{{"type", "mu-sheaf"}, {"schema_version", kSchemaVersion}, {"dim", fan.dim()},
                {"x", vector_json(mu.x)}, {"cones", cones}};
}

std::string serialize(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Job configuration

JobConfig parse_config(const json& j)
{
    expect_object(j, "", {"command", "inputs", "convention", "directions", "point", "cone", "output", "dump",
                          "replay", "seed", "timing"});
    JobConfig cfg;
    auto strings = [&](const char* key) {
        std::vector<std::string> out;
        const auto& a = expect_array(member(j, "", key), child("", key));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_string())
                throw SchemaError(child(child("", key), i), "expected a string");
            out.push_back(a[i].get<std::string>());
        }
        return out;
    };
    auto string = [&](const char* key) {
        if (!j[key].is_string())
            throw SchemaError(child("", key), "expected a string");
        return j[key].get<std::string>();
    };
    cfg.command = strings("command");
    if (j.contains("inputs"))
        cfg.inputs = strings("inputs");
    if (j.contains("convention"))
        cfg.convention = string("convention");
    if (j.contains("directions")) {
        const auto& a = expect_array(j["directions"], "/directions");
        for (std::size_t i = 0; i < a.size(); ++i)
            cfg.directions.push_back(get_qvector(a[i], child("/directions", i)));
    }
    if (j.contains("point"))
        cfg.point = get_qvector(j["point"], "/point");
    if (j.contains("cone"))
        cfg.cone = get_index(j["cone"], "/cone");
    if (j.contains("output"))
        cfg.output = string("output");
    if (j.contains("dump"))
        cfg.dump = string("dump");
    if (j.contains("replay"))
        cfg.replay = string("replay");
    if (j.contains("seed"))
        cfg.seed = get_index(j["seed"], "/seed");
    if (j.contains("timing")) {
        if (!j["timing"].is_boolean())
            throw SchemaError("/timing", "expected a boolean");
        cfg.timing = j["timing"].get<bool>();
    }
    return cfg;
}

json to_json(const JobConfig& cfg)
{
    json o{{"command", cfg.command}, {"inputs", cfg.inputs}, {"convention", cfg.convention}};
    json dirs = json::array();
    for (const auto& d : cfg.directions)
        dirs.push_back(vector_json(d));
    o["directions"] = dirs;
    if (cfg.point)
        o["point"] = vector_json(*cfg.point);
    if (cfg.cone)
        o["cone"] = *cfg.cone;
    if (cfg.output)
        o["output"] = *cfg.output;
    if (cfg.dump)
        o["dump"] = *cfg.dump;
    if (cfg.replay)
        o["replay"] = *cfg.replay;
    o["seed"] = cfg.seed;
    o["timing"] = cfg.timing;
    return o;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct UsageError : InputError {
    using InputError::InputError;
};

struct Context {
    explicit Context(const JobConfig& c) : cfg(c) {}

    const JobConfig& cfg;
    std::vector<Document> docs;
    json result = json::object();
    std::optional<bool> verdict;
    json witnesses = json::array();
};

const Document& input(Context& ctx, std::size_t i)
{
    if (i >= ctx.docs.size())
        throw UsageError("command expects at least " + std::to_string(i + 1) + " input document(s)");
    return ctx.docs[i];
}

const Fan& fan_of(const Document& d)
{
    if (auto f = std::get_if<Fan>(&d))
        return *f;
    if (auto L = std::get_if<CartierData>(&d))
        return L->fan;
    if (auto b = std::get_if<KlyachkoBundle>(&d))
        return b->fan();
    if (auto F = std::get_if<ThetaComplex>(&d))
        return F->fan();
    throw UsageError("a function document carries no fan");
}

std::optional<KlyachkoBundle> bundle_of(const Document& d)
{
    if (auto L = std::get_if<CartierData>(&d))
        return cartier_to_klyachko(*L);
    if (auto b = std::get_if<KlyachkoBundle>(&d))
        return *b;
    return std::nullopt;
}

ThetaComplex complex_of(const Document& d)
{
    if (auto F = std::get_if<ThetaComplex>(&d))
        return *F;
    if (auto b = bundle_of(d))
        return cech_complex(*b);
    throw UsageError("expected a theta, klyachko or cartier document, got " + document_kind(d));
}

const ConstructibleFunction& function_of(const Document& d)
{
    if (auto f = std::get_if<ConstructibleFunction>(&d))
        return *f;
    throw UsageError("expected a function document, got " + document_kind(d));
}

const QVector& need_point(const Context& ctx, std::size_t dim)
{
    if (!ctx.cfg.point)
        throw UsageError("this command needs --point");
    if (ctx.cfg.point->size() != dim)
        throw UsageError("--point has " + std::to_string(ctx.cfg.point->size()) + " coordinates, expected " +
                         std::to_string(dim));
    return *ctx.cfg.point;
}

std::size_t need_cone(const Context& ctx, const Fan& fan, std::size_t fallback)
{
    auto c = ctx.cfg.cone.value_or(fallback);
    if (c >= fan.cones().size())
        throw UsageError("--cone " + std::to_string(c) + " out of range");
    return c;
}

void check_directions(const Context& ctx, std::size_t dim)
{
    for (const auto& d : ctx.cfg.directions)
        if (d.size() != dim)
            throw UsageError("--direction has the wrong number of coordinates");
}

json witness_json(const Witness& w, const Fan* fan)
{
    json o = to_json(w);
    if (fan) {
        json rays = json::array();
        for (auto c : w.cones)
            rays.push_back(c < fan->cones().size() ? rayset_json(fan->cones()[c]) : json());
        o["cone_rays"] = rays;
    }
    return o;
}

void set_report(Context& ctx, const CertReport& rep, const Fan* fan)
{
    ctx.verdict = rep.verdict;
    for (const auto& w : rep.witnesses)
        ctx.witnesses.push_back(witness_json(w, fan));
}

void write_dump(const Context& ctx, const json& doc)
{
    if (!ctx.cfg.dump)
        return;
    std::ofstream out(*ctx.cfg.dump, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + *ctx.cfg.dump);
    out << serialize(doc);
}

std::vector<Witness> load_witnesses(const std::string& path)
{
    json j = read_json(path);
    std::vector<Witness> out;
    if (j.is_object() && j.contains("witnesses")) {
        const auto& a = expect_array(j["witnesses"], "/witnesses");
        for (std::size_t i = 0; i < a.size(); ++i)
            out.push_back(parse_witness(a[i], child("/witnesses", i)));
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(parse_witness(j[i], child("", i)));
    } else {
        out.push_back(parse_witness(j));
    }
    return out;
}

template <class Holds>
void replay(Context& ctx, const Fan* fan, Holds&& holds)
{
    json entries = json::array();
    bool all = true;
    for (const auto& w : load_witnesses(*ctx.cfg.replay)) {
        bool ok = holds(w);
        all = all && ok;
        entries.push_back(json{{"witness", witness_json(w, fan)}, {"holds", ok}});
        if (!ok)
            ctx.witnesses.push_back(witness_json(w, fan));
    }
    ctx.result["replayed"] = entries;
    ctx.verdict = all;
}

void cmd_fan_validate(Context& ctx)
{
    const Fan& fan = fan_of(input(ctx, 0));
    auto rep = fan_validate(fan);
    ctx.result["dim"] = fan.dim();
    ctx.result["rays"] = fan.rays().size();
    ctx.result["cones"] = fan.cones().size();
    ctx.result["smooth"] = rep.smooth;
    ctx.result["complete"] = rep.complete;
    ctx.result["simplicial"] = rep.simplicial;
    if (rep.singular_cone)
        ctx.result["singular_cone"] = rayset_json(*rep.singular_cone);
    if (rep.uncovered)
        ctx.result["uncovered"] = vector_json(*rep.uncovered);
    ctx.verdict = rep.smooth && rep.complete;
}

void cmd_mo(Context& ctx)
{
    const auto& doc = input(ctx, 0);
    auto b = bundle_of(doc);
    ConstructibleFunction f;
    if (ctx.cfg.convention == "eq1")
        f = b ? morelli_eq1(*b) : stalk_euler_function(complex_of(doc));
    else if (ctx.cfg.convention == "costalk")
        f = costalk_euler_function(complex_of(doc));
    else
        throw UsageError("--convention must be eq1 or costalk");
    f = cf_simplify(f);
    ctx.result["convention"] = ctx.cfg.convention;
    ctx.result["integral"] = cf_integrate(f);
    ctx.result["function"] = to_json(f);
    write_dump(ctx, dump_cells(f));
}

void emit_function(Context& ctx, const ConstructibleFunction& f)
{
    auto s = cf_simplify(f);
    ctx.result["function"] = to_json(s);
    write_dump(ctx, dump_cells(s));
}

void cmd_euler(Context& ctx, const std::string& sub)
{
    if (sub == "integrate") {
        ctx.result["value"] = cf_integrate(function_of(input(ctx, 0)));
    } else if (sub == "convolve") {
        const auto& f = function_of(input(ctx, 0));
        const auto& g = function_of(input(ctx, 1));
        if (f.ambient_dim() != g.ambient_dim())
            throw UsageError("convolution needs functions on the same space");
        emit_function(ctx, cf_convolve(f, g));
    } else if (sub == "ft") {
        emit_function(ctx, cf_fourier_sato(function_of(input(ctx, 0))));
    } else if (sub == "mu") {
        const auto& f = function_of(input(ctx, 0));
        emit_function(ctx, cf_microlocalize(f, need_point(ctx, f.ambient_dim())));
    } else if (sub == "ss") {
        const auto& f = function_of(input(ctx, 0));
        auto core = cf_singular_support(f);
        json entries = json::array();
        for (const auto& e : core.entries) {
            json covs = json::array();
            for (const auto& c : e.covectors) {
                json cj = cell_json(c.cell);
                cj["value"] = c.value;
                covs.push_back(cj);
            }
            entries.push_back(json{{"base", cell_json(e.base)}, {"covectors", covs}});
        }
        ctx.result["core"] = entries;
        if (ctx.docs.size() > 1) {
            const Fan& fan = fan_of(ctx.docs[1]);
            if (fan.dim() != f.ambient_dim())
                throw UsageError("fan and function dimensions differ");
            set_report(ctx, lambda_check(f, fan), &fan);
        }
    } else {
        throw UsageError("unknown euler command \"" + sub + "\"");
    }
}

json table_json(const std::map<LatticePoint, std::map<int, std::size_t>>& table, std::size_t dim)
{
    int lo = 0, hi = static_cast<int>(dim);
    for (const auto& [x, b] : table)
        for (const auto& [k, v] : b) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    json rows = json::array();
    for (const auto& [x, b] : table) {
        json betti = json::array();
        for (int k = lo; k <= hi; ++k)
            betti.push_back(b.count(k) ? b.at(k) : 0);
        rows.push_back(json{{"x", lattice_json(x)}, {"betti", betti}});
    }
    return json{{"degrees", {lo, hi}}, {"rows", rows}};
}

void cmd_theta(Context& ctx, const std::string& sub)
{
    const auto& doc = input(ctx, 0);
    if (sub == "cech") {
        auto b = bundle_of(doc);
        if (!b)
            throw UsageError("theta cech expects a cartier or klyachko document");
        ctx.result["complex"] = to_json(cech_complex(*b));
        return;
    }
    ThetaComplex F = complex_of(doc);
    const Fan& fan = F.fan();
    if (sub == "sections") {
        ctx.result["betti"] = betti_json(compactly_supported_sections(F).betti_map());
    } else if (sub == "morse") {
        check_directions(ctx, fan.dim());
        std::vector<QVector> dirs = ctx.cfg.directions;
        if (dirs.empty())
            for (const auto& r : fan.rays())
                dirs.push_back(to_qvector(r));
        json out = json::array();
        bool strict = true;
        for (const auto& xi : dirs) {
            auto rep = morse_report(F, xi);
            json levels = json::array();
            for (const auto& l : rep.levels) {
                std::map<int, std::size_t> b;
                for (std::size_t k = 0; k < l.betti.size(); ++k)
                    if (l.betti[k])
                        b[l.min_degree + static_cast<int>(k)] = l.betti[k];
                levels.push_back(json{{"level", l.level ? rational_json(*l.level) : json()},
                                      {"betti", betti_json(b)},
                                      {"h0", l.h0},
                                      {"h0_injective", l.h0_injective}});
            }
            json jumps = json::array();
            for (const auto& q : rep.jumps)
                jumps.push_back(rational_json(q));
            out.push_back(json{{"xi", vector_json(xi)}, {"jumps", jumps}, {"levels", levels}, {"strict", rep.strict}});
            strict = strict && rep.strict;
        }
        ctx.result["directions"] = out;
        ctx.verdict = strict;
    } else if (sub == "microlocal") {
        const auto& x = need_point(ctx, fan.dim());
        if (ctx.cfg.cone) {
            auto c = need_cone(ctx, fan, 0);
            ctx.result["cone"] = c;
            ctx.result["rays"] = rayset_json(fan.cones()[c]);
            ctx.result["betti"] = betti_json(microlocal_complex(F, x, c).betti_map());
            return;
        }
        auto mu = mu_sheaf(F, x);
        json stalks = json::array();
        for (std::size_t c = 0; c < fan.cones().size(); ++c)
            stalks.push_back(json{{"cone", c}, {"rays", rayset_json(fan.cones()[c])},
                                  {"betti", betti_json(mu.stalks[c].betti_map())}});
        json restr = json::array();
        for (const auto& r : mu.restrictions) {
            std::map<int, std::size_t> ranks;
            const auto& a = mu.stalks[r.from];
            for (std::size_t k = 0; k < a.dims.size(); ++k) {
                int deg = a.min_degree + static_cast<int>(k);
                if (auto rk = projection_rank(a, mu.stalks[r.to], deg))
                    ranks[deg] = rk;
            }
            restr.push_back(json{{"from", r.from}, {"to", r.to}, {"ranks", betti_json(ranks)}});
        }
        ctx.result["x"] = vector_json(x);
        ctx.result["stalks"] = stalks;
        ctx.result["restrictions"] = restr;
        write_dump(ctx, dump_mu(mu, fan));
    } else if (sub == "table") {
        auto c = need_cone(ctx, fan, 0);
        ctx.result["cone"] = c;
        ctx.result["rays"] = rayset_json(fan.cones()[c]);
        ctx.result["table"] = table_json(cohomology_table(F, c), fan.dim());
    } else {
        throw UsageError("unknown theta command \"" + sub + "\"");
    }
}

void cmd_certify(Context& ctx, const std::string& sub)
{
    if (sub == "morelli-image") {
        const auto& f = function_of(input(ctx, 0));
        const Fan& fan = fan_of(input(ctx, 1));
        if (fan.dim() != f.ambient_dim())
            throw UsageError("fan and function dimensions differ");
        if (ctx.cfg.replay)
            return replay(ctx, &fan, [&](const Witness& w) { return witness_holds(f, fan, w); });
        return set_report(ctx, morelli_image_check(f, fan), &fan);
    }
    const auto& doc = input(ctx, 0);
    ThetaComplex F = complex_of(doc);
    const Fan& fan = F.fan();
    if (sub != "bundle" && sub != "nef" && sub != "convex")
        throw UsageError("unknown certify command \"" + sub + "\"");
    if (ctx.cfg.replay)
        return replay(ctx, &fan, [&](const Witness& w) { return witness_holds(F, w); });
    if (sub == "bundle") {
        set_report(ctx, is_vector_bundle(F), &fan);
    } else if (sub == "nef") {
        set_report(ctx, is_nef(F), &fan);
        if (auto b = bundle_of(doc)) {
            json curves = json::array();
            for (const auto& s : curve_splittings(*b))
                curves.push_back(json{{"cone", s.cone}, {"rays", rayset_json(fan.cones()[s.cone])},
                                      {"degrees", s.degrees}});
            ctx.result["curves"] = curves;
            ctx.result["curve_oracle"] = nef_oracle_curves(*b);
        }
    } else {
        check_directions(ctx, fan.dim());
        if (ctx.cfg.directions.empty()) {
            set_report(ctx, convexity_check(F), &fan);
        } else {
            DirectionSet dirs;
            for (std::size_t i = 0; i < ctx.cfg.directions.size(); ++i)
                dirs.samples.push_back({ctx.cfg.directions[i], i, fan.dim()});
            set_report(ctx, convexity_check(F, dirs), &fan);
        }
    }
}

}  // namespace

Report run_command(const JobConfig& cfg)
{
    auto start = std::chrono::steady_clock::now();
    json doc{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"inputs", cfg.inputs}};
    json options = json::object();
    if (cfg.command.size() == 1 && cfg.command[0] == "mo")
        options["convention"] = cfg.convention;
    if (!cfg.directions.empty()) {
        json dirs = json::array();
        for (const auto& d : cfg.directions)
            dirs.push_back(vector_json(d));
        options["directions"] = dirs;
    }
    if (cfg.point)
        options["point"] = vector_json(*cfg.point);
    if (cfg.cone)
        options["cone"] = *cfg.cone;
    if (cfg.replay)
        options["replay"] = *cfg.replay;
    options["seed"] = cfg.seed;
    doc["options"] = options;

    Report rep;
    try {
        Context ctx(cfg);
        if (cfg.command.empty())
            throw UsageError("no command given");
        for (const auto& path : cfg.inputs)
            ctx.docs.push_back(parse_input(path));
        const auto& head = cfg.command[0];
        auto sub = [&]() -> const std::string& {
            if (cfg.command.size() != 2)
                throw UsageError("\"" + head + "\" needs exactly one subcommand");
            return cfg.command[1];
        };
        if (head == "fan" && sub() == "validate")
            cmd_fan_validate(ctx);
        else if (head == "mo" && cfg.command.size() == 1)
            cmd_mo(ctx);
        else if (head == "euler")
            cmd_euler(ctx, sub());
        else if (head == "theta")
            cmd_theta(ctx, sub());
        else if (head == "certify")
            cmd_certify(ctx, sub());
        else
            throw UsageError("unknown command");
        doc["verdict"] = ctx.verdict ? json(*ctx.verdict) : json();
        doc["result"] = ctx.result;
        doc["witnesses"] = ctx.witnesses;
        rep.exit_code = ctx.verdict && !*ctx.verdict ? 1 : 0;
    } catch (const Error& e) {
        json err{{"message", e.what()}};
        if (auto s = dynamic_cast<const SchemaError*>(&e)) {
            err["class"] = "schema";
            err["pointer"] = s->pointer;
        } else if (dynamic_cast<const UsageError*>(&e)) {
            err["class"] = "usage";
        } else if (dynamic_cast<const InvariantError*>(&e)) {
            err["class"] = "invariant";
        } else if (dynamic_cast<const UnsupportedError*>(&e)) {
            err["class"] = "unsupported";
        } else if (dynamic_cast<const InternalError*>(&e)) {
            err["class"] = "internal";
        } else {
            err["class"] = "input";
        }
        doc["error"] = err;
        rep.exit_code = dynamic_cast<const InternalError*>(&e) ? 3 : 2;
    }
    if (cfg.timing) {
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        doc["timing"] = json{{"total_ms", ms}, {"threads", worker_count()}};
    }
    rep.doc = std::move(doc);
    return rep;
}

std::vector<std::string> fixture_names()
{
    std::vector<std::string> out;
    for (const auto& f : fixtures::fan_fixtures())
        out.push_back("fan/" + f.first);
    for (const auto& l : fixtures::line_fixtures())
        out.push_back("line/" + l.name);
    for (const auto& c : fixtures::complex_fixtures())
        out.push_back((c.bundle && c.name != "M_L" ? "bundle/" : "complex/") + c.name);
    for (const auto& f : fixtures::fan_fixtures())
        out.push_back("random/" + f.first + "/<rank>");
    return out;
}

Document fixture_document(const std::string& name, std::uint64_t seed)
{
    auto fan_named = [](const std::string& n) -> std::optional<Fan> {
        for (const auto& f : fixtures::fan_fixtures())
            if (f.first == n)
                return f.second;
        return std::nullopt;
    };
    auto slash = name.find('/');
    auto group = name.substr(0, slash);
    auto rest = slash == std::string::npos ? std::string() : name.substr(slash + 1);
    if (group == "fan")
        if (auto f = fan_named(rest))
            return *f;
    if (group == "line")
        for (const auto& l : fixtures::line_fixtures())
            if (l.name == rest)
                return l.line;
    if (group == "bundle")
        for (const auto& b : fixtures::bundle_fixtures())
            if (b.name == rest)
                return b.bundle;
    if (group == "complex")
        for (const auto& c : fixtures::complex_fixtures())
            if (c.name == rest)
                return c.complex;
    if (group == "random") {
        auto cut = rest.rfind('/');
        if (cut != std::string::npos)
            if (auto f = fan_named(rest.substr(0, cut))) {
                std::size_t rank = 0;
                try {
                    rank = std::stoul(rest.substr(cut + 1));
                } catch (...) {
                }
                if (rank >= 1 && rank <= 3) {
                    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
                    return fixtures::random_bundle(rng, *f, rank);
                }
            }
    }
    throw InputError("unknown fixture \"" + name + "\"");
}

}  // namespace ccc::io
