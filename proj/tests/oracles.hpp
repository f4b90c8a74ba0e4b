#pragma once

// Independent checks shared by the unit and acceptance suites.

#include "ccc/theta.hpp"

#include <algorithm>

namespace oracle {

using namespace ccc;

/// Reads E^rho_{<=t} back out of the Cech Theta-complex: degree-0 cycles supported
/// on generators of Morse weight <= t along rho, identified with E through the
/// adapted basis of a top cone that does not contain rho (its generators have
/// weight -infinity, and compatibility across facets makes the map injective).
inline Subspace recovered_step(const KlyachkoBundle& b, const ThetaComplex& F, const BundleSplitting& split,
                               std::size_t ray, std::int64_t t)
{
    const Fan& fan = b.fan();
    const std::size_t r = b.rank();
    const std::size_t n = fan.dim();
    std::size_t ref = fan.cones().size();
    for (std::size_t c = 0; c < fan.cones().size(); ++c) {
        const auto& rays = fan.cones()[c];
        if (rays.size() == n && std::find(rays.begin(), rays.end(), ray) == rays.end()) {
            ref = c;
            break;
        }
    }
    if (ref == fan.cones().size())
        throw InputError("every top cone contains the ray");
    QVector xi = to_qvector(fan.rays()[ray]);
    const auto& gens = F.generators();
    std::vector<std::size_t> kept, column(gens.size(), gens.size());
    std::vector<std::size_t> row(gens.size(), gens.size());
    std::size_t rows = 0;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        if (gens[g].degree == 1)
            row[g] = rows++;
        if (gens[g].degree != 0)
            continue;
        auto w = morse_weight(F, g, xi);
        if (!w || *w <= Q(static_cast<long>(t))) {
            column[g] = kept.size();
            kept.push_back(g);
        }
    }
    QMatrix d(rows, kept.size());
    for (const auto& e : F.differential())
        if (column[e.source] < kept.size() && row[e.target] < rows)
            d(row[e.target], column[e.source]) += e.value;
    Subspace out;
    for (const auto& z : nullspace(d)) {
        QVector v(r);
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const auto& g = gens[kept[k]];
            if (g.cone == ref)
                v = add(v, scale(split.cones[ref].basis[static_cast<std::size_t>(g.tag)], z[k]));
        }
        out.push_back(v);
    }
    return span_basis(out, r);
}

/// Every step of every filtration, and the level just below it, read back exactly.
inline bool filtrations_recovered(const KlyachkoBundle& b)
{
    auto F = cech_complex(b);
    auto split = klyachko_validate(b);
    const std::size_t r = b.rank();
    for (std::size_t a = 0; a < b.filtrations().size(); ++a)
        for (const auto& step : b.filtrations()[a].steps)
            for (auto t : {step.jump - 1, step.jump}) {
                auto want = b.filtrations()[a].space_at(t, r);
                auto got = recovered_step(b, F, split, a, t);
                if (got.size() != want.size() || !is_subspace_of(got, want, r))
                    return false;
            }
    return true;
}

}  // namespace oracle
