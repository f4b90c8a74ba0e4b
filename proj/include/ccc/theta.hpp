#pragma once

// Theta-complexes: bounded complexes of the sheaves Theta(sigma, chi) (the
// constant sheaf on the open translate (chi + sigma^dual)^o, extended by zero)
// with scalar differentials.  Degrees are normalised so that the Cech complex of
// a vector bundle lives in degrees 0..n with top cones in degree 0.

#include "ccc/toric.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccc {

struct ThetaGenerator {
    std::size_t cone = 0;  // index into fan.cones()
    LatticePoint base;     // chi, a representative modulo the annihilator of the cone
    int degree = 0;
    std::int64_t tag = 0;  // opaque label (fiber basis index for Cech complexes)
};

/// Nonzero matrix entry: target gets value * source.
struct ThetaEntry {
    std::size_t target = 0;
    std::size_t source = 0;
    Q value;
};

/// (sigma, chi) <= (tau, psi): tau is a face of sigma and chi - psi lies in tau^dual.
bool theta_leq(const Fan& fan, const ThetaGenerator& s, const ThetaGenerator& t);

class ThetaComplex {
public:
    ThetaComplex() = default;
    /// Validates degrees, the order constraint on every entry, and d o d = 0.
    ThetaComplex(Fan fan, std::vector<ThetaGenerator> generators, std::vector<ThetaEntry> differential);

    const Fan& fan() const { return fan_; }
    const std::vector<ThetaGenerator>& generators() const { return gens_; }
    const std::vector<ThetaEntry>& differential() const { return d_; }
    int min_degree() const;
    int max_degree() const;

private:
    Fan fan_;
    std::vector<ThetaGenerator> gens_;
    std::vector<ThetaEntry> d_;
};

/// Finite complex of Q-vector spaces; d[k] maps degree min_degree+k to the next degree.
struct VectComplex {
    int min_degree = 0;
    std::vector<std::size_t> dims;
    std::vector<QMatrix> d;
    std::vector<std::vector<std::size_t>> labels;  // generator index per basis element, when known

    /// Betti numbers indexed like dims.
    std::vector<std::size_t> betti() const;
    std::size_t betti_at(int degree) const;
    /// Betti numbers as a map from degree, omitting zeros.
    std::map<int, std::size_t> betti_map() const;
    bool is_zero_cohomology() const;
};

/// Rank of the map on H^degree induced by the coordinate projection a -> b, where
/// b's generators are a subset of a's and both come from the same complex.
std::size_t projection_rank(const VectComplex& a, const VectComplex& b, int degree);

/// The subcomplex (or subquotient) spanned by the kept generators.  Throws
/// InternalError when the restricted matrices do not square to zero.
VectComplex restrict_complex(const ThetaComplex& F, const std::vector<bool>& keep);

struct ThetaMap {
    ThetaComplex source;
    ThetaComplex target;
    std::vector<ThetaEntry> entries;  // target index, source index, value; same degree
};

/// Checks degrees, the order constraint and the chain-map identity.
void validate_map(const ThetaMap& f);

ThetaComplex cech_complex(const KlyachkoBundle& b);
/// Replaces every Theta(sigma, chi) by Theta(sigma cap tau, chi): the complex of the restriction to U_tau.
ThetaComplex restrict_to_chart(const ThetaComplex& F, std::size_t tau);
/// F[s]: degrees drop by s, differential scaled by (-1)^s.
ThetaComplex shift(const ThetaComplex& F, int s);
/// Every base moved by v (a change of equivariant structure by the character v).
ThetaComplex translate(const ThetaComplex& F, const LatticePoint& v);
/// The subcomplex of generators whose closed support chi + sigma^dual contains x.
ThetaComplex prune_to_point(const ThetaComplex& F, const QVector& x);
ThetaComplex theta_sum(const std::vector<ThetaComplex>& parts);
/// Standard mapping cone: C^k = A^{k+1} + B^k, d = [[-d_A, 0], [f, d_B]].
ThetaComplex theta_cone(const ThetaMap& f);

/// kappa(L_source) -> kappa(L_target) with every allowed component 1; requires
/// source m_sigma - target m_sigma in sigma^dual for every maximal sigma.
ThetaMap line_bundle_morphism(const CartierData& source, const CartierData& target);
/// The evaluation map kappa(O(u)) -> kappa(L) for a section weight u of L.
ThetaMap line_bundle_map(const LatticePoint& u, const CartierData& L);
/// Sum of maps with a common target: (+) A_i -> B.
ThetaMap theta_map_sum(const std::vector<ThetaMap>& maps);
/// M_L (x) L' realised as cone((+)_u kappa(O(u) (x) L') -> kappa(L (x) L'))[-1].
ThetaComplex kernel_bundle_complex(const CartierData& L, const CartierData& Lprime);
/// Koszul resolution of the skyscraper at the fixed point of a smooth top cone, weight chi.
ThetaComplex fixed_point_complex(const Fan& fan, std::size_t top_cone, const LatticePoint& chi);

/// R Gamma_c: one basis element per generator, the differential verbatim.
VectComplex compactly_supported_sections(const ThetaComplex& F);

/// Infimum of <xi, -> over (chi + sigma^dual)^o: <xi, chi> when xi is in sigma, otherwise none (-infinity).
std::optional<Q> morse_weight(const ThetaComplex& F, std::size_t generator, const QVector& xi);

struct MorseLevel {
    std::optional<Q> level;  // generators with weight <= level; nullopt = only the -infinity part
    std::vector<std::size_t> betti;
    int min_degree = 0;
    bool h0_injective = true;  // H^0 of the previous level injects into H^0 of this one
    std::size_t h0 = 0;
};

struct MorseReport {
    QVector xi;
    std::vector<Q> jumps;
    std::vector<MorseLevel> levels;  // the -infinity level, then one per jump (the last is everything)
    bool strict = true;              // every level concentrated in degree 0 with injective H^0 steps
};

MorseReport morse_report(const ThetaComplex& F, const QVector& xi);
/// Sublevel complex {weight < t}.
VectComplex morse_level(const ThetaComplex& F, const QVector& xi, const Q& t);

/// (jump, dimension) steps of the filtration read off from Morse levels along the ray.
std::vector<std::pair<std::int64_t, std::size_t>> klyachko_extract(const ThetaComplex& F, std::size_t ray);
std::vector<std::pair<std::int64_t, std::size_t>> filtration_profile(const Filtration& f);

/// Generators kept by the microlocal stalk at x on -relint(sigma).
std::vector<bool> microlocal_support(const ThetaComplex& F, const QVector& x, std::size_t sigma);
VectComplex microlocal_complex(const ThetaComplex& F, const QVector& x, std::size_t sigma);

struct MuRestriction {
    std::size_t from = 0, to = 0;  // cone indices, from a face of to
    std::vector<QMatrix> blocks;   // one coordinate projection per degree
};

struct MuSheaf {
    QVector x;
    std::vector<VectComplex> stalks;  // indexed like fan.cones()
    std::vector<MuRestriction> restrictions;
};

/// Stalks per cone and coordinate projections along face incidences; asserts that
/// the projections are chain maps and that triangles commute.
MuSheaf mu_sheaf(const ThetaComplex& F, const QVector& x);

/// Nonzero cohomology of microlocal_complex(F, x, sigma) over lattice x.
/// Throws UnsupportedError when infinitely many weights carry cohomology.
std::map<LatticePoint, std::map<int, std::size_t>> cohomology_table(const ThetaComplex& F, std::size_t sigma);

/// Sum over generators of (-1)^degree times 1 on (chi + sigma^dual)^o.
ConstructibleFunction stalk_euler_function(const ThetaComplex& F);
/// Sum over generators of (-1)^degree times 1 on the closed chi + sigma^dual.
ConstructibleFunction costalk_euler_function(const ThetaComplex& F);

}  // namespace ccc
