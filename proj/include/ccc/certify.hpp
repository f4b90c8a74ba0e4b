#pragma once

// Finite decision procedures on Theta-complexes: convexity, vector-bundle and
// nef certification, membership in the image of the Morelli map, and a
// comparison of weight cohomology against an independent coherent Cech complex.
//
// Every negative verdict carries witnesses.  A witness names one sub-check
// (a direction, a lattice point on a cone, a pair of cones) that can be re-run
// on its own with witness_holds.

#include "ccc/fixtures.hpp"
#include "ccc/theta.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccc {

enum class WitnessKind {
    Direction,         // a Morse filtration that is not concentrated or not injective
    MicrolocalDegree,  // a microlocal stalk with cohomology outside degree 0
    Surjectivity,      // H^0 of a codimension-one stalk does not surject onto a top stalk
    MuNotConstant,     // mu_x(f) varies on the interior of a cone of -fan
    OffLattice,        // mu_x(f) is nonzero on -tau away from tau^perp + M
    OutsideFan,        // mu_x(f) is nonzero outside the support of -fan
    SingularSupport,   // a covector of SS(f) outside Lambda
    CurveDegree,       // a negative splitting degree on an invariant curve
    Cohomology,        // table and oracle disagree at a weight
};

std::string to_string(WitnessKind k);
std::optional<WitnessKind> witness_kind_from_string(const std::string& s);

struct Witness {
    WitnessKind kind = WitnessKind::Direction;
    std::string condition;            // the failed condition, in words
    std::optional<QVector> point;     // x in M
    std::optional<QVector> direction;  // xi in N
    std::vector<std::size_t> cones;   // indices into fan.cones()
    std::map<int, std::size_t> betti;  // offending Betti numbers
    std::map<int, std::size_t> expected;
    std::optional<Q> level;           // Morse level for Direction witnesses
    std::size_t rank = 0;             // induced rank for Surjectivity witnesses
    std::int64_t value = 0;           // function value or splitting degree

    friend bool operator<(const Witness& a, const Witness& b);
};

struct CertReport {
    bool verdict = true;
    std::vector<Witness> witnesses;  // sorted

    void fail(Witness w);
    void merge(const CertReport& other);
    void finish();  // sorts and dedupes witnesses
};

struct DirectionSample {
    QVector xi;
    std::size_t cell = 0;  // index of the sampled cell in the sufficiency arrangement
    std::size_t cell_dim = 0;
};

struct DirectionSet {
    std::vector<DirectionSample> samples;
};

/// Samples every cell of the central arrangement in N generated by the cone
/// walls and the hyperplanes (chi_g - chi_h)^perp.  On each cell the order of the
/// Morse weights and the cones containing xi are fixed, so the sequence of
/// sublevel complexes is the same for every xi in the cell.
DirectionSet sufficiency_directions(const ThetaComplex& F);

CertReport convexity_check(const ThetaComplex& F);
CertReport convexity_check(const ThetaComplex& F, const DirectionSet& dirs);

/// Degree-0 concentration of every microlocal stalk on the interior of a top cone.
CertReport is_vector_bundle(const ThetaComplex& F);
/// Degree-0 concentration on top and codimension-one cones, and surjectivity of
/// H^0 along every codimension-one to top restriction.
CertReport is_nef(const ThetaComplex& F);

/// Re-runs the single sub-check a witness names; false confirms the failure.
bool witness_holds(const ThetaComplex& F, const Witness& w);
bool witness_holds(const ConstructibleFunction& f, const Fan& fan, const Witness& w);

struct CurveSplitting {
    std::size_t cone = 0;              // codimension-one cone
    std::size_t first = 0, second = 0;  // adjacent top cones
    std::vector<std::int64_t> degrees;  // sorted splitting degrees of the restriction
};

/// Splitting type of the bundle on every invariant curve, read off from the
/// relative position of the two transverse filtrations on each graded piece of
/// the curve's own filtrations.  Does not use Theta-complexes.
std::vector<CurveSplitting> curve_splittings(const KlyachkoBundle& b);
bool nef_oracle_curves(const KlyachkoBundle& b);

/// mu_x(f) constant on the interior of every cone of -fan, vanishing off the
/// fan, and supported over tau^perp + M on -tau.
CertReport mu_constancy_check(const ConstructibleFunction& f, const Fan& fan);
/// SS(f) inside Lambda of the fan.
CertReport lambda_check(const ConstructibleFunction& f, const Fan& fan);
/// Both of the above.
CertReport morelli_image_check(const ConstructibleFunction& f, const Fan& fan);

/// Weight-x cohomology of the bundle from the Cech complex of the cover by
/// top-cone charts, built from intersections of filtration pieces.
std::map<int, std::size_t> klyachko_cech_cohomology(const KlyachkoBundle& b, const LatticePoint& x);
/// cohomology_table of the Cech Theta-complex at the zero cone against
/// klyachko_cech_cohomology at every weight where cohomology can occur.
CertReport ccc_consistency(const KlyachkoBundle& b);

struct FujinoHit {
    std::int64_t n = 0, m = 0;
    std::size_t h1_weights = 0;  // lattice weights carrying H^1
    std::size_t h1_total = 0;    // total dimension of H^1
};

/// First (n, m), n ascending then m ascending, for which Fr_n^* T_{P2} (x) O(-m)
/// certifies nef while its weight table has H^1.
std::optional<FujinoHit> fujino_search(std::int64_t n_max, std::int64_t m_min, std::int64_t m_max);

/// Points where mu_x is rank one on the zero cone and on exactly two rays, zero
/// elsewhere, with isomorphic restrictions from the zero cone: the constant sheaf
/// on a union of two rays.
std::vector<QVector> two_ray_points(const ThetaComplex& F);

}  // namespace ccc
