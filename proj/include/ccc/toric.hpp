#pragma once

// Toric input data: smooth fans, equivariant line bundles given by Cartier
// characters, and equivariant vector bundles given by Klyachko filtrations.
//
// Conventions.  Filtrations are increasing: E^a_{<=k} grows with k.  A line
// bundle with characters m_sigma has jump <a, m_sigma> on every ray a of
// sigma, its section polytope is the intersection of m_sigma + sigma^dual, and
// O(D_a) has jump -1 on a and 0 elsewhere.

#include "ccc/euler.hpp"
#include "ccc/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace ccc {

using RaySet = std::vector<std::size_t>;  // sorted ray indices

class Fan {
public:
    Fan() = default;
    /// `maximal` lists the maximal cones; faces are implied.  Throws InputError on
    /// malformed data and InvariantError when two cones overlap outside a common face.
    Fan(std::size_t dim, std::vector<LatticePoint> rays, std::vector<RaySet> maximal);

    std::size_t dim() const { return dim_; }
    const std::vector<LatticePoint>& rays() const { return rays_; }
    const std::vector<RaySet>& maximal_cones() const { return maximal_; }
    /// Every cone, the zero cone first, ordered by dimension then lexicographically.
    const std::vector<RaySet>& cones() const { return cones_; }

    std::optional<std::size_t> find(const RaySet& rays) const;
    std::size_t index_of(const RaySet& rays) const;  // throws when absent
    std::size_t cone_dim(std::size_t cone) const { return cones_[cone].size(); }
    Cone cone(std::size_t cone) const;
    std::vector<std::size_t> cones_of_dim(std::size_t d) const;
    /// Index into maximal_cones() of some maximal cone containing the cone.
    std::size_t maximal_containing(std::size_t cone) const;
    /// Is cone a a face of cone b?
    bool is_face(std::size_t a, std::size_t b) const;
    /// Rays of the cone as lattice points, in sorted ray order.
    std::vector<LatticePoint> ray_vectors(std::size_t cone) const;

    friend bool operator==(const Fan& a, const Fan& b)
    {
        return a.dim_ == b.dim_ && a.rays_ == b.rays_ && a.maximal_ == b.maximal_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<LatticePoint> rays_;
    std::vector<RaySet> maximal_;
    std::vector<RaySet> cones_;
    std::map<RaySet, std::size_t> index_;
};

struct FanReport {
    bool smooth = false;
    bool complete = false;
    bool simplicial = false;
    std::optional<RaySet> singular_cone;  // a cone with maximal-minor gcd != 1
    std::optional<QVector> uncovered;     // a direction outside the support
};

FanReport fan_validate(const Fan& fan);
/// The fan of a single cone and its faces, with rays renumbered in order.
Fan cone_fan(const Fan& fan, std::size_t cone);
/// All cones of the fan as geometric cones (same order as fan.cones()).
std::vector<Cone> fan_cones(const Fan& fan);

/// Equivariant line bundle: one character per maximal cone.
struct CartierData {
    Fan fan;
    std::vector<LatticePoint> m;  // indexed like fan.maximal_cones()

    /// Character on any cone (from a maximal cone containing it).
    LatticePoint character(std::size_t cone) const;
};

/// Checks shapes and compatibility on overlaps; throws InvariantError naming the shared face.
void validate_cartier(const CartierData& L);
/// Line bundle with the given jump on every ray (the support-function values).
CartierData line_bundle_from_jumps(const Fan& fan, const std::vector<std::int64_t>& jumps);

struct FiltrationStep {
    std::int64_t jump = 0;
    Subspace basis;  // E_{<=jump}
};

/// Increasing filtration of Q^r: dim E_{<=k} is that of the last step with jump <= k.
struct Filtration {
    std::vector<FiltrationStep> steps;

    std::size_t dim_at(std::int64_t k, std::size_t rank) const;
    Subspace space_at(std::int64_t k, std::size_t rank) const;
    std::vector<std::int64_t> jumps() const;
};

class KlyachkoBundle {
public:
    KlyachkoBundle() = default;
    /// Normalises every filtration (sorted, strictly growing, ends at Q^r).
    KlyachkoBundle(Fan fan, std::size_t rank, std::vector<Filtration> filtrations);

    const Fan& fan() const { return fan_; }
    std::size_t rank() const { return rank_; }
    const std::vector<Filtration>& filtrations() const { return filtrations_; }

private:
    Fan fan_;
    std::size_t rank_ = 0;
    std::vector<Filtration> filtrations_;
};

/// Adapted basis of one cone: E^a_{<=k} is spanned by the basis vectors it contains
/// for every ray a of the cone.
struct ConeSplitting {
    std::vector<QVector> basis;
    std::vector<std::vector<std::int64_t>> jumps;  // per basis vector, per ray of the cone
    std::vector<LatticePoint> weights;             // solves <a_i, m> = jump_i
};

struct BundleSplitting {
    std::vector<ConeSplitting> cones;  // indexed like fan.cones()
};

/// Condition (C) for every cone; throws InvariantError naming the first failing cone.
BundleSplitting klyachko_validate(const KlyachkoBundle& b);
/// Splitting of one cone, or nullopt when condition (C) fails there.
std::optional<ConeSplitting> split_cone(const KlyachkoBundle& b, std::size_t cone);
/// Exhaustive search for a simultaneous adapted basis among vectors of small
/// height; usable as an oracle at rank <= 3.
bool condition_c_bruteforce(const KlyachkoBundle& b, std::size_t cone, int height);

std::vector<LatticePoint> weight_multiset(const KlyachkoBundle& b, std::size_t cone);
std::vector<LatticePoint> weight_multiset(const BundleSplitting& s, std::size_t cone);

ConstructibleFunction morelli_eq1(const KlyachkoBundle& b);
KlyachkoBundle cartier_to_klyachko(const CartierData& L);
KlyachkoBundle frobenius_pullback(const KlyachkoBundle& b, std::int64_t n);
KlyachkoBundle tensor_line(const KlyachkoBundle& b, const CartierData& L);
KlyachkoBundle direct_sum(const KlyachkoBundle& a, const KlyachkoBundle& b);
CartierData tensor(const CartierData& a, const CartierData& b);
/// Restriction to the affine chart of one cone.
KlyachkoBundle restrict_to_cone(const KlyachkoBundle& b, std::size_t cone);

/// Lattice points of the intersection of m_sigma + sigma^dual over maximal sigma.
std::vector<LatticePoint> polytope_sections(const CartierData& L);
/// Lattice points of a closed bounded system; throws UnsupportedError when unbounded.
std::vector<LatticePoint> lattice_points(const std::vector<LinearConstraint>& closed, std::size_t dim);

}  // namespace ccc
