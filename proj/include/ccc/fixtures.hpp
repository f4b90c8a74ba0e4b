#pragma once

// Standard fans and bundles used by the tests, the acceptance suite and the CLI.

#include "ccc/theta.hpp"

#include <random>
#include <string>

namespace ccc::fixtures {

Fan p1();
Fan p2();
Fan p1xp1();
Fan f1();  // rays (1,0), (0,1), (-1,1), (0,-1)
Fan p3();
Fan affine(std::size_t n);  // the positive orthant cone of A^n

CartierData o_p1(std::int64_t d);
CartierData o_p2(std::int64_t d);
CartierData o_p1xp1(std::int64_t a, std::int64_t b);
/// O(sum a_i D_i) on F1, divisor coefficients in ray order.
CartierData f1_line(const std::vector<std::int64_t>& a);

KlyachkoBundle trivial(const Fan& fan, std::size_t rank);
KlyachkoBundle tangent_p2();
KlyachkoBundle cotangent_p2();
/// Fr_n^* T_{P2} (x) O(-m).
KlyachkoBundle fujino(std::int64_t n, std::int64_t m);
/// Rank 2 on P3: three distinct lines at jump 0 on the rays of cone {0,1,2}.
KlyachkoBundle condition_c_failure();
/// Rank 2 on P2 with distinct lines on the two rays of cone {0,1}; satisfies (C).
KlyachkoBundle two_lines_p2();

/// Random filtrations with jumps in [-3,3] and small integer subspaces,
/// rejection-sampled through klyachko_validate.
KlyachkoBundle random_bundle(std::mt19937& rng, const Fan& fan, std::size_t rank);

struct NamedLine {
    std::string name;
    CartierData line;
};
struct NamedBundle {
    std::string name;
    KlyachkoBundle bundle;
};

std::vector<NamedLine> line_fixtures();
/// Line bundles (as rank 1 data) plus the higher-rank fixtures.
std::vector<NamedBundle> bundle_fixtures();
std::vector<std::pair<std::string, Fan>> fan_fixtures();

struct NamedComplex {
    std::string name;
    ThetaComplex complex;
    bool bundle = false;  // quasi-isomorphic to a vector bundle
};

/// O(-D) -> O on P1, D the fixed point of the first top cone.
ThetaComplex point_resolution();
/// M_{O(3,2)} (x) O(1,1) on P1xP1 as a mapping cone.
ThetaComplex kernel_bundle_example();
/// Cech complexes of every bundle fixture, M_L, and complexes that are not bundles.
std::vector<NamedComplex> complex_fixtures();

}  // namespace ccc::fixtures
