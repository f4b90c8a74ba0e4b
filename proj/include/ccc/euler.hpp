#pragma once

// Euler calculus of polyhedral constructible functions.
//
// A ConstructibleFunction is a finite sum  f = sum_i w_i * 1_{C_i}  of
// indicators of relatively open cells with integer weights.  Integration
// against the compactly supported Euler characteristic is then
// sum_i w_i (-1)^{dim C_i}.  Every other operation (pushforward, Fourier-Sato,
// microlocalisation) is evaluated cell by cell on an arrangement and
// re-expressed in this form.

#include "ccc/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ccc {

using Weight = std::int64_t;

struct Term {
    Cell cell;
    Weight weight = 0;
};

class ConstructibleFunction {
public:
    explicit ConstructibleFunction(std::size_t ambient_dim = 0) : ambient_(ambient_dim) {}

    std::size_t ambient_dim() const { return ambient_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Adds w * 1_cell (zero weights are skipped).
    void add(Cell cell, Weight w);
    void add(const ConstructibleFunction& g, Weight scale = 1);
    /// True when every cell is cut out by homogeneous constraints.
    bool is_conical() const;

    friend ConstructibleFunction operator+(ConstructibleFunction a, const ConstructibleFunction& b);
    friend ConstructibleFunction operator-(ConstructibleFunction a, const ConstructibleFunction& b);
    friend ConstructibleFunction operator*(Weight k, const ConstructibleFunction& f);

private:
    std::size_t ambient_;
    std::vector<Term> terms_;
};

enum class IndicatorKind { Standard, Costandard };

/// Standard: the literal indicator of the closure.  Costandard: (-1)^dim on the relative interior.
ConstructibleFunction cf_indicator(IndicatorKind kind, const Cell& p);
ConstructibleFunction cf_constant(std::size_t ambient_dim, Weight c);

Weight cf_evaluate(const ConstructibleFunction& f, const QVector& x);
Weight cf_integrate(const ConstructibleFunction& f);

/// (u^* f)(x) = f(u x); u maps the new ambient space into f's ambient space.
ConstructibleFunction cf_pullback(const QMatrix& u, const ConstructibleFunction& f);
/// (u_! f)(y) = integral of f over u^{-1}(y).
ConstructibleFunction cf_pushforward(const QMatrix& u, const ConstructibleFunction& f);
/// External product on the product space.
ConstructibleFunction cf_product(const ConstructibleFunction& f, const ConstructibleFunction& g);
/// Pushforward of f x g along addition.
ConstructibleFunction cf_convolve(const ConstructibleFunction& f, const ConstructibleFunction& g);
/// x -> f(x / k).
ConstructibleFunction cf_scale(const ConstructibleFunction& f, Weight k);
/// x -> f(x - v).
ConstructibleFunction cf_translate(const ConstructibleFunction& f, const QVector& v);
/// x -> f(-x).
ConstructibleFunction cf_antipode(const ConstructibleFunction& f);

/// Values on the common refinement of f's cells, zero cells dropped.
ConstructibleFunction cf_simplify(const ConstructibleFunction& f);
/// A point where f and g differ, or nullopt when they are equal as functions.
std::optional<QVector> cf_difference_witness(const ConstructibleFunction& f,
                                             const ConstructibleFunction& g);
bool cf_equal(const ConstructibleFunction& f, const ConstructibleFunction& g);

/// Germ of f at x, moved to the origin (a conical function).
ConstructibleFunction cf_specialize(const ConstructibleFunction& f, const QVector& x);
/// FT(f)(xi) = integral of f over {<xi, v> <= 1}; FT(f)(0) = integral of f.
ConstructibleFunction cf_fourier_sato(const ConstructibleFunction& f);
ConstructibleFunction cf_microlocalize(const ConstructibleFunction& f, const QVector& x);

struct CovectorCell {
    Cell cell;
    Weight value = 0;
};

struct SSEntry {
    Cell base;
    std::vector<CovectorCell> covectors;
};

/// Non-closed core of the singular support: per base cell, the covector cells
/// where the microlocal value is nonzero.
struct SingularSupportCore {
    std::size_t ambient_dim = 0;
    std::vector<SSEntry> entries;
};

SingularSupportCore cf_singular_support(const ConstructibleFunction& f);
/// Is (x, xi) a point of the core?
bool ss_core_contains(const SingularSupportCore& core, const QVector& x, const QVector& xi);

struct LambdaCheck {
    bool holds = true;
    std::optional<Cell> base;      // violating base cell
    std::optional<Cell> covector;  // violating covector cell
    Weight value = 0;
};

/// SS(f) inside the union over the given cones tau of (tau^perp + M) x (-tau).
LambdaCheck ss_subset_lambda(const ConstructibleFunction& f, const std::vector<Cone>& cones);
LambdaCheck ss_subset_lambda(const SingularSupportCore& core, const std::vector<Cone>& cones);

}  // namespace ccc
