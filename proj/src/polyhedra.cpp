#include "ccc/polyhedra.hpp"

#include <algorithm>
#include <map>

namespace ccc {

bool satisfies(const LinearConstraint& c, const QVector& x)
{
    Q v = dot(c.coeffs, x);
    switch (c.rel) {
    case Relation::Eq:
        return v == c.rhs;
    case Relation::Ge:
        return v >= c.rhs;
    case Relation::Gt:
        return v > c.rhs;
    }
    return false;
}

bool satisfies(const std::vector<LinearConstraint>& system, const QVector& x)
{
    return std::all_of(system.begin(), system.end(),
                       [&](const LinearConstraint& c) { return satisfies(c, x); });
}

std::optional<LinearConstraint> normalize(LinearConstraint c, bool& false_row)
{
    if (is_zero(c.coeffs)) {
        bool ok = c.rel == Relation::Eq   ? sgn(c.rhs) == 0
                  : c.rel == Relation::Ge ? sgn(c.rhs) <= 0
                                          : sgn(c.rhs) < 0;
        if (!ok)
            false_row = true;
        return std::nullopt;
    }
    clear_denominators(c.coeffs, c.rhs);
    if (c.rel == Relation::Eq) {
        for (const auto& a : c.coeffs) {
            if (sgn(a) == 0)
                continue;
            if (sgn(a) < 0) {
                for (auto& x : c.coeffs)
                    x = -x;
                c.rhs = -c.rhs;
            }
            break;
        }
    }
    return c;
}

namespace {

struct Step {
    std::size_t var = 0;
    bool substitution = false;
    LinearConstraint pivot;                 // substitution row
    std::vector<LinearConstraint> bounds;   // rows bounding var (FM step)
};

class Eliminator {
public:
    Eliminator(std::size_t dim) : dim_(dim) {}

    // Adds rows, deduplicating; returns false on a trivially false row.
    bool load(const std::vector<LinearConstraint>& rows)
    {
        for (const auto& r : rows)
            if (!insert(r))
                return false;
        return true;
    }

    bool run(const std::vector<bool>& drop, std::vector<Step>* steps)
    {
        while (true) {
            auto next = choose(drop);
            if (!next)
                return true;
            if (!eliminate(*next, steps))
                return false;
        }
    }

    std::vector<LinearConstraint> rows() const
    {
        std::vector<LinearConstraint> out;
        for (const auto& [k, v] : eqs_)
            out.push_back(v);
        for (const auto& [k, v] : ineqs_)
            out.push_back(v);
        return out;
    }

private:
    struct Choice {
        std::size_t var;
        bool by_eq;
    };

    bool insert(LinearConstraint r)
    {
        bool bad = false;
        auto n = normalize(std::move(r), bad);
        if (bad)
            return false;
        if (!n)
            return true;
        if (n->rel == Relation::Eq) {
            auto it = eqs_.find(n->coeffs);
            if (it == eqs_.end())
                eqs_.emplace(n->coeffs, *n);
            else if (it->second.rhs != n->rhs)
                return false;
            return true;
        }
        auto it = ineqs_.find(n->coeffs);
        if (it == ineqs_.end()) {
            ineqs_.emplace(n->coeffs, *n);
            return true;
        }
        auto& cur = it->second;
        if (n->rhs > cur.rhs || (n->rhs == cur.rhs && n->rel == Relation::Gt))
            cur = *n;
        return true;
    }

    std::optional<Choice> choose(const std::vector<bool>& drop) const
    {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (!drop[j])
                continue;
            for (const auto& [k, e] : eqs_)
                if (sgn(e.coeffs[j]) != 0)
                    return Choice{j, true};
        }
        std::optional<Choice> best;
        std::size_t best_cost = 0;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (!drop[j])
                continue;
            std::size_t p = 0, n = 0;
            for (const auto& [k, c] : ineqs_) {
                int s = sgn(c.coeffs[j]);
                p += s > 0;
                n += s < 0;
            }
            if (p + n == 0)
                continue;
            std::size_t cost = p * n;
            if (!best || cost < best_cost) {
                best = Choice{j, false};
                best_cost = cost;
            }
        }
        return best;
    }

    bool eliminate(const Choice& ch, std::vector<Step>* steps)
    {
        const std::size_t j = ch.var;
        std::vector<LinearConstraint> all = rows();
        eqs_.clear();
        ineqs_.clear();
        Step step;
        step.var = j;
        if (ch.by_eq) {
            step.substitution = true;
            auto pivot_it = std::find_if(all.begin(), all.end(), [&](const LinearConstraint& c) {
                return c.rel == Relation::Eq && sgn(c.coeffs[j]) != 0;
            });
            LinearConstraint pivot = *pivot_it;
            all.erase(pivot_it);
            for (auto& r : all) {
                if (sgn(r.coeffs[j]) == 0)
                    continue;
                Q f = r.coeffs[j] / pivot.coeffs[j];
                for (std::size_t i = 0; i < dim_; ++i)
                    if (sgn(pivot.coeffs[i]) != 0)
                        r.coeffs[i] -= f * pivot.coeffs[i];
                r.rhs -= f * pivot.rhs;
            }
            step.pivot = pivot;
            if (steps)
                steps->push_back(std::move(step));
            return load(all);
        }
        std::vector<LinearConstraint> pos, neg, rest;
        for (auto& r : all) {
            int s = sgn(r.coeffs[j]);
            (s > 0 ? pos : s < 0 ? neg : rest).push_back(r);
        }
        for (const auto& p : pos)
            for (const auto& n : neg) {
                LinearConstraint c;
                Q mp = -n.coeffs[j];
                Q mn = p.coeffs[j];
                c.coeffs.resize(dim_);
                for (std::size_t i = 0; i < dim_; ++i)
                    c.coeffs[i] = mp * p.coeffs[i] + mn * n.coeffs[i];
                c.coeffs[j] = 0;
                c.rhs = mp * p.rhs + mn * n.rhs;
                c.rel = (p.rel == Relation::Gt || n.rel == Relation::Gt) ? Relation::Gt : Relation::Ge;
                rest.push_back(std::move(c));
            }
        step.bounds = pos;
        step.bounds.insert(step.bounds.end(), neg.begin(), neg.end());
        if (steps)
            steps->push_back(std::move(step));
        return load(rest);
    }

    std::size_t dim_;
    std::map<QVector, LinearConstraint> eqs_;
    std::map<QVector, LinearConstraint> ineqs_;
};

Q residual(const LinearConstraint& c, const QVector& x, std::size_t j)
{
    // (rhs - sum_{i != j} a_i x_i) / a_j
    Q acc = c.rhs;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (i != j && sgn(c.coeffs[i]) != 0)
            acc -= c.coeffs[i] * x[i];
    return acc / c.coeffs[j];
}

}  // namespace

std::optional<QVector> find_point(const std::vector<LinearConstraint>& system, std::size_t dim)
{
    for (const auto& c : system)
        if (c.coeffs.size() != dim)
            throw InputError("constraint dimension mismatch");
    Eliminator el(dim);
    if (!el.load(system))
        return std::nullopt;
    std::vector<Step> steps;
    if (!el.run(std::vector<bool>(dim, true), &steps))
        return std::nullopt;
    QVector x(dim);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const auto j = it->var;
        if (it->substitution) {
            x[j] = residual(it->pivot, x, j);
            continue;
        }
        std::optional<Q> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (const auto& b : it->bounds) {
            Q v = residual(b, x, j);
            bool strict = b.rel == Relation::Gt;
            if (sgn(b.coeffs[j]) > 0) {
                if (!lo || v > *lo || (v == *lo && strict)) {
                    lo = v;
                    lo_strict = strict;
                }
            } else {
                if (!hi || v < *hi || (v == *hi && strict)) {
                    hi = v;
                    hi_strict = strict;
                }
            }
        }
        if (lo && hi) {
            if (*lo == *hi) {
                if (lo_strict || hi_strict)
                    throw InternalError("Fourier-Motzkin back substitution hit an empty range");
                x[j] = *lo;
            } else {
                x[j] = (*lo + *hi) / 2;
            }
        } else if (lo) {
            x[j] = *lo + 1;
        } else if (hi) {
            x[j] = *hi - 1;
        } else {
            x[j] = 0;
        }
    }
    if (!satisfies(system, x))
        throw InternalError("Fourier-Motzkin witness fails the system");
    return x;
}

bool is_feasible(const std::vector<LinearConstraint>& system, std::size_t dim)
{
    Eliminator el(dim);
    if (!el.load(system))
        return false;
    return el.run(std::vector<bool>(dim, true), nullptr);
}

Projection project(const std::vector<LinearConstraint>& system, std::size_t dim,
                   const std::vector<bool>& drop)
{
    if (drop.size() != dim)
        throw InputError("projection mask length mismatch");
    Projection out;
    Eliminator el(dim);
    if (!el.load(system) || !el.run(drop, nullptr)) {
        out.feasible = false;
        return out;
    }
    out.constraints = el.rows();
    // Rows that survive only in kept variables; all-kept rows are already feasible
    // jointly iff the original was, so run a final check.
    if (!is_feasible(out.constraints, dim))
        out.feasible = false;
    return out;
}

std::vector<LinearConstraint> remove_redundant(std::vector<LinearConstraint> system, std::size_t dim)
{
    for (std::size_t i = 0; i < system.size();) {
        if (system[i].rel == Relation::Eq) {
            ++i;
            continue;
        }
        std::vector<LinearConstraint> test;
        for (std::size_t k = 0; k < system.size(); ++k)
            if (k != i)
                test.push_back(system[k]);
        // Row i is redundant iff the others together with its negation are infeasible.
        LinearConstraint neg;
        neg.coeffs = negate(system[i].coeffs);
        neg.rhs = -system[i].rhs;
        neg.rel = system[i].rel == Relation::Gt ? Relation::Ge : Relation::Gt;
        test.push_back(neg);
        if (!is_feasible(test, dim))
            system.erase(system.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return system;
}

}  // namespace ccc
