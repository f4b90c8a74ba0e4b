#include "ccc/linalg.hpp"

#include <numeric>
#include <utility>

namespace ccc {

RowEchelon rref(QMatrix m)
{
    RowEchelon out;
    std::size_t lead_row = 0;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t pivot = lead_row;
        while (pivot < m.rows() && sgn(m(pivot, c)) == 0)
            ++pivot;
        if (pivot == m.rows())
            continue;
        if (pivot != lead_row)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(pivot, j), m(lead_row, j));
        Q inv = 1 / m(lead_row, c);
        for (std::size_t j = c; j < m.cols(); ++j)
            m(lead_row, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || sgn(m(r, c)) == 0)
                continue;
            Q f = m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (sgn(m(lead_row, j)) != 0)
                    m(r, j) -= f * m(lead_row, j);
        }
        out.pivots.push_back(c);
        ++lead_row;
    }
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

std::size_t rank(const std::vector<QVector>& vectors, std::size_t dim)
{
    if (vectors.empty())
        return 0;
    return rank(QMatrix::from_rows(vectors, dim));
}

std::vector<QVector> nullspace(const QMatrix& m)
{
    auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        QVector v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[e.pivots[r]] = -e.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& b)
{
    if (b.size() != m.rows())
        throw InputError("right-hand side dimension mismatch");
    QMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    auto e = rref(aug);
    QVector x(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == m.cols())
            return std::nullopt;
        x[e.pivots[r]] = e.reduced(r, m.cols());
    }
    return x;
}

Subspace span_basis(const Subspace& vectors, std::size_t dim)
{
    if (vectors.empty())
        return {};
    auto e = rref(QMatrix::from_rows(vectors, dim));
    Subspace out;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        out.push_back(e.reduced.row(r));
    return out;
}

bool in_span(const Subspace& space, const QVector& v, std::size_t dim)
{
    if (is_zero(v))
        return true;
    Subspace s = space;
    auto before = rank(s, dim);
    s.push_back(v);
    return rank(s, dim) == before;
}

bool is_subspace_of(const Subspace& a, const Subspace& b, std::size_t dim)
{
    Subspace s = b;
    auto before = rank(s, dim);
    s.insert(s.end(), a.begin(), a.end());
    return rank(s, dim) == before;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, std::size_t dim)
{
    Subspace s = a;
    s.insert(s.end(), b.begin(), b.end());
    return span_basis(s, dim);
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b, std::size_t dim)
{
    auto ba = span_basis(a, dim);
    auto bb = span_basis(b, dim);
    if (ba.empty() || bb.empty())
        return {};
    // Solve sum_i s_i a_i - sum_j t_j b_j = 0.
    QMatrix m(dim, ba.size() + bb.size());
    for (std::size_t i = 0; i < ba.size(); ++i)
        for (std::size_t r = 0; r < dim; ++r)
            m(r, i) = ba[i][r];
    for (std::size_t j = 0; j < bb.size(); ++j)
        for (std::size_t r = 0; r < dim; ++r)
            m(r, ba.size() + j) = -bb[j][r];
    Subspace out;
    for (const auto& k : nullspace(m)) {
        QVector v(dim);
        for (std::size_t i = 0; i < ba.size(); ++i)
            if (sgn(k[i]) != 0)
                v = add(v, scale(ba[i], k[i]));
        out.push_back(std::move(v));
    }
    return span_basis(out, dim);
}

Subspace complement_in(const Subspace& inner, const Subspace& ambient, std::size_t dim)
{
    Subspace acc = span_basis(inner, dim);
    std::size_t r = acc.size();
    Subspace out;
    for (const auto& v : ambient) {
        acc.push_back(v);
        auto nr = rank(acc, dim);
        if (nr > r) {
            out.push_back(v);
            r = nr;
        } else {
            acc.pop_back();
        }
    }
    return out;
}

std::optional<QVector> coordinates(const Subspace& basis, const QVector& v, std::size_t dim)
{
    if (basis.empty())
        return is_zero(v) ? std::optional<QVector>(QVector{}) : std::nullopt;
    return solve(QMatrix::from_columns(basis, dim), v);
}

namespace {

// Column operation: col_i <- a col_i + b col_j, col_j <- c col_i + d col_j (unimodular).
void column_combine(std::vector<std::vector<mpz_class>>& m, std::size_t i, std::size_t j,
                    const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d)
{
    for (auto& row : m) {
        mpz_class x = row[i], y = row[j];
        row[i] = a * x + b * y;
        row[j] = c * x + d * y;
    }
}

}  // namespace

std::optional<LatticePoint> solve_integral(const std::vector<LatticePoint>& rows,
                                           const LatticePoint& rhs,
                                           std::size_t dim)
{
    const std::size_t k = rows.size();
    if (rhs.size() != k)
        throw InputError("integral solve: rhs length mismatch");
    // Stack A over the identity so the column operations accumulate U.
    std::vector<std::vector<mpz_class>> m(k + dim, std::vector<mpz_class>(dim));
    for (std::size_t r = 0; r < k; ++r) {
        if (rows[r].size() != dim)
            throw InputError("integral solve: row length mismatch");
        for (std::size_t c = 0; c < dim; ++c)
            m[r][c] = static_cast<long>(rows[r][c]);
    }
    for (std::size_t c = 0; c < dim; ++c)
        m[k + c][c] = 1;

    std::size_t col = 0;
    for (std::size_t r = 0; r < k && col < dim; ++r) {
        for (std::size_t j = col + 1; j < dim; ++j) {
            if (m[r][j] == 0)
                continue;
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m[r][col].get_mpz_t(),
                       m[r][j].get_mpz_t());
            mpz_class a = m[r][col] / g, b = m[r][j] / g;
            // [x y] -> [s x + t y, -b x + a y] = [g, 0]
            column_combine(m, col, j, s, t, -b, a);
        }
        if (m[r][col] == 0)
            return std::nullopt;  // rank deficient
        ++col;
    }
    // Forward substitution on the lower-triangular block.
    std::vector<mpz_class> y(dim, 0);
    for (std::size_t r = 0; r < k; ++r) {
        mpz_class acc = static_cast<long>(rhs[r]);
        for (std::size_t j = 0; j < r; ++j)
            acc -= m[r][j] * y[j];
        if (acc % m[r][r] != 0)
            return std::nullopt;
        y[r] = acc / m[r][r];
    }
    LatticePoint out(dim, 0);
    for (std::size_t c = 0; c < dim; ++c) {
        mpz_class v = 0;
        for (std::size_t j = 0; j < k; ++j)
            v += m[k + c][j] * y[j];
        if (!v.fits_slong_p())
            throw UnsupportedError("lattice solution out of range");
        out[c] = v.get_si();
    }
    return out;
}

Q determinant(QMatrix m)
{
    if (m.rows() != m.cols())
        throw InputError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Q det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(m(p, c)) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (sgn(m(r, c)) == 0)
                continue;
            Q f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j)
                m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

std::int64_t maximal_minor_gcd(const std::vector<LatticePoint>& rows, std::size_t dim)
{
    const std::size_t k = rows.size();
    if (k == 0)
        return 1;
    if (k > dim)
        return 0;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    std::int64_t g = 0;
    while (true) {
        QMatrix sub(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                sub(r, c) = static_cast<long>(rows[r][pick[c]]);
        Q d = determinant(sub);
        auto v = d.get_num().get_si();
        g = std::gcd(g, v < 0 ? -v : v);
        // next combination
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == dim - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j)
            pick[j] = pick[j - 1] + 1;
    }
    return g;
}

}  // namespace ccc
