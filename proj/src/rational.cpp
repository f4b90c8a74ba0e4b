#include "ccc/rational.hpp"

#include <numeric>
#include <sstream>

namespace ccc {

Q parse_rational(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (c != ' ')
            t.push_back(c);
    if (t.empty())
        throw InputError("empty rational literal");
    auto slash = t.find('/');
    auto valid_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    std::string num = t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw InputError("malformed rational literal '" + text + "'");
    if (num[0] == '+')
        num.erase(0, 1);
    if (den[0] == '+')
        den.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0)
        throw InputError("zero denominator in '" + text + "'");
    Q q(n, d);
    q.canonicalize();
    return q;
}

std::string format_rational(const Q& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

QVector to_qvector(const LatticePoint& p)
{
    QVector v;
    v.reserve(p.size());
    for (auto x : p)
        v.emplace_back(static_cast<long>(x));
    return v;
}

bool is_integral(const Q& q) { return q.get_den() == 1; }

bool is_integral(const QVector& v)
{
    for (const auto& x : v)
        if (!is_integral(x))
            return false;
    return true;
}

LatticePoint to_lattice(const QVector& v)
{
    LatticePoint p;
    p.reserve(v.size());
    for (const auto& x : v) {
        if (!is_integral(x))
            throw InternalError("expected an integral vector, got " + format_vector(v));
        if (!x.get_num().fits_slong_p())
            throw UnsupportedError("lattice coordinate out of 64-bit range");
        p.push_back(x.get_num().get_si());
    }
    return p;
}

Q dot(const QVector& a, const QVector& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in dot product");
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0)
            s += a[i] * b[i];
    return s;
}

QVector add(const QVector& a, const QVector& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in vector sum");
    QVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

QVector sub(const QVector& a, const QVector& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in vector difference");
    QVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

QVector scale(const QVector& a, const Q& s)
{
    QVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] * s;
    return r;
}

QVector negate(const QVector& a) { return scale(a, Q(-1)); }

bool is_zero(const QVector& v)
{
    for (const auto& x : v)
        if (sgn(x) != 0)
            return false;
    return true;
}

std::int64_t dot(const LatticePoint& a, const LatticePoint& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in lattice pairing");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

LatticePoint add(const LatticePoint& a, const LatticePoint& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in lattice sum");
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

LatticePoint sub(const LatticePoint& a, const LatticePoint& b)
{
    if (a.size() != b.size())
        throw InputError("dimension mismatch in lattice difference");
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

LatticePoint scale(const LatticePoint& a, std::int64_t s)
{
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] * s;
    return r;
}

LatticePoint negate(const LatticePoint& a) { return scale(a, -1); }

std::int64_t gcd_of(const LatticePoint& v)
{
    std::int64_t g = 0;
    for (auto x : v)
        g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

LatticePoint primitive(const LatticePoint& v)
{
    auto g = gcd_of(v);
    if (g <= 1)
        return v;
    LatticePoint r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = v[i] / g;
    return r;
}

void clear_denominators(QVector& v, Q& offset)
{
    mpz_class l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class g = 0;
    for (const auto& x : v) {
        mpz_class n = x.get_num() * (l / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    if (g == 0)
        return;
    Q factor(l, g);
    factor.canonicalize();
    for (auto& x : v)
        x *= factor;
    offset *= factor;
}

std::string format_vector(const QVector& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << format_rational(v[i]);
    os << ')';
    return os.str();
}

std::string format_vector(const LatticePoint& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

QMatrix QMatrix::identity(std::size_t n)
{
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols)
{
    QMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw InputError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& cols, std::size_t rows)
{
    QMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows)
            throw InputError("ragged matrix columns");
        for (std::size_t r = 0; r < rows; ++r)
            m(r, c) = cols[c][r];
    }
    return m;
}

QVector QMatrix::row(std::size_t r) const
{
    return QVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

QVector QMatrix::column(std::size_t c) const
{
    QVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, c);
    return v;
}

QMatrix QMatrix::transpose() const
{
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

QVector QMatrix::apply(const QVector& x) const
{
    if (x.size() != cols_)
        throw InputError("matrix-vector dimension mismatch");
    QVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (sgn((*this)(r, c)) != 0)
                y[r] += (*this)(r, c) * x[c];
    return y;
}

bool QMatrix::is_zero() const
{
    for (const auto& x : data_)
        if (sgn(x) != 0)
            return false;
    return true;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw InputError("matrix product dimension mismatch");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Q& aik = a(i, k);
            if (sgn(aik) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (sgn(b(k, j)) != 0)
                    c(i, j) += aik * b(k, j);
        }
    return c;
}

}  // namespace ccc
