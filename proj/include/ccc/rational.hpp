#pragma once

// Exact scalars, vectors and small dense matrices over Q.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccc {

using Q = mpq_class;
using QVector = std::vector<Q>;
using LatticePoint = std::vector<std::int64_t>;

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Malformed or dimensionally inconsistent input.
struct InputError : Error {
    using Error::Error;
};
/// Well-formed input that violates a mathematical invariant (condition C, overlapping cones, ...).
struct InvariantError : Error {
    using Error::Error;
};
/// Request outside the supported desk-scale envelope.
struct UnsupportedError : Error {
    using Error::Error;
};
/// A self-check inside the library failed; always a bug.
struct InternalError : Error {
    using Error::Error;
};

Q parse_rational(const std::string& text);
std::string format_rational(const Q& q);

QVector to_qvector(const LatticePoint& p);
bool is_integral(const Q& q);
bool is_integral(const QVector& v);
LatticePoint to_lattice(const QVector& v);  // throws if not integral

Q dot(const QVector& a, const QVector& b);
QVector add(const QVector& a, const QVector& b);
QVector sub(const QVector& a, const QVector& b);
QVector scale(const QVector& a, const Q& s);
QVector negate(const QVector& a);
bool is_zero(const QVector& v);

std::int64_t dot(const LatticePoint& a, const LatticePoint& b);
LatticePoint add(const LatticePoint& a, const LatticePoint& b);
LatticePoint sub(const LatticePoint& a, const LatticePoint& b);
LatticePoint scale(const LatticePoint& a, std::int64_t s);
LatticePoint negate(const LatticePoint& a);

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
LatticePoint primitive(const LatticePoint& v);
std::int64_t gcd_of(const LatticePoint& v);

/// Rescales a rational vector (and an accompanying offset) to a primitive integer
/// normal.  The sign is preserved.
void clear_denominators(QVector& v, Q& offset);

std::string format_vector(const QVector& v);
std::string format_vector(const LatticePoint& v);

/// Row-major dense matrix.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static QMatrix identity(std::size_t n);
    static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);
    static QMatrix from_columns(const std::vector<QVector>& cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Q& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Q& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    QVector row(std::size_t r) const;
    QVector column(std::size_t c) const;
    QMatrix transpose() const;
    QVector apply(const QVector& x) const;
    bool is_zero() const;

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Q> data_;
};

}  // namespace ccc
