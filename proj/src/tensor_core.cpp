#include "qdeph/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "qdeph/kernels.hpp"

namespace qdeph {
namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.is_square()) throw ShapeError(std::string(what) + ": expected a square matrix, got " + a.shape());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(what) + ": shapes differ, " + a.shape() + " vs " + b.shape());
    }
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows == 0 || cols == 0) throw ShapeError("ComplexMatrix: dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ShapeError("ComplexMatrix: dimensions must be positive");
    if (entries_.size() != rows * cols) {
        throw ShapeError("ComplexMatrix: " + std::to_string(entries_.size()) + " entries for a " + shape() +
                         " matrix");
    }
    for (const Complex& z : entries_) {
        if (!finite(z)) throw InvariantError("ComplexMatrix: non-finite entry");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) throw ShapeError("ComplexMatrix: dimensions must be positive");
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw ShapeError("ComplexMatrix: ragged initializer");
        for (const Complex& z : row) {
            if (!finite(z)) throw InvariantError("ComplexMatrix: non-finite entry");
            entries_.push_back(z);
        }
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
    return ComplexMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!finite(values[i])) throw InvariantError("ComplexMatrix: non-finite entry");
        m(i, i) = values[i];
    }
    return m;
}

Complex ComplexMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
        throw ShapeError("ComplexMatrix::at: index (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside " + shape());
    }
    return (*this)(i, j);
}

std::vector<Complex> ComplexMatrix::diagonal_entries() const {
    std::vector<Complex> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
}

std::string ComplexMatrix::shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) { return kernels::omp::multiply(a, b); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kernels::omp::kron(a, b); }

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) return ComplexMatrix::identity(1);
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t n) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix conj(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (Complex& z : out.entries()) z = std::conj(z);
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b) { return kernels::omp::schur(a, b); }

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] += b.entries()[i];
    return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] -= b.entries()[i];
    return out;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex s) {
    ComplexMatrix out = a;
    for (Complex& z : out.entries()) z *= s;
    return out;
}

ComplexMatrix outer(const ComplexMatrix& u, const ComplexMatrix& v) { return multiply(u, dagger(v)); }

Complex inner(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.cols() != 1 || v.cols() != 1 || u.rows() != v.rows()) {
        throw ShapeError("inner: expected equal-length column vectors, got " + u.shape() + " and " + v.shape());
    }
    Complex s{};
    for (std::size_t i = 0; i < u.rows(); ++i) s += std::conj(u(i, 0)) * v(i, 0);
    return s;
}

Complex trace(const ComplexMatrix& a) {
    require_square(a, "trace");
    Complex s{};
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double hermitian_defect(const ComplexMatrix& a) {
    require_square(a, "hermitian_defect");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    require_square(a, "hermitian_part");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return out;
}

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol) {
    require_square(a, "hermitian_eig");
    const double defect = hermitian_defect(a);
    if (defect > tol) {
        throw InvariantError("hermitian_eig: matrix is not Hermitian, max |A - A^dagger| = " + format_double(defect) +
                             " exceeds " + format_double(tol));
    }
    const ComplexMatrix h = hermitian_part(a);
    const auto n = static_cast<Eigen::Index>(h.rows());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw InvariantError("hermitian_eig: eigensolver did not converge");

    HermitianEigenDecomposition out{std::vector<double>(h.rows()), ComplexMatrix(h.rows(), h.cols())};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        for (Eigen::Index j = 0; j < n; ++j)
            out.eigenvectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = solver.eigenvectors()(i, j);
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    require_square(m, "partial_trace");
    if (dims.empty()) throw ShapeError("partial_trace: empty dimension list");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ShapeError("partial_trace: zero factor dimension");
        total *= d;
    }
    if (total != m.rows()) {
        throw ShapeError("partial_trace: factor dimensions multiply to " + std::to_string(total) + ", matrix is " +
                         m.shape());
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw ShapeError("partial_trace: keep index " + std::to_string(k) + " out of range");
        if (kept[k]) throw ShapeError("partial_trace: keep index " + std::to_string(k) + " repeated");
        kept[k] = true;
    }

    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size() - 1; i > 0; --i) stride[i - 1] = stride[i] * dims[i];

    // Linear offsets of every multi-index over the kept (resp. traced) factors.
    auto offsets = [&](bool want_kept) {
        std::vector<std::size_t> off{0};
        for (std::size_t f = 0; f < dims.size(); ++f) {
            if (kept[f] != want_kept) continue;
            std::vector<std::size_t> next;
            next.reserve(off.size() * dims[f]);
            for (std::size_t base : off)
                for (std::size_t x = 0; x < dims[f]; ++x) next.push_back(base + x * stride[f]);
            off = std::move(next);
        }
        return off;
    };
    const std::vector<std::size_t> ko = offsets(true);
    const std::vector<std::size_t> to = offsets(false);

    ComplexMatrix out(ko.size(), ko.size());
    for (std::size_t a = 0; a < ko.size(); ++a)
        for (std::size_t b = 0; b < ko.size(); ++b) {
            Complex s{};
            for (std::size_t t : to) s += m(ko[a] + t, ko[b] + t);
            out(a, b) = s;
        }
    return out;
}

PsdReport is_psd(const ComplexMatrix& a, double tol) {
    const auto eig = hermitian_eig(a, tol);
    const double lo = eig.eigenvalues.front();
    return PsdReport{lo >= -tol, lo};
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) { return add(a, b); }
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) { return subtract(a, b); }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }
ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return scale(a, s); }

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace qdeph
