#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qdeph/errors.hpp"

namespace qdeph {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;

/// Dense row-major complex matrix. Vectors are single-column matrices.
///
/// Constructors that take entries reject NaN/Inf and length mismatches.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix column(std::span<const Complex> values);
    static ComplexMatrix diagonal(std::span<const Complex> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    Complex operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
    Complex& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
    Complex at(std::size_t i, std::size_t j) const;

    std::span<const Complex> entries() const noexcept { return entries_; }
    std::span<Complex> entries() noexcept { return entries_; }

    std::vector<Complex> diagonal_entries() const;
    std::string shape() const;

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns
};

struct PsdReport {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Left-to-right Kronecker product of all factors; empty input gives the 1x1 identity.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t n);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix conj(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex s);
ComplexMatrix outer(const ComplexMatrix& u, const ComplexMatrix& v);  // u v†
Complex inner(const ComplexMatrix& u, const ComplexMatrix& v);        // u† v

Complex trace(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// max |a - a†| over entries; requires a square matrix.
double hermitian_defect(const ComplexMatrix& a);
/// (a + a†)/2
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// solving; eigenvalues are ascending and degenerate eigenvectors carry no
/// particular gauge.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol = kHermitianTol);

/// Reduced matrix over the factors listed in `keep`, in ascending factor order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

PsdReport is_psd(const ComplexMatrix& a, double tol = kHermitianTol);

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace qdeph
