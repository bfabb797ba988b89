#include "qdeph/classical_structure.hpp"

#include <algorithm>
#include <cstdio>

#include "qdeph/kernels.hpp"

namespace qdeph {
namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

void require_state_vector(const ClassicalStructure& cs, const ComplexMatrix& a, const char* what) {
    if (a.rows() != cs.dim() || a.cols() != 1) {
        throw ShapeError(std::string(what) + ": expected a " + std::to_string(cs.dim()) + "x1 vector, got " +
                         a.shape());
    }
}

}  // namespace

ComplexMatrix ClassicalStructure::basis_vector(std::size_t j) const {
    if (j >= dim()) throw ShapeError("basis_vector: index " + std::to_string(j) + " out of range");
    ComplexMatrix v(dim(), 1);
    for (std::size_t i = 0; i < dim(); ++i) v(i, 0) = basis_(i, j);
    return v;
}

ComplexMatrix ClassicalStructure::to_basis(const ComplexMatrix& m) const {
    return multiply(multiply(dagger(basis_), m), basis_);
}

ComplexMatrix ClassicalStructure::from_basis(const ComplexMatrix& m) const {
    return multiply(multiply(basis_, m), dagger(basis_));
}

double AxiomReport::max() const noexcept {
    return std::max({associativity_err, isometry_err, commutativity_err, frobenius_err, counit_err});
}

ClassicalStructure make_classical_structure(const ComplexMatrix& basis, double tol) {
    if (!basis.is_square()) throw ShapeError("make_classical_structure: basis must be square, got " + basis.shape());
    const std::size_t d = basis.rows();
    const double defect = max_abs_diff(multiply(dagger(basis), basis), ComplexMatrix::identity(d));
    if (defect > tol) {
        throw InvariantError("make_classical_structure: basis is not unitary, max |U^dagger U - I| = " + sci(defect));
    }
    ComplexMatrix copy(d * d, d);
    ComplexMatrix unit(d, 1);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t a = 0; a < d; ++a) {
            unit(a, 0) += basis(a, j);
            for (std::size_t b = 0; b < d; ++b) {
                const Complex bb = basis(a, j) * basis(b, j);
                for (std::size_t c = 0; c < d; ++c) copy(a * d + b, c) += bb * std::conj(basis(c, j));
            }
        }
    }
    return ClassicalStructure(basis, std::move(copy), std::move(unit));
}

ClassicalStructure computational_structure(std::size_t d) {
    return make_classical_structure(ComplexMatrix::identity(d));
}

ComplexMatrix swap_matrix(std::size_t d) {
    ComplexMatrix s(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
    return s;
}

AxiomReport verify_axioms(const ClassicalStructure& cs) { return verify_axioms(cs.copy(), cs.unit()); }

AxiomReport verify_axioms(const ComplexMatrix& copy, const ComplexMatrix& unit) {
    const std::size_t d = copy.cols();
    if (copy.rows() != d * d || unit.rows() != d || unit.cols() != 1) {
        throw ShapeError("verify_axioms: copy " + copy.shape() + " and unit " + unit.shape() + " are inconsistent");
    }
    const ComplexMatrix id = ComplexMatrix::identity(d);
    const ComplexMatrix copy_dag = dagger(copy);
    AxiomReport r;

    r.associativity_err = max_abs_diff(multiply(kron(copy, id), copy), multiply(kron(id, copy), copy));
    r.isometry_err = max_abs_diff(multiply(copy_dag, copy), id);
    r.commutativity_err = max_abs_diff(multiply(swap_matrix(d), copy), copy);

    const ComplexMatrix projector = multiply(copy, copy_dag);
    r.frobenius_err = std::max(max_abs_diff(multiply(kron(copy_dag, id), kron(id, copy)), projector),
                               max_abs_diff(multiply(kron(id, copy_dag), kron(copy, id)), projector));

    const ComplexMatrix counit = dagger(unit);
    r.counit_err = std::max(max_abs_diff(multiply(kron(counit, id), copy), id),
                            max_abs_diff(multiply(kron(id, counit), copy), id));
    return r;
}

ComplexMatrix nfold_copy(const ClassicalStructure& cs, std::size_t n, FoldOrder order) {
    if (n == 0) throw InvariantError("nfold_copy: n must be at least 1");
    const std::size_t d = cs.dim();
    ComplexMatrix out = ComplexMatrix::identity(d);
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t spectator = ipow(d, k - 1);
        out = order == FoldOrder::left ? kernels::omp::apply_site(cs.copy(), out, 1, spectator)
                                       : kernels::omp::apply_site(cs.copy(), out, spectator, 1);
    }
    return out;
}

double commutation_defect(const ClassicalStructure& cs, const ComplexMatrix& f) {
    if (f.rows() != cs.dim() || f.cols() != cs.dim()) {
        throw ShapeError("commutation_defect: expected a " + std::to_string(cs.dim()) + "x" +
                         std::to_string(cs.dim()) + " operator, got " + f.shape());
    }
    const ComplexMatrix lhs = multiply(cs.copy(), f);
    const ComplexMatrix rhs = kernels::omp::apply_site(f, cs.copy(), 1, cs.dim());
    return max_abs_diff(lhs, rhs);
}

ComplexMatrix diagonal_from_state(const ClassicalStructure& cs, const ComplexMatrix& a) {
    require_state_vector(cs, a, "diagonal_from_state");
    std::vector<Complex> coeffs(cs.dim());
    for (std::size_t j = 0; j < cs.dim(); ++j) coeffs[j] = inner(a, cs.basis_vector(j));
    return cs.from_basis(ComplexMatrix::diagonal(coeffs));
}

ComplexMatrix state_from_diagonal(const ClassicalStructure& cs, const ComplexMatrix& f, double tol) {
    const double defect = commutation_defect(cs, f);
    if (defect > tol) {
        throw InvariantError("state_from_diagonal: operator does not commute with the copy map, defect " +
                             sci(defect));
    }
    ComplexMatrix a(cs.dim(), 1);
    for (std::size_t j = 0; j < cs.dim(); ++j) {
        const ComplexMatrix bj = cs.basis_vector(j);
        const Complex fjj = inner(bj, multiply(f, bj));
        for (std::size_t i = 0; i < cs.dim(); ++i) a(i, 0) += std::conj(fjj) * bj(i, 0);
    }
    return a;
}

}  // namespace qdeph
