#pragma once

#include <cstddef>

#include "qdeph/tensor_core.hpp"

namespace qdeph {

inline constexpr double kStructureTol = 1e-10;
/// Acceptance threshold for "f commutes with the copy map".
inline constexpr double kCommutationTol = 1e-8;

/// An orthonormal basis packaged with its copy isometry δ = Σ_j (b_j⊗b_j) b_j†
/// and the unnormalized unit Σ_j b_j.
class ClassicalStructure {
public:
    std::size_t dim() const noexcept { return basis_.rows(); }
    const ComplexMatrix& basis() const noexcept { return basis_; }
    const ComplexMatrix& copy() const noexcept { return copy_; }
    const ComplexMatrix& unit() const noexcept { return unit_; }
    ComplexMatrix basis_vector(std::size_t j) const;

    /// Coordinates of `m` in this basis: basis† · m · basis.
    ComplexMatrix to_basis(const ComplexMatrix& m) const;
    /// Inverse of to_basis.
    ComplexMatrix from_basis(const ComplexMatrix& m) const;

private:
    friend ClassicalStructure make_classical_structure(const ComplexMatrix& basis, double tol);
    ClassicalStructure(ComplexMatrix basis, ComplexMatrix copy, ComplexMatrix unit)
        : basis_(std::move(basis)), copy_(std::move(copy)), unit_(std::move(unit)) {}

    ComplexMatrix basis_;
    ComplexMatrix copy_;
    ComplexMatrix unit_;
};

/// Max-entry deviations of the five defining identities.
struct AxiomReport {
    double associativity_err = 0.0;
    double isometry_err = 0.0;
    double commutativity_err = 0.0;
    double frobenius_err = 0.0;
    double counit_err = 0.0;

    double max() const noexcept;
};

/// Builds the structure whose basis vectors are the columns of `basis`.
/// Throws InvariantError if basis†·basis deviates from I by more than tol.
ClassicalStructure make_classical_structure(const ComplexMatrix& basis, double tol = kStructureTol);
ClassicalStructure computational_structure(std::size_t d);

/// Swap on C^d ⊗ C^d.
ComplexMatrix swap_matrix(std::size_t d);

AxiomReport verify_axioms(const ClassicalStructure& cs);
/// Same checks on raw maps, which need not form a valid structure.
AxiomReport verify_axioms(const ComplexMatrix& copy, const ComplexMatrix& unit);

enum class FoldOrder { left, right };

/// The d^n × d map Σ_j b_j^{⊗n} b_j†, built by composing copies.
/// Left fold attaches each new copy to the first leg, right fold to the last.
ComplexMatrix nfold_copy(const ClassicalStructure& cs, std::size_t n, FoldOrder order = FoldOrder::left);

/// max |δ·f − (f⊗I)·δ|
double commutation_defect(const ClassicalStructure& cs, const ComplexMatrix& f);

/// f = (⟨a|⊗I)·δ = Σ_j ⟨a|b_j⟩ b_j b_j†
ComplexMatrix diagonal_from_state(const ClassicalStructure& cs, const ComplexMatrix& a);

/// Inverse of diagonal_from_state. Rejects f whose commutation defect exceeds tol.
ComplexMatrix state_from_diagonal(const ClassicalStructure& cs, const ComplexMatrix& f,
                                  double tol = kCommutationTol);

}  // namespace qdeph
