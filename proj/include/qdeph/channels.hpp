#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdeph/classical_structure.hpp"
#include "qdeph/tensor_core.hpp"

namespace qdeph {

/// Tolerance for density-matrix validity and CPTP checks.
inline constexpr double kStateTol = 1e-8;
/// Relative eigenvalue cutoff below which spectral Kraus vectors are dropped.
inline constexpr double kKrausCutoff = 1e-12;

/// Completely positive map ρ ↦ Σ_t k_t ρ k_t†. Trace preservation is not
/// enforced at construction; see is_cptp.
class QuantumChannel {
public:
    explicit QuantumChannel(std::vector<ComplexMatrix> kraus);

    std::size_t dim_in() const noexcept { return kraus_.front().cols(); }
    std::size_t dim_out() const noexcept { return kraus_.front().rows(); }
    const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

private:
    std::vector<ComplexMatrix> kraus_;
};

struct CptpReport {
    double trace_defect = 0.0;         // max |Σ k†k − I|
    double min_choi_eigenvalue = 0.0;
    bool passed = false;
};

/// Throws InvariantError naming the failed property (shape, Hermiticity, trace, positivity).
void validate_state(const ComplexMatrix& rho, std::size_t dim, double tol = kStateTol);

/// Channel action on a valid density matrix; the output is re-symmetrized.
ComplexMatrix apply(const QuantumChannel& ch, const ComplexMatrix& rho);
/// Linear action Σ k m k† on an arbitrary dim_in × dim_in matrix.
ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& m);

CptpReport is_cptp(const QuantumChannel& ch, double tol = kStateTol);

/// (id ⊗ ch) applied to Σ_{jk} |jj⟩⟨kk|, reference system first.
ComplexMatrix choi(const QuantumChannel& ch);

QuantumChannel lift_operator(const ComplexMatrix& u);
QuantumChannel identity_channel(std::size_t d);

/// Hermitian, positive semidefinite, unit-diagonal matrix B. The channel it
/// defines acts as ρ ↦ B* ∘ ρ in the coordinates of a classical structure.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(ComplexMatrix b);

    std::size_t dim() const noexcept { return b_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return b_; }

private:
    ComplexMatrix b_;
};

/// Kraus form from the spectral decomposition B = Σ_s |χ_s⟩⟨χ_s|:
/// b_s = Σ_j ⟨χ_s|b_j⟩ b_j b_j†.
QuantumChannel schur_channel(const ClassicalStructure& cs, const CorrelationMatrix& b);

/// B* ∘ ρ evaluated in the structure's basis.
ComplexMatrix apply_schur(const ClassicalStructure& cs, const CorrelationMatrix& b, const ComplexMatrix& rho);

/// [[1, e^{−γ−iφ}], [e^{−γ+iφ}, 1]]
CorrelationMatrix qubit_dephasing_B(double gamma, double phi);

/// (1 − e^{−γ})/2
double phase_flip_probability(double gamma);

/// ρ ↦ U((1−p)ρ + p ZρZ)U† with U = e^{+iφσ_z/2} and p = phase_flip_probability(γ).
/// This is the same channel as schur_channel(qubit_dephasing_B(γ, φ)).
QuantumChannel phase_flip_channel(double gamma, double phi);

/// (B)_{jk} = e^{−i(φ_j − φ_k)}
CorrelationMatrix pure_phase_B(std::span<const double> phases);

/// diag(e^{+iφ_j}): the unitary whose conjugation the pure-phase channel performs.
ComplexMatrix pure_phase_unitary(std::span<const double> phases);

/// Roots-of-unity dephasing family in dimension `dim`.
struct DephasingFamilySpec {
    std::size_t dim = 0;
    std::vector<double> phases;
    std::vector<double> weights;

    /// Throws InvariantError on length mismatch, negative weight or Σ r_s ≠ 1.
    void validate() const;
};

/// χ_s = √r_s Σ_j e^{−iφ_j} ω_j^s |j⟩ with ω_j = e^{−2πij/n}.
std::vector<ComplexMatrix> dephasing_family_vectors(const DephasingFamilySpec& spec);
CorrelationMatrix dephasing_family_B(const DephasingFamilySpec& spec);
/// Closed-form diagonal Kraus operators ⟨χ_s|j⟩ |j⟩⟨j| = √r_s e^{+i(φ_j + 2πjs/n)} |j⟩⟨j|.
std::vector<ComplexMatrix> dephasing_family_kraus(const DephasingFamilySpec& spec);

}  // namespace qdeph
