#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qdeph/tensor_core.hpp"

namespace qdeph {

/// SLD support cutoff, relative to the largest eigenvalue of ρ.
inline constexpr double kSldCutoff = 1e-10;
inline constexpr double kDefaultStep = 1e-5;
inline constexpr double kDefaultPhi = 0.3;
/// Largest register the metrology experiments will simulate densely.
inline constexpr std::size_t kMaxMetrologyDim = 256;

/// ρ(φ) with an optional analytic ∂ρ/∂φ.
struct ParametrizedFamily {
    std::size_t dim = 0;
    std::function<ComplexMatrix(double)> state_at;
    std::function<ComplexMatrix(double)> derivative_at;  // empty when unavailable
    std::string description;
};

enum class DerivativeMethod { automatic, analytic, finite_difference };

/// ∂ρ/∂φ, analytic when available (and allowed), else (ρ(φ+h) − ρ(φ−h))/2h.
/// Throws InvariantError if the result is not Hermitian and traceless within 1e-8.
ComplexMatrix state_derivative(const ParametrizedFamily& fam, double phi, double h = kDefaultStep,
                               DerivativeMethod method = DerivativeMethod::automatic);

/// Hermitian L solving ½(Lρ + ρL) = ∂ρ on the support of ρ, zero elsewhere.
ComplexMatrix sld(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff = kSldCutoff);

struct QFIResult {
    double value = 0.0;
    ComplexMatrix sld;
    double support_cutoff_used = 0.0;  // absolute threshold on λ_j + λ_k
    DerivativeMethod method = DerivativeMethod::analytic;
    double trace_rho_sld = 0.0;        // |Tr ρL|
    double residual = 0.0;             // max |½(Lρ+ρL) − ∂ρ| on the support block
};

QFIResult qfi(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff = kSldCutoff);
QFIResult qfi(const ParametrizedFamily& fam, double phi, DerivativeMethod method = DerivativeMethod::automatic,
              double h = kDefaultStep, double cutoff = kSldCutoff);

struct StatePair {
    ComplexMatrix rho;
    ComplexMatrix drho;
};

struct ProductCheck {
    double direct = 0.0;          // QFI of ⊗ρ_j
    double summed = 0.0;          // Σ_j I_j
    double via_summed_sld = 0.0;  // Tr ρ_p (Σ_j L^{(j)})²
    double deviation = 0.0;
    double max_cross_term = 0.0;  // max_{j≠k} |Tr ρ_p L^{(j)} L^{(k)}|
    bool passed = false;
};

ProductCheck qfi_product_check(std::span<const StatePair> states);

struct EnsembleCheck {
    double i_ensemble = 0.0;         // QFI of Σ p_j ρ_j
    double i_extended = 0.0;         // Tr ρ_ex L_ex²
    double i_extended_direct = 0.0;  // QFI of ρ_ex from its own SLD
    double violation = 0.0;          // max(0, I_e − I_ex)
    bool passed = false;
};

EnsembleCheck qfi_ensemble_check(std::span<const double> weights, std::span<const StatePair> families);

struct SeparableBoundReport {
    std::size_t n = 0;
    std::size_t trials = 0;
    double max_qfi = 0.0;
    double single_system_bound = 1.0;  // I_bound for e^{−iφσ_z/2}
    double empirical_single_max = 0.0;
    double bound = 0.0;                // n · I_bound
    double max_trace_rho_sld = 0.0;
    bool passed = false;
};

/// Random mixtures of random qubit product states evolved by e^{−iφσ_z/2} on every qubit.
SeparableBoundReport separable_bound_check(std::size_t n, std::size_t trials, std::uint64_t seed,
                                           double phi = kDefaultPhi);

/// Pure qubit ψ evolved by e^{−iφσ_z/2}.
ParametrizedFamily phase_gate_family(const ComplexMatrix& psi);

/// n qubits, each |+⟩ sent through the dephased phase channel with correlation matrix B(γ, φ).
ParametrizedFamily ramsey_family(std::size_t n, double gamma);
/// |+⟩ entangled into an n-qubit GHZ register, B(γ, φ) on every qubit.
ParametrizedFamily ghz_family(std::size_t n, double gamma);
/// |+⟩ sent n times through B(γ, φ) on one qubit.
ParametrizedFamily sequential_family(std::size_t n, double gamma);

/// ∂B/∂φ for B = qubit_dephasing_B(γ, φ).
ComplexMatrix qubit_dephasing_B_derivative(double gamma, double phi);

enum class Protocol { ramsey, ghz_parallel, sequential };
std::string protocol_name(Protocol p);

struct ScalingRow {
    std::size_t n = 0;
    Protocol protocol = Protocol::ramsey;
    double gamma = 0.0;
    double qfi = 0.0;
    double delta_phi = 0.0;  // 1/√qfi, +inf when qfi == 0
};

struct ScalingOptions {
    double phi = kDefaultPhi;
    double h = kDefaultStep;
    double cutoff = kSldCutoff;
    DerivativeMethod method = DerivativeMethod::automatic;
};

/// Rows for every n ≤ n_max, protocol and γ, ordered by (n, protocol, γ).
/// The result does not depend on the thread schedule; `seed` is carried for
/// provenance only since no step is random.
std::vector<ScalingRow> scaling_experiment(std::size_t n_max, std::span<const double> gammas, std::uint64_t seed,
                                           const ScalingOptions& opts = {});

}  // namespace qdeph
