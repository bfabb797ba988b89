#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdeph/channels.hpp"
#include "qdeph/classical_structure.hpp"

namespace qdeph {

/// Largest d^n admitted for the entangled intermediates.
inline constexpr std::size_t kMaxProtocolDim = 4096;

/// Commuting gates f_1..f_n applied either across an n-fold entangled
/// register or one after another in the order given by `permutation`.
struct OperatorProtocolSpec {
    ClassicalStructure cs;
    std::vector<ComplexMatrix> ops;
    std::vector<std::size_t> permutation;
};

/// Dephasing channels B_1..B_n applied to `input_state` in either protocol.
struct ChannelProtocolSpec {
    ClassicalStructure cs;
    std::vector<CorrelationMatrix> correlations;
    std::vector<std::size_t> permutation;
    ComplexMatrix input_state;
};

struct ProtocolOptions {
    /// Off only for foil experiments that feed non-commuting gates on purpose.
    bool check_commutation = true;
};

struct EquivalenceReport {
    double max_abs_deviation = 0.0;
    ComplexMatrix parallel_result;
    ComplexMatrix sequential_result;
    double tolerance = 0.0;
    bool passed = false;
};

std::vector<std::size_t> identity_permutation(std::size_t n);
/// Throws InvariantError unless `perm` is a bijection on 0..n−1.
void validate_permutation(std::span<const std::size_t> perm, std::size_t n);

void validate(const OperatorProtocolSpec& spec, const ProtocolOptions& opts = {});
void validate(const ChannelProtocolSpec& spec);

/// δ_n† · (f_1 ⊗ … ⊗ f_n) · δ_n
ComplexMatrix parallel_operator(const OperatorProtocolSpec& spec, const ProtocolOptions& opts = {});
/// f_{π(n)} · … · f_{π(1)}
ComplexMatrix sequential_operator(const OperatorProtocolSpec& spec, const ProtocolOptions& opts = {});

/// δ_n · ρ · δ_n†
ComplexMatrix entangle(const ClassicalStructure& cs, const ComplexMatrix& rho, std::size_t n);
/// δ_n† · σ · δ_n
ComplexMatrix disentangle(const ClassicalStructure& cs, const ComplexMatrix& sigma, std::size_t n);
/// (ℬ_1 ⊗ … ⊗ ℬ_n)(σ) on an n-site register, each factor applied through its Kraus operators.
ComplexMatrix apply_local_channels(const std::vector<QuantumChannel>& channels, const ComplexMatrix& sigma);

/// Entangle, apply ℬ_1 ⊗ … ⊗ ℬ_n, disentangle.
ComplexMatrix parallel_channel(const ChannelProtocolSpec& spec);
/// ℬ_{π(n)}(… ℬ_{π(1)}(ρ) …) through the Schur-product action.
ComplexMatrix sequential_channel(const ChannelProtocolSpec& spec);

EquivalenceReport check_equivalence(const OperatorProtocolSpec& spec, double tol, const ProtocolOptions& opts = {});
EquivalenceReport check_equivalence(const ChannelProtocolSpec& spec, double tol);

}  // namespace qdeph
