#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qdeph/tensor_core.hpp"

namespace qdeph {

/// Seeded generator with platform-independent output: only the raw
/// mt19937_64 stream is used, never the implementation-defined std
/// distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double normal();   // Box-Muller
    Complex complex_normal();  // E|z|^2 = 1
    std::size_t index(std::size_t n);  // uniform on [0, n)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

ComplexMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols);
ComplexMatrix haar_unitary(Rng& rng, std::size_t d);
ComplexMatrix random_unit_vector(Rng& rng, std::size_t d);
ComplexMatrix random_density_matrix(Rng& rng, std::size_t d);
ComplexMatrix random_pure_density_matrix(Rng& rng, std::size_t d);
ComplexMatrix random_hermitian(Rng& rng, std::size_t d);
/// D^{-1/2} G†G D^{-1/2} with D = diag(G†G): a full-support unit-diagonal PSD matrix.
ComplexMatrix random_unit_diagonal_psd(Rng& rng, std::size_t d);
/// Unitary diagonal in the given basis, with uniformly random phases.
ComplexMatrix random_diagonal_unitary(Rng& rng, const ComplexMatrix& basis);
/// Point on the probability simplex from normalized exponentials.
std::vector<double> random_simplex(Rng& rng, std::size_t n);
std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n);

}  // namespace qdeph
