#pragma once

#include <cstddef>

#include "qdeph/tensor_core.hpp"

// Data-parallel inner loops behind tensor_core and the protocol simulators.
//
// Each kernel exists twice: a serial reference and an OpenMP version. Both
// evaluate every output entry with the same sequence of floating-point
// operations, so their results are bit-identical; the tests assert that.
namespace qdeph::kernels {

/// Below this many multiply-adds the OpenMP kernels run on one thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

namespace serial {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b);
/// (I_left ⊗ f ⊗ I_right) · m, with m of shape (left·f.cols·right) × k.
ComplexMatrix apply_site(const ComplexMatrix& f, const ComplexMatrix& m, std::size_t left,
                         std::size_t right);

}  // namespace serial

namespace omp {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix apply_site(const ComplexMatrix& f, const ComplexMatrix& m, std::size_t left,
                         std::size_t right);

}  // namespace omp

}  // namespace qdeph::kernels
