#include "qdeph/kernels.hpp"

#include <cstdint>

namespace qdeph::kernels {
namespace {

void require_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("multiply: inner dimensions differ, " + a.shape() + " * " + b.shape());
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(what) + ": shapes differ, " + a.shape() + " vs " + b.shape());
    }
}

void require_site(const ComplexMatrix& f, const ComplexMatrix& m, std::size_t left, std::size_t right) {
    if (left == 0 || right == 0 || m.rows() != left * f.cols() * right) {
        throw ShapeError("apply_site: operand " + m.shape() + " does not factor as " + std::to_string(left) +
                         " x " + std::to_string(f.cols()) + " x " + std::to_string(right) + " rows");
    }
}

// Row i of a·b. Shared by both variants so the summation order is identical.
inline void multiply_row(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c, std::size_t i) {
    const std::size_t inner = a.cols();
    const std::size_t n = b.cols();
    const Complex* arow = a.entries().data() + i * inner;
    const Complex* bdata = b.entries().data();
    Complex* crow = c.entries().data() + i * n;
    for (std::size_t k = 0; k < inner; ++k) {
        const Complex aik = arow[k];
        if (aik == Complex{}) continue;
        const Complex* brow = bdata + k * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
}

inline void kron_row(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c, std::size_t row) {
    const std::size_t i = row / b.rows();
    const std::size_t k = row % b.rows();
    Complex* out = c.entries().data() + row * c.cols();
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const Complex aij = a(i, j);
        for (std::size_t l = 0; l < b.cols(); ++l) out[j * b.cols() + l] = aij * b(k, l);
    }
}

// One (l, y) output slab of the site action: out[(l,y,·)] = Σ_x f[y,x] m[(l,x,·)].
inline void site_slab(const ComplexMatrix& f, const ComplexMatrix& m, ComplexMatrix& out, std::size_t l,
                      std::size_t y, std::size_t block) {
    const std::size_t din = f.cols();
    const std::size_t dout = f.rows();
    Complex* dst = out.entries().data() + (l * dout + y) * block;
    const Complex* src = m.entries().data() + l * din * block;
    for (std::size_t x = 0; x < din; ++x) {
        const Complex fyx = f(y, x);
        if (fyx == Complex{}) continue;
        const Complex* s = src + x * block;
        for (std::size_t r = 0; r < block; ++r) dst[r] += fyx * s[r];
    }
}

}  // namespace

namespace serial {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_multiply(a, b);
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) multiply_row(a, b, c, i);
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t row = 0; row < c.rows(); ++row) kron_row(a, b, c, row);
    return c;
}

ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "schur_product");
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < c.size(); ++i) c.entries()[i] = a.entries()[i] * b.entries()[i];
    return c;
}

ComplexMatrix apply_site(const ComplexMatrix& f, const ComplexMatrix& m, std::size_t left, std::size_t right) {
    require_site(f, m, left, right);
    const std::size_t block = right * m.cols();
    ComplexMatrix out(left * f.rows() * right, m.cols());
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t y = 0; y < f.rows(); ++y) site_slab(f, m, out, l, y, block);
    return out;
}

}  // namespace serial

namespace omp {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_multiply(a, b);
    ComplexMatrix c(a.rows(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.rows());
    const bool wide = a.rows() * a.cols() * b.cols() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
    for (std::int64_t i = 0; i < rows; ++i) multiply_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    const auto rows = static_cast<std::int64_t>(c.rows());
    const bool wide = c.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
    for (std::int64_t row = 0; row < rows; ++row) kron_row(a, b, c, static_cast<std::size_t>(row));
    return c;
}

ComplexMatrix schur(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "schur_product");
    ComplexMatrix c(a.rows(), a.cols());
    const auto n = static_cast<std::int64_t>(c.size());
    const bool wide = c.size() >= kParallelThreshold;
    auto ae = a.entries();
    auto be = b.entries();
    auto ce = c.entries();
#pragma omp parallel for schedule(static) if (wide)
    for (std::int64_t i = 0; i < n; ++i) ce[i] = ae[i] * be[i];
    return c;
}

ComplexMatrix apply_site(const ComplexMatrix& f, const ComplexMatrix& m, std::size_t left, std::size_t right) {
    require_site(f, m, left, right);
    const std::size_t block = right * m.cols();
    ComplexMatrix out(left * f.rows() * right, m.cols());
    const auto slabs = static_cast<std::int64_t>(left * f.rows());
    const bool wide = out.size() * f.cols() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
    for (std::int64_t s = 0; s < slabs; ++s) {
        const auto u = static_cast<std::size_t>(s);
        site_slab(f, m, out, u / f.rows(), u % f.rows(), block);
    }
    return out;
}

}  // namespace omp

}  // namespace qdeph::kernels
