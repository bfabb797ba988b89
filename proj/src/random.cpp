#include "qdeph/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qdeph {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw InvariantError("Rng::index: empty range");
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
}

ComplexMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (Complex& z : g.entries()) z = rng.complex_normal();
    return g;
}

ComplexMatrix haar_unitary(Rng& rng, std::size_t d) {
    // Gram-Schmidt on a Ginibre matrix is QR with a positive R diagonal, which is Haar.
    ComplexMatrix q = gaussian_matrix(rng, d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj{};
                for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < d; ++i) q(i, j) -= proj * q(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < d; ++i) q(i, j) /= norm;
    }
    return q;
}

ComplexMatrix random_unit_vector(Rng& rng, std::size_t d) {
    ComplexMatrix v = gaussian_matrix(rng, d, 1);
    double norm = 0.0;
    for (const Complex& z : v.entries()) norm += std::norm(z);
    return scale(v, 1.0 / std::sqrt(norm));
}

ComplexMatrix random_density_matrix(Rng& rng, std::size_t d) {
    const ComplexMatrix g = gaussian_matrix(rng, d, d);
    ComplexMatrix rho = hermitian_part(multiply(g, dagger(g)));
    return scale(rho, 1.0 / trace(rho).real());
}

ComplexMatrix random_pure_density_matrix(Rng& rng, std::size_t d) {
    const ComplexMatrix v = random_unit_vector(rng, d);
    return outer(v, v);
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t d) { return hermitian_part(gaussian_matrix(rng, d, d)); }

ComplexMatrix random_unit_diagonal_psd(Rng& rng, std::size_t d) {
    const ComplexMatrix g = gaussian_matrix(rng, d, d);
    const ComplexMatrix gram = multiply(dagger(g), g);
    ComplexMatrix b(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            b(i, j) = i == j ? Complex(1.0) : gram(i, j) / std::sqrt(gram(i, i).real() * gram(j, j).real());
    return b;
}

ComplexMatrix random_diagonal_unitary(Rng& rng, const ComplexMatrix& basis) {
    std::vector<Complex> phases(basis.cols());
    for (Complex& p : phases) p = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    return multiply(multiply(basis, ComplexMatrix::diagonal(phases)), dagger(basis));
}

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (double& x : w) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        x = -std::log(u);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.index(i)]);
    return p;
}

}  // namespace qdeph
