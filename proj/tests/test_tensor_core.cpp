#include <doctest.h>

#include <algorithm>

#include "qdeph/random.hpp"
#include "qdeph/tensor_core.hpp"
#include "test_util.hpp"

using namespace qdeph;
using qdeph::test::kI;

TEST_SUITE("tensor_core") {

TEST_CASE("matrix construction rejects bad input") {
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), ShapeError);
    CHECK_THROWS_AS(ComplexMatrix(0, 2), ShapeError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(std::nan(""), 0.0)}), InvariantError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(0.0, INFINITY)}), InvariantError);
    CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), ShapeError);
}

TEST_CASE("multiply") {
    const ComplexMatrix x = pauli::x();
    CHECK(multiply(ComplexMatrix::identity(2), x) == x);
    CHECK(multiply(x, x) == ComplexMatrix::identity(2));

    Rng rng(7);
    const ComplexMatrix a = gaussian_matrix(rng, 3, 3);
    const ComplexMatrix b = gaussian_matrix(rng, 3, 3);
    const ComplexMatrix c = gaussian_matrix(rng, 3, 3);
    CHECK_MATRIX_NEAR(multiply(multiply(a, b), c), multiply(a, multiply(b, c)), 1e-12);
    CHECK_MATRIX_NEAR(multiply(a, b), test::naive_multiply(a, b), 1e-14);

    SUBCASE("shape mismatch names both shapes") {
        try {
            multiply(ComplexMatrix(2, 3), ComplexMatrix(2, 2));
            FAIL("expected ShapeError");
        } catch (const ShapeError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("2x3") != std::string::npos);
            CHECK(msg.find("2x2") != std::string::npos);
        }
    }
}

TEST_CASE("kron") {
    CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
    const ComplexMatrix z = pauli::z();
    const ComplexMatrix expected{{1.0, 0.0, 0.0, 0.0}, {0.0, -1.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};
    CHECK(kron(z, z) == expected);

    Rng rng(11);
    const ComplexMatrix a = gaussian_matrix(rng, 2, 2), b = gaussian_matrix(rng, 2, 2);
    const ComplexMatrix c = gaussian_matrix(rng, 2, 2), d = gaussian_matrix(rng, 2, 2);
    CHECK_MATRIX_NEAR(multiply(kron(a, b), kron(c, d)), kron(multiply(a, c), multiply(b, d)), 1e-12);

    const ComplexMatrix r = gaussian_matrix(rng, 2, 3), s = gaussian_matrix(rng, 3, 2);
    CHECK(kron(r, s) == test::kron_by_definition(r, s));
}

TEST_CASE("dagger") {
    CHECK(dagger(ComplexMatrix::identity(3)) == ComplexMatrix::identity(3));
    CHECK(dagger(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}) == ComplexMatrix{{0.0, 0.0}, {1.0, 0.0}});
    CHECK(dagger(scale(ComplexMatrix::identity(2), kI)) == scale(ComplexMatrix::identity(2), -kI));

    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = gaussian_matrix(rng, 1 + rng.index(5), 1 + rng.index(5));
        CHECK(dagger(dagger(a)) == a);
        const ComplexMatrix b = gaussian_matrix(rng, a.cols(), 1 + rng.index(5));
        CHECK_MATRIX_NEAR(dagger(multiply(a, b)), multiply(dagger(b), dagger(a)), 1e-12);
    }
}

TEST_CASE("schur_product") {
    Rng rng(5);
    const ComplexMatrix rho = random_density_matrix(rng, 3);
    CHECK(schur_product(test::ones(3), rho) == rho);
    const ComplexMatrix masked = schur_product(ComplexMatrix::identity(3), rho);
    CHECK(masked == ComplexMatrix::diagonal(rho.diagonal_entries()));
    CHECK(schur_product(ComplexMatrix{{1.0, 2.0}, {3.0, 4.0}}, ComplexMatrix{{5.0, 6.0}, {7.0, 8.0}}) ==
          ComplexMatrix{{5.0, 12.0}, {21.0, 32.0}});
    CHECK_THROWS_AS(schur_product(ComplexMatrix(2, 2), ComplexMatrix(2, 3)), ShapeError);

    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = gaussian_matrix(rng, 4, 3), b = gaussian_matrix(rng, 4, 3), c = gaussian_matrix(rng, 4, 3);
        CHECK_MATRIX_NEAR(schur_product(a, b), schur_product(b, a), 1e-12);
        CHECK_MATRIX_NEAR(schur_product(schur_product(a, b), c), schur_product(a, schur_product(b, c)), 1e-12);
    }
}

TEST_CASE("hermitian_eig") {
    const auto id = hermitian_eig(ComplexMatrix::identity(3));
    CHECK(id.eigenvalues == std::vector<double>{1.0, 1.0, 1.0});

    const auto z = hermitian_eig(pauli::z());
    CHECK(z.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));

    Rng rng(17);
    for (std::size_t d = 1; d <= 16; ++d) {
        const ComplexMatrix a = random_hermitian(rng, d);
        const auto eig = hermitian_eig(a);
        CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
        const ComplexMatrix& v = eig.eigenvectors;
        CHECK_MATRIX_NEAR(multiply(dagger(v), v), ComplexMatrix::identity(d), 1e-10);
        std::vector<Complex> lambda(eig.eigenvalues.begin(), eig.eigenvalues.end());
        CHECK_MATRIX_NEAR(multiply(multiply(v, ComplexMatrix::diagonal(lambda)), dagger(v)), a, 1e-10);
    }

    SUBCASE("non-Hermitian input is rejected with its asymmetry") {
        try {
            hermitian_eig(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}});
            FAIL("expected InvariantError");
        } catch (const InvariantError& e) {
            CHECK(std::string(e.what()).find("1.000e+00") != std::string::npos);
        }
    }
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), ShapeError);
}

TEST_CASE("partial_trace") {
    Rng rng(23);
    const ComplexMatrix rho = random_density_matrix(rng, 2);
    const ComplexMatrix sigma = scale(random_density_matrix(rng, 2), 3.0);
    const std::vector<std::size_t> dims{2, 2};

    const std::vector<std::size_t> keep0{0}, keep1{1}, both{0, 1};
    CHECK_MATRIX_NEAR(partial_trace(kron(rho, sigma), dims, keep0), scale(rho, trace(sigma)), 1e-12);
    CHECK_MATRIX_NEAR(partial_trace(kron(rho, sigma), dims, keep1), scale(sigma, trace(rho)), 1e-12);
    const ComplexMatrix m = gaussian_matrix(rng, 4, 4);
    CHECK(partial_trace(m, dims, both) == m);

    SUBCASE("trace preserved on three factors") {
        const std::vector<std::size_t> dims3{2, 3, 2};
        const ComplexMatrix big = gaussian_matrix(rng, 12, 12);
        for (const auto& keep : std::vector<std::vector<std::size_t>>{{}, {0}, {1}, {2}, {0, 2}, {1, 2}}) {
            CHECK(std::abs(trace(partial_trace(big, dims3, keep)) - trace(big)) < 1e-12);
        }
    }

    SUBCASE("middle factor traced matches explicit index sum") {
        const std::vector<std::size_t> dims3{2, 3, 2};
        const ComplexMatrix big = gaussian_matrix(rng, 12, 12);
        const std::vector<std::size_t> keep{0, 2};
        const ComplexMatrix got = partial_trace(big, dims3, keep);
        ComplexMatrix want(4, 4);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t a2 = 0; a2 < 2; ++a2)
                    for (std::size_t c2 = 0; c2 < 2; ++c2)
                        for (std::size_t b = 0; b < 3; ++b)
                            want(a * 2 + c, a2 * 2 + c2) += big(a * 6 + b * 2 + c, a2 * 6 + b * 2 + c2);
        CHECK_MATRIX_NEAR(got, want, 1e-14);
    }

    const std::vector<std::size_t> bad_dims{2, 3};
    CHECK_THROWS_AS(partial_trace(m, bad_dims, keep0), ShapeError);
    const std::vector<std::size_t> bad_keep{2};
    CHECK_THROWS_AS(partial_trace(m, dims, bad_keep), ShapeError);
}

TEST_CASE("is_psd") {
    CHECK(is_psd(ComplexMatrix::identity(3)).psd);
    const PsdReport neg = is_psd(ComplexMatrix{{1.0, 0.0}, {0.0, -0.5}});
    CHECK_FALSE(neg.psd);
    CHECK(neg.min_eigenvalue == doctest::Approx(-0.5));

    Rng rng(29);
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix b = gaussian_matrix(rng, 4, 4);
        CHECK(is_psd(multiply(dagger(b), b)).psd);
    }
    CHECK_THROWS_AS(is_psd(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), InvariantError);
}

}  // TEST_SUITE
