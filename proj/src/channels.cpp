#include "qdeph/channels.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace qdeph {
namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void require_dims(const ClassicalStructure& cs, const CorrelationMatrix& b, const char* what) {
    if (cs.dim() != b.dim()) {
        throw ShapeError(std::string(what) + ": correlation matrix dimension " + std::to_string(b.dim()) +
                         " does not match basis dimension " + std::to_string(cs.dim()));
    }
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw ShapeError("QuantumChannel: at least one Kraus operator is required");
    for (const ComplexMatrix& k : kraus_) {
        if (k.rows() != kraus_.front().rows() || k.cols() != kraus_.front().cols()) {
            throw ShapeError("QuantumChannel: Kraus operators have different shapes, " + kraus_.front().shape() +
                             " vs " + k.shape());
        }
    }
}

void validate_state(const ComplexMatrix& rho, std::size_t dim, double tol) {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw ShapeError("invalid state: expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                         rho.shape());
    }
    const double herm = hermitian_defect(rho);
    if (herm > tol) throw InvariantError("invalid state: not Hermitian, defect " + sci(herm));
    const Complex tr = trace(rho);
    if (std::abs(tr - 1.0) > tol) {
        throw InvariantError("invalid state: trace " + sci(tr.real()) + " differs from 1");
    }
    const PsdReport psd = is_psd(rho, tol);
    if (!psd.psd) throw InvariantError("invalid state: not positive, min eigenvalue " + sci(psd.min_eigenvalue));
}

ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& m) {
    if (m.rows() != ch.dim_in() || m.cols() != ch.dim_in()) {
        throw ShapeError("apply: channel input dimension " + std::to_string(ch.dim_in()) + ", operand " + m.shape());
    }
    ComplexMatrix out(ch.dim_out(), ch.dim_out());
    for (const ComplexMatrix& k : ch.kraus()) out = add(out, multiply(multiply(k, m), dagger(k)));
    return out;
}

ComplexMatrix apply(const QuantumChannel& ch, const ComplexMatrix& rho) {
    validate_state(rho, ch.dim_in());
    return hermitian_part(apply_linear(ch, rho));
}

CptpReport is_cptp(const QuantumChannel& ch, double tol) {
    ComplexMatrix sum(ch.dim_in(), ch.dim_in());
    for (const ComplexMatrix& k : ch.kraus()) sum = add(sum, multiply(dagger(k), k));
    CptpReport r;
    r.trace_defect = max_abs_diff(sum, ComplexMatrix::identity(ch.dim_in()));
    r.min_choi_eigenvalue = hermitian_eig(choi(ch), tol).eigenvalues.front();
    r.passed = r.trace_defect <= tol && r.min_choi_eigenvalue >= -tol;
    return r;
}

ComplexMatrix choi(const QuantumChannel& ch) {
    const std::size_t din = ch.dim_in();
    const std::size_t dout = ch.dim_out();
    ComplexMatrix c(din * dout, din * dout);
    for (const ComplexMatrix& k : ch.kraus())
        for (std::size_t j = 0; j < din; ++j)
            for (std::size_t a = 0; a < dout; ++a)
                for (std::size_t l = 0; l < din; ++l)
                    for (std::size_t b = 0; b < dout; ++b) c(j * dout + a, l * dout + b) += k(a, j) * std::conj(k(b, l));
    return c;
}

QuantumChannel lift_operator(const ComplexMatrix& u) { return QuantumChannel({u}); }

QuantumChannel identity_channel(std::size_t d) { return lift_operator(ComplexMatrix::identity(d)); }

CorrelationMatrix::CorrelationMatrix(ComplexMatrix b) : b_(std::move(b)) {
    if (!b_.is_square()) throw ShapeError("CorrelationMatrix: expected a square matrix, got " + b_.shape());
    const double herm = hermitian_defect(b_);
    if (herm > kHermitianTol) throw InvariantError("CorrelationMatrix: not Hermitian, defect " + sci(herm));
    for (std::size_t j = 0; j < b_.rows(); ++j) {
        if (std::abs(b_(j, j) - 1.0) >= kHermitianTol) {
            throw InvariantError("CorrelationMatrix: diagonal entry " + std::to_string(j) +
                                 " is not 1, trace preservation fails");
        }
    }
    const PsdReport psd = is_psd(b_, kStateTol);
    if (!psd.psd) {
        throw InvariantError("CorrelationMatrix: not positive semidefinite, min eigenvalue " + sci(psd.min_eigenvalue));
    }
}

QuantumChannel schur_channel(const ClassicalStructure& cs, const CorrelationMatrix& b) {
    require_dims(cs, b, "schur_channel");
    const HermitianEigenDecomposition eig = hermitian_eig(b.matrix());
    const double top = eig.eigenvalues.back();
    const std::size_t d = b.dim();
    std::vector<ComplexMatrix> kraus;
    // Descending order puts the dominant Kraus operator first.
    for (std::size_t s = d; s-- > 0;) {
        const double lambda = eig.eigenvalues[s];
        if (lambda < kKrausCutoff * top) continue;
        const double amp = std::sqrt(lambda);
        std::vector<Complex> diag(d);
        for (std::size_t j = 0; j < d; ++j) diag[j] = std::conj(amp * eig.eigenvectors(j, s));
        kraus.push_back(cs.from_basis(ComplexMatrix::diagonal(diag)));
    }
    return QuantumChannel(std::move(kraus));
}

ComplexMatrix apply_schur(const ClassicalStructure& cs, const CorrelationMatrix& b, const ComplexMatrix& rho) {
    require_dims(cs, b, "apply_schur");
    validate_state(rho, cs.dim());
    const ComplexMatrix in_basis = cs.to_basis(rho);
    return hermitian_part(cs.from_basis(schur_product(conj(b.matrix()), in_basis)));
}

CorrelationMatrix qubit_dephasing_B(double gamma, double phi) {
    if (!(gamma >= 0.0)) throw InvariantError("qubit_dephasing_B: gamma must be non-negative, got " + sci(gamma));
    const Complex off = std::exp(Complex(-gamma, -phi));
    return CorrelationMatrix(ComplexMatrix{{1.0, off}, {std::conj(off), 1.0}});
}

double phase_flip_probability(double gamma) {
    if (!(gamma >= 0.0)) throw InvariantError("phase_flip_probability: gamma must be non-negative, got " + sci(gamma));
    return -0.5 * std::expm1(-gamma);
}

QuantumChannel phase_flip_channel(double gamma, double phi) {
    const double p = phase_flip_probability(gamma);
    const ComplexMatrix u{{std::polar(1.0, 0.5 * phi), 0.0}, {0.0, std::polar(1.0, -0.5 * phi)}};
    return QuantumChannel({scale(u, std::sqrt(1.0 - p)), scale(multiply(u, pauli::z()), std::sqrt(p))});
}

CorrelationMatrix pure_phase_B(std::span<const double> phases) {
    const std::size_t d = phases.size();
    if (d == 0) throw ShapeError("pure_phase_B: at least one phase is required");
    ComplexMatrix b(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) b(j, k) = j == k ? Complex(1.0) : std::polar(1.0, -(phases[j] - phases[k]));
    return CorrelationMatrix(std::move(b));
}

ComplexMatrix pure_phase_unitary(std::span<const double> phases) {
    std::vector<Complex> diag(phases.size());
    for (std::size_t j = 0; j < phases.size(); ++j) diag[j] = std::polar(1.0, phases[j]);
    return ComplexMatrix::diagonal(diag);
}

void DephasingFamilySpec::validate() const {
    if (dim == 0) throw InvariantError("dephasing family: dimension must be positive");
    if (phases.size() != dim || weights.size() != dim) {
        throw InvariantError("dephasing family: expected " + std::to_string(dim) + " phases and weights, got " +
                             std::to_string(phases.size()) + " and " + std::to_string(weights.size()));
    }
    for (double r : weights) {
        if (!(r >= 0.0)) throw InvariantError("dephasing family: weights must be non-negative");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw InvariantError("dephasing family: weights sum to " + sci(total) + ", not 1");
}

std::vector<ComplexMatrix> dephasing_family_vectors(const DephasingFamilySpec& spec) {
    spec.validate();
    const std::size_t n = spec.dim;
    std::vector<ComplexMatrix> chi;
    chi.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        ComplexMatrix v(n, 1);
        const double amp = std::sqrt(spec.weights[s]);
        for (std::size_t j = 0; j < n; ++j) {
            // ω_j^s reduced mod n keeps the angle small.
            const double root = -2.0 * std::numbers::pi * static_cast<double>((j * s) % n) / static_cast<double>(n);
            v(j, 0) = std::polar(amp, -spec.phases[j] + root);
        }
        chi.push_back(std::move(v));
    }
    return chi;
}

CorrelationMatrix dephasing_family_B(const DephasingFamilySpec& spec) {
    const std::vector<ComplexMatrix> chi = dephasing_family_vectors(spec);
    ComplexMatrix b(spec.dim, spec.dim);
    for (const ComplexMatrix& v : chi) b = add(b, outer(v, v));
    return CorrelationMatrix(hermitian_part(b));
}

std::vector<ComplexMatrix> dephasing_family_kraus(const DephasingFamilySpec& spec) {
    std::vector<ComplexMatrix> kraus;
    for (const ComplexMatrix& chi : dephasing_family_vectors(spec)) kraus.push_back(ComplexMatrix::diagonal(conj(chi).entries()));
    return kraus;
}

}  // namespace qdeph
