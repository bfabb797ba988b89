#include "qdeph/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>

#include "qdeph/channels.hpp"
#include "qdeph/protocols.hpp"
#include "qdeph/random.hpp"

namespace qdeph {
namespace {

constexpr double kDerivativeTol = 1e-8;
constexpr double kZeroBlockTol = 1e-8;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void require_register(std::size_t n, const char* what) {
    if (n == 0) throw InvariantError(std::string(what) + ": n must be at least 1");
    if (n >= 64 || (std::size_t{1} << n) > kMaxMetrologyDim) {
        throw BudgetError(std::string(what) + ": 2^" + std::to_string(n) + " exceeds " +
                          std::to_string(kMaxMetrologyDim));
    }
}

ComplexMatrix plus_state() { return ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}; }

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::span<const std::size_t> dims) {
    std::vector<ComplexMatrix> factors;
    for (std::size_t i = 0; i < dims.size(); ++i)
        factors.push_back(i == site ? op : ComplexMatrix::identity(dims[i]));
    return kron_all(factors);
}

// Σ_i A ⊗ … ⊗ dA (site i) ⊗ … ⊗ A
ComplexMatrix product_derivative(std::span<const ComplexMatrix> values, std::span<const ComplexMatrix> derivs) {
    ComplexMatrix total;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<ComplexMatrix> factors(values.begin(), values.end());
        factors[i] = derivs[i];
        ComplexMatrix term = kron_all(factors);
        total = total.empty() ? std::move(term) : add(total, term);
    }
    return total;
}

double real_trace(const ComplexMatrix& m) { return trace(m).real(); }

}  // namespace

ComplexMatrix state_derivative(const ParametrizedFamily& fam, double phi, double h, DerivativeMethod method) {
    if (!(h > 0.0)) throw InvariantError("state_derivative: step must be positive");
    ComplexMatrix d;
    const bool analytic = method == DerivativeMethod::analytic ||
                          (method == DerivativeMethod::automatic && static_cast<bool>(fam.derivative_at));
    if (analytic) {
        if (!fam.derivative_at) throw InvariantError("state_derivative: family has no analytic derivative");
        d = fam.derivative_at(phi);
    } else {
        d = scale(subtract(fam.state_at(phi + h), fam.state_at(phi - h)), 1.0 / (2.0 * h));
    }
    const double herm = hermitian_defect(d);
    if (herm > kDerivativeTol) {
        throw InvariantError("state_derivative: derivative of '" + fam.description + "' is not Hermitian, defect " +
                             sci(herm));
    }
    const double tr = std::abs(trace(d));
    if (tr > kDerivativeTol) {
        throw InvariantError("state_derivative: derivative of '" + fam.description + "' has trace " + sci(tr));
    }
    return d;
}

namespace {

struct SldParts {
    ComplexMatrix l;
    double threshold = 0.0;
    double residual = 0.0;
};

SldParts solve_sld(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff) {
    validate_state(rho, rho.rows());
    if (drho.rows() != rho.rows() || drho.cols() != rho.cols()) {
        throw ShapeError("sld: derivative " + drho.shape() + " does not match state " + rho.shape());
    }
    const double herm = hermitian_defect(drho);
    if (herm > kDerivativeTol) throw InvariantError("sld: derivative is not Hermitian, defect " + sci(herm));
    const double tr = std::abs(trace(drho));
    if (tr > kDerivativeTol) throw InvariantError("sld: derivative has trace " + sci(tr));

    const HermitianEigenDecomposition eig = hermitian_eig(rho, kStateTol);
    const std::vector<double>& lambda = eig.eigenvalues;
    const ComplexMatrix& v = eig.eigenvectors;
    const ComplexMatrix dr = multiply(multiply(dagger(v), hermitian_part(drho)), v);

    SldParts out;
    out.threshold = cutoff * lambda.back();
    const std::size_t d = rho.rows();
    ComplexMatrix l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            const double denom = lambda[j] + lambda[k];
            if (denom > out.threshold) {
                l(j, k) = 2.0 * dr(j, k) / denom;
                out.residual = std::max(out.residual, std::abs(0.5 * l(j, k) * denom - dr(j, k)));
            } else if (std::abs(dr(j, k)) > kZeroBlockTol) {
                throw InvariantError("sld: derivative couples two zero-eigenvalue directions with weight " +
                                     sci(std::abs(dr(j, k))) + "; the family leaves the support of the state");
            }
        }
    }
    out.l = hermitian_part(multiply(multiply(v, l), dagger(v)));
    return out;
}

}  // namespace

ComplexMatrix sld(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff) {
    return solve_sld(rho, drho, cutoff).l;
}

QFIResult qfi(const ComplexMatrix& rho, const ComplexMatrix& drho, double cutoff) {
    SldParts parts = solve_sld(rho, drho, cutoff);
    QFIResult r;
    const ComplexMatrix rho_l = multiply(rho, parts.l);
    r.value = std::max(0.0, real_trace(multiply(rho_l, parts.l)));
    r.trace_rho_sld = std::abs(trace(rho_l));
    r.sld = std::move(parts.l);
    r.support_cutoff_used = parts.threshold;
    r.residual = parts.residual;
    return r;
}

QFIResult qfi(const ParametrizedFamily& fam, double phi, DerivativeMethod method, double h, double cutoff) {
    const bool analytic = method == DerivativeMethod::analytic ||
                          (method == DerivativeMethod::automatic && static_cast<bool>(fam.derivative_at));
    QFIResult r = qfi(fam.state_at(phi), state_derivative(fam, phi, h, method), cutoff);
    r.method = analytic ? DerivativeMethod::analytic : DerivativeMethod::finite_difference;
    return r;
}

ProductCheck qfi_product_check(std::span<const StatePair> states) {
    if (states.empty()) throw InvariantError("qfi_product_check: no factors");
    std::vector<ComplexMatrix> rhos;
    std::vector<ComplexMatrix> drhos;
    std::vector<std::size_t> dims;
    ProductCheck r;
    std::vector<ComplexMatrix> slds;
    for (const StatePair& s : states) {
        rhos.push_back(s.rho);
        drhos.push_back(s.drho);
        dims.push_back(s.rho.rows());
        QFIResult single = qfi(s.rho, s.drho);
        r.summed += single.value;
        slds.push_back(std::move(single.sld));
    }
    const ComplexMatrix rho_p = kron_all(rhos);
    r.direct = qfi(rho_p, product_derivative(rhos, drhos)).value;

    std::vector<ComplexMatrix> embedded;
    for (std::size_t j = 0; j < slds.size(); ++j) embedded.push_back(embed(slds[j], j, dims));
    ComplexMatrix l_p = embedded.front();
    for (std::size_t j = 1; j < embedded.size(); ++j) l_p = add(l_p, embedded[j]);
    r.via_summed_sld = real_trace(multiply(multiply(rho_p, l_p), l_p));
    for (std::size_t j = 0; j < embedded.size(); ++j)
        for (std::size_t k = j + 1; k < embedded.size(); ++k)
            r.max_cross_term =
                std::max(r.max_cross_term, std::abs(trace(multiply(multiply(rho_p, embedded[j]), embedded[k]))));

    r.deviation = std::abs(r.direct - r.summed);
    r.passed = r.deviation <= 1e-8 && r.max_cross_term <= 1e-8;
    return r;
}

EnsembleCheck qfi_ensemble_check(std::span<const double> weights, std::span<const StatePair> families) {
    if (families.empty() || weights.size() != families.size()) {
        throw InvariantError("qfi_ensemble_check: need one weight per family");
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvariantError("qfi_ensemble_check: weights must be non-negative");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw InvariantError("qfi_ensemble_check: weights sum to " + sci(total));

    const std::size_t m = families.size();
    const std::size_t d = families.front().rho.rows();
    ComplexMatrix mix(d, d);
    ComplexMatrix dmix(d, d);
    ComplexMatrix rho_ex(d * m, d * m);
    ComplexMatrix drho_ex(d * m, d * m);
    ComplexMatrix l_ex(d * m, d * m);
    for (std::size_t j = 0; j < m; ++j) {
        const StatePair& f = families[j];
        if (f.rho.rows() != d) throw ShapeError("qfi_ensemble_check: families differ in dimension");
        ComplexMatrix flag(m, m);
        flag(j, j) = 1.0;
        mix = add(mix, scale(f.rho, weights[j]));
        dmix = add(dmix, scale(f.drho, weights[j]));
        rho_ex = add(rho_ex, kron(scale(f.rho, weights[j]), flag));
        drho_ex = add(drho_ex, kron(scale(f.drho, weights[j]), flag));
        l_ex = add(l_ex, kron(sld(f.rho, f.drho), flag));
    }
    EnsembleCheck r;
    r.i_ensemble = qfi(hermitian_part(mix), hermitian_part(dmix)).value;
    r.i_extended = real_trace(multiply(multiply(rho_ex, l_ex), l_ex));
    r.i_extended_direct = qfi(rho_ex, drho_ex).value;
    r.violation = std::max(0.0, r.i_ensemble - r.i_extended);
    r.passed = r.i_ensemble <= r.i_extended + 1e-8;
    return r;
}

SeparableBoundReport separable_bound_check(std::size_t n, std::size_t trials, std::uint64_t seed, double phi) {
    require_register(n, "separable_bound_check");
    Rng rng(seed);
    const std::size_t dim = std::size_t{1} << n;

    // H = Σ_i σ_z^{(i)}/2 is diagonal: entry x gets (#zeros − #ones)/2.
    std::vector<Complex> h_diag(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e += ((x >> i) & 1U) ? -0.5 : 0.5;
        h_diag[x] = e;
    }
    std::vector<Complex> u_diag(dim);
    for (std::size_t x = 0; x < dim; ++x) u_diag[x] = std::polar(1.0, -phi * h_diag[x].real());
    const ComplexMatrix h = ComplexMatrix::diagonal(h_diag);
    const ComplexMatrix u = ComplexMatrix::diagonal(u_diag);

    SeparableBoundReport r;
    r.n = n;
    r.trials = trials;
    r.bound = static_cast<double>(n) * r.single_system_bound;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t components = 1 + rng.index(4);
        const std::vector<double> weights = random_simplex(rng, components);
        ComplexMatrix rho0(dim, dim);
        for (std::size_t c = 0; c < components; ++c) {
            std::vector<ComplexMatrix> factors;
            for (std::size_t i = 0; i < n; ++i) {
                const ComplexMatrix psi = random_unit_vector(rng, 2);
                r.empirical_single_max = std::max(r.empirical_single_max, qfi(phase_gate_family(psi), phi).value);
                factors.push_back(outer(psi, psi));
            }
            rho0 = add(rho0, scale(kron_all(factors), weights[c]));
        }
        const ComplexMatrix rho = hermitian_part(multiply(multiply(u, rho0), dagger(u)));
        const ComplexMatrix hr = multiply(h, rho);
        const ComplexMatrix drho = scale(subtract(hr, dagger(hr)), Complex(0.0, -1.0));
        const QFIResult q = qfi(rho, drho);
        r.max_qfi = std::max(r.max_qfi, q.value);
        r.max_trace_rho_sld = std::max(r.max_trace_rho_sld, q.trace_rho_sld);
    }
    r.passed = r.max_qfi <= r.bound + 1e-6;
    return r;
}

ParametrizedFamily phase_gate_family(const ComplexMatrix& psi) {
    if (psi.rows() != 2 || psi.cols() != 1) throw ShapeError("phase_gate_family: expected a qubit vector, got " + psi.shape());
    const ComplexMatrix rho0 = outer(psi, psi);
    auto state = [rho0](double phi) {
        const ComplexMatrix u{{std::polar(1.0, -0.5 * phi), 0.0}, {0.0, std::polar(1.0, 0.5 * phi)}};
        return hermitian_part(multiply(multiply(u, rho0), dagger(u)));
    };
    ParametrizedFamily fam;
    fam.dim = 2;
    fam.state_at = state;
    fam.derivative_at = [state](double phi) {
        // −i[σ_z/2, ρ]
        const ComplexMatrix hr = multiply(scale(pauli::z(), 0.5), state(phi));
        return scale(subtract(hr, dagger(hr)), Complex(0.0, -1.0));
    };
    fam.description = "qubit phase gate exp(-i phi sigma_z/2)";
    return fam;
}

ComplexMatrix qubit_dephasing_B_derivative(double gamma, double phi) {
    const Complex off = std::exp(Complex(-gamma, -phi));
    return ComplexMatrix{{0.0, Complex(0.0, -1.0) * off}, {Complex(0.0, 1.0) * std::conj(off), 0.0}};
}

ParametrizedFamily ramsey_family(std::size_t n, double gamma) {
    require_register(n, "ramsey_family");
    const ClassicalStructure cs = computational_structure(2);
    const ComplexMatrix plus = plus_state();
    auto single = [cs, plus, gamma](double phi) { return apply_schur(cs, qubit_dephasing_B(gamma, phi), plus); };
    ParametrizedFamily fam;
    fam.dim = std::size_t{1} << n;
    fam.state_at = [single, n](double phi) { return kron_power(single(phi), n); };
    fam.derivative_at = [single, plus, gamma, n](double phi) {
        const ComplexMatrix value = single(phi);
        const ComplexMatrix deriv = schur_product(conj(qubit_dephasing_B_derivative(gamma, phi)), plus);
        const std::vector<ComplexMatrix> values(n, value);
        const std::vector<ComplexMatrix> derivs(n, deriv);
        return product_derivative(values, derivs);
    };
    fam.description = "ramsey n=" + std::to_string(n);
    return fam;
}

ParametrizedFamily ghz_family(std::size_t n, double gamma) {
    require_register(n, "ghz_family");
    const ClassicalStructure cs = computational_structure(2);
    const ComplexMatrix ghz = entangle(cs, plus_state(), n);
    ParametrizedFamily fam;
    fam.dim = std::size_t{1} << n;
    fam.state_at = [cs, ghz, gamma, n](double phi) {
        const std::vector<QuantumChannel> channels(n, schur_channel(cs, qubit_dephasing_B(gamma, phi)));
        return hermitian_part(apply_local_channels(channels, ghz));
    };
    // The local channels act jointly as a Schur product with (B ⊗ … ⊗ B)*.
    fam.derivative_at = [ghz, gamma, n](double phi) {
        const ComplexMatrix b = qubit_dephasing_B(gamma, phi).matrix();
        const std::vector<ComplexMatrix> values(n, b);
        const std::vector<ComplexMatrix> derivs(n, qubit_dephasing_B_derivative(gamma, phi));
        return schur_product(conj(product_derivative(values, derivs)), ghz);
    };
    fam.description = "ghz_parallel n=" + std::to_string(n);
    return fam;
}

ParametrizedFamily sequential_family(std::size_t n, double gamma) {
    if (n == 0) throw InvariantError("sequential_family: n must be at least 1");
    const ClassicalStructure cs = computational_structure(2);
    const ComplexMatrix plus = plus_state();
    ParametrizedFamily fam;
    fam.dim = 2;
    fam.state_at = [cs, plus, gamma, n](double phi) {
        const CorrelationMatrix b = qubit_dephasing_B(gamma, phi);
        ComplexMatrix rho = plus;
        for (std::size_t k = 0; k < n; ++k) rho = apply_schur(cs, b, rho);
        return rho;
    };
    // ∂(B^{∘n}) = n B^{∘(n−1)} ∘ ∂B
    fam.derivative_at = [plus, gamma, n](double phi) {
        const ComplexMatrix b = qubit_dephasing_B(gamma, phi).matrix();
        ComplexMatrix power = ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}};
        for (std::size_t k = 1; k < n; ++k) power = schur_product(power, b);
        const ComplexMatrix db = scale(schur_product(power, qubit_dephasing_B_derivative(gamma, phi)),
                                       static_cast<double>(n));
        return schur_product(conj(db), plus);
    };
    fam.description = "sequential n=" + std::to_string(n);
    return fam;
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::ramsey: return "ramsey";
        case Protocol::ghz_parallel: return "ghz_parallel";
        case Protocol::sequential: return "sequential";
    }
    return "unknown";
}

std::vector<ScalingRow> scaling_experiment(std::size_t n_max, std::span<const double> gammas, std::uint64_t seed,
                                           const ScalingOptions& opts) {
    (void)seed;
    require_register(n_max, "scaling_experiment");
    for (double g : gammas) {
        if (!(g >= 0.0)) throw InvariantError("scaling_experiment: gamma must be non-negative, got " + sci(g));
    }
    std::vector<double> sorted(gammas.begin(), gammas.end());
    std::sort(sorted.begin(), sorted.end());

    constexpr Protocol kProtocols[] = {Protocol::ramsey, Protocol::ghz_parallel, Protocol::sequential};
    std::vector<ScalingRow> rows;
    for (std::size_t n = 1; n <= n_max; ++n)
        for (Protocol p : kProtocols)
            for (double g : sorted) rows.push_back(ScalingRow{n, p, g, 0.0, 0.0});

    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        ScalingRow& row = rows[static_cast<std::size_t>(i)];
        try {
            ParametrizedFamily fam = row.protocol == Protocol::ramsey         ? ramsey_family(row.n, row.gamma)
                                     : row.protocol == Protocol::ghz_parallel ? ghz_family(row.n, row.gamma)
                                                                              : sequential_family(row.n, row.gamma);
            row.qfi = qfi(fam, opts.phi, opts.method, opts.h, opts.cutoff).value;
            row.delta_phi = row.qfi > 0.0 ? 1.0 / std::sqrt(row.qfi) : std::numeric_limits<double>::infinity();
        } catch (...) {
#pragma omp critical(qdeph_scaling_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace qdeph
