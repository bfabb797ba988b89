#include "qdeph/protocols.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "qdeph/kernels.hpp"

namespace qdeph {
namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::size_t register_dim(std::size_t d, std::size_t n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= d;
        if (total > kMaxProtocolDim) {
            throw BudgetError("protocol register dimension " + std::to_string(d) + "^" + std::to_string(n) +
                              " exceeds " + std::to_string(kMaxProtocolDim));
        }
    }
    return total;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::vector<std::size_t> identity_permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

void validate_permutation(std::span<const std::size_t> perm, std::size_t n) {
    if (perm.size() != n) {
        throw InvariantError("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                             std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) throw InvariantError("permutation is not a bijection on 0.." + std::to_string(n - 1));
        seen[p] = true;
    }
}

void validate(const OperatorProtocolSpec& spec, const ProtocolOptions& opts) {
    if (spec.ops.empty()) throw InvariantError("operator protocol: at least one operator is required");
    validate_permutation(spec.permutation, spec.ops.size());
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        const ComplexMatrix& f = spec.ops[i];
        if (f.rows() != spec.cs.dim() || f.cols() != spec.cs.dim()) {
            throw ShapeError("operator protocol: operator " + std::to_string(i) + " is " + f.shape() +
                             ", basis dimension is " + std::to_string(spec.cs.dim()));
        }
        if (opts.check_commutation) {
            const double defect = commutation_defect(spec.cs, f);
            if (defect > kCommutationTol) {
                throw InvariantError("operator protocol: operator " + std::to_string(i) +
                                     " does not commute with the copy map, defect " + sci(defect));
            }
        }
    }
}

void validate(const ChannelProtocolSpec& spec) {
    if (spec.correlations.empty()) throw InvariantError("channel protocol: at least one channel is required");
    validate_permutation(spec.permutation, spec.correlations.size());
    for (std::size_t i = 0; i < spec.correlations.size(); ++i) {
        if (spec.correlations[i].dim() != spec.cs.dim()) {
            throw ShapeError("channel protocol: channel " + std::to_string(i) + " has dimension " +
                             std::to_string(spec.correlations[i].dim()) + ", basis dimension is " +
                             std::to_string(spec.cs.dim()));
        }
    }
    validate_state(spec.input_state, spec.cs.dim());
}

ComplexMatrix parallel_operator(const OperatorProtocolSpec& spec, const ProtocolOptions& opts) {
    validate(spec, opts);
    const std::size_t d = spec.cs.dim();
    const std::size_t n = spec.ops.size();
    register_dim(d, n);
    const ComplexMatrix copy_n = nfold_copy(spec.cs, n);
    ComplexMatrix m = copy_n;
    for (std::size_t i = 0; i < n; ++i) m = kernels::omp::apply_site(spec.ops[i], m, ipow(d, i), ipow(d, n - 1 - i));
    return multiply(dagger(copy_n), m);
}

ComplexMatrix sequential_operator(const OperatorProtocolSpec& spec, const ProtocolOptions& opts) {
    validate(spec, opts);
    ComplexMatrix out = ComplexMatrix::identity(spec.cs.dim());
    for (std::size_t k : spec.permutation) out = multiply(spec.ops[k], out);
    return out;
}

ComplexMatrix entangle(const ClassicalStructure& cs, const ComplexMatrix& rho, std::size_t n) {
    register_dim(cs.dim(), n);
    const ComplexMatrix copy_n = nfold_copy(cs, n);
    return multiply(multiply(copy_n, rho), dagger(copy_n));
}

ComplexMatrix disentangle(const ClassicalStructure& cs, const ComplexMatrix& sigma, std::size_t n) {
    register_dim(cs.dim(), n);
    const ComplexMatrix copy_n = nfold_copy(cs, n);
    return multiply(multiply(dagger(copy_n), sigma), copy_n);
}

ComplexMatrix apply_local_channels(const std::vector<QuantumChannel>& channels, const ComplexMatrix& sigma) {
    const std::size_t n = channels.size();
    if (n == 0) return sigma;
    const std::size_t d = channels.front().dim_in();
    for (const QuantumChannel& ch : channels) {
        if (ch.dim_in() != d || ch.dim_out() != d) throw ShapeError("apply_local_channels: sites must share one dimension");
    }
    if (!sigma.is_square() || sigma.rows() != register_dim(d, n)) {
        throw ShapeError("apply_local_channels: register operand " + sigma.shape() + " does not match " +
                         std::to_string(d) + "^" + std::to_string(n));
    }
    ComplexMatrix state = sigma;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t left = ipow(d, i);
        const std::size_t right = ipow(d, n - 1 - i);
        ComplexMatrix next(state.rows(), state.cols());
        for (const ComplexMatrix& k : channels[i].kraus()) {
            // K σ K† = (K (K σ)†)†
            const ComplexMatrix ks = kernels::omp::apply_site(k, state, left, right);
            next = add(next, dagger(kernels::omp::apply_site(k, dagger(ks), left, right)));
        }
        state = std::move(next);
    }
    return state;
}

ComplexMatrix parallel_channel(const ChannelProtocolSpec& spec) {
    validate(spec);
    const std::size_t n = spec.correlations.size();
    std::vector<QuantumChannel> channels;
    channels.reserve(n);
    for (const CorrelationMatrix& b : spec.correlations) channels.push_back(schur_channel(spec.cs, b));

    const ComplexMatrix out = disentangle(spec.cs, apply_local_channels(channels, entangle(spec.cs, spec.input_state, n)), n);
    const double tr_err = std::abs(trace(out) - 1.0);
    if (tr_err > kStateTol) {
        throw InvariantError("parallel_channel: disentangled output has trace error " + sci(tr_err));
    }
    return hermitian_part(out);
}

ComplexMatrix sequential_channel(const ChannelProtocolSpec& spec) {
    validate(spec);
    ComplexMatrix rho = spec.input_state;
    for (std::size_t k : spec.permutation) rho = apply_schur(spec.cs, spec.correlations[k], rho);
    return rho;
}

EquivalenceReport check_equivalence(const OperatorProtocolSpec& spec, double tol, const ProtocolOptions& opts) {
    EquivalenceReport r;
    r.parallel_result = parallel_operator(spec, opts);
    r.sequential_result = sequential_operator(spec, opts);
    r.max_abs_deviation = max_abs_diff(r.parallel_result, r.sequential_result);
    r.tolerance = tol;
    r.passed = r.max_abs_deviation <= tol;
    return r;
}

EquivalenceReport check_equivalence(const ChannelProtocolSpec& spec, double tol) {
    EquivalenceReport r;
    r.parallel_result = parallel_channel(spec);
    r.sequential_result = sequential_channel(spec);
    r.max_abs_deviation = max_abs_diff(r.parallel_result, r.sequential_result);
    r.tolerance = tol;
    r.passed = r.max_abs_deviation <= tol;
    return r;
}

}  // namespace qdeph
