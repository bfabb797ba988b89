// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qdeph/channels.hpp"
#include "qdeph/classical_structure.hpp"
#include "qdeph/cli.hpp"
#include "qdeph/metrology.hpp"
#include "qdeph/protocols.hpp"
#include "qdeph/random.hpp"

using namespace qdeph;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds, 0 = none
    std::function<Outcome()> body;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::vector<double> random_angles(Rng& rng, std::size_t d) {
    std::vector<double> p(d);
    for (double& x : p) x = 2.0 * std::numbers::pi * rng.uniform();
    return p;
}

Outcome axiom_suite() {
    Rng rng(1001);
    double worst = 0.0;
    std::size_t count = 0;
    for (std::size_t d = 2; d <= 5; ++d) {
        worst = std::max(worst, verify_axioms(computational_structure(d)).max());
        ++count;
        for (int t = 0; t < 20; ++t) {
            worst = std::max(worst, verify_axioms(make_classical_structure(haar_unitary(rng, d))).max());
            ++count;
        }
    }
    return {worst < 1e-10, std::to_string(count) + " structures, max error " + fmt(worst)};
}

Outcome operator_equivalence() {
    Rng rng(1002);
    double worst = 0.0;
    std::size_t checks = 0;
    for (std::size_t d = 2; d <= 4; ++d) {
        for (std::size_t n = 2; n <= 6; ++n) {
            for (int t = 0; t < 50; ++t) {
                const ClassicalStructure cs = make_classical_structure(haar_unitary(rng, d));
                std::vector<ComplexMatrix> ops;
                for (std::size_t i = 0; i < n; ++i) ops.push_back(random_diagonal_unitary(rng, cs.basis()));
                const ComplexMatrix par = parallel_operator({cs, ops, identity_permutation(n)});

                std::vector<std::vector<std::size_t>> perms;
                if (n <= 4) {
                    std::vector<std::size_t> p = identity_permutation(n);
                    do perms.push_back(p);
                    while (std::next_permutation(p.begin(), p.end()));
                } else {
                    for (int k = 0; k < 10; ++k) perms.push_back(random_permutation(rng, n));
                }
                for (const auto& p : perms) {
                    const OperatorProtocolSpec spec{cs, ops, p};
                    worst = std::max(worst, max_abs_diff(par, sequential_operator(spec)));
                    ++checks;
                }
                worst = std::max(worst, check_equivalence(OperatorProtocolSpec{cs, ops, perms.back()}, 1e-10).max_abs_deviation);
            }
        }
    }
    return {worst < 1e-10, std::to_string(checks) + " permutation checks, max deviation " + fmt(worst)};
}

Outcome channel_equivalence() {
    Rng rng(1003);
    double worst = 0.0, worst_trace = 0.0;
    std::size_t checks = 0;
    for (std::size_t d = 2; d <= 3; ++d) {
        for (std::size_t n = 2; n <= 4; ++n) {
            for (int t = 0; t < 50; ++t) {
                const ClassicalStructure cs = make_classical_structure(haar_unitary(rng, d));
                std::vector<CorrelationMatrix> bs;
                for (std::size_t i = 0; i < n; ++i)
                    bs.push_back(dephasing_family_B({d, random_angles(rng, d), random_simplex(rng, d)}));
                const ChannelProtocolSpec spec{cs, bs, random_permutation(rng, n), random_density_matrix(rng, d)};
                const EquivalenceReport r = check_equivalence(spec, 1e-10);
                worst = std::max(worst, r.max_abs_deviation);
                worst_trace = std::max(worst_trace, std::abs(trace(r.parallel_result) - 1.0));
                worst_trace = std::max(worst_trace, std::abs(trace(r.sequential_result) - 1.0));
                ++checks;
            }
        }
    }
    return {worst < 1e-10 && worst_trace <= 1e-8, std::to_string(checks) + " specs, max deviation " + fmt(worst) +
                                                      ", max trace defect " + fmt(worst_trace)};
}

Outcome schur_kraus() {
    Rng rng(1004);
    double worst = 0.0, worst_pop = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 5);
        const ClassicalStructure cs = make_classical_structure(haar_unitary(rng, d));
        const CorrelationMatrix b(random_unit_diagonal_psd(rng, d));
        const ComplexMatrix rho = random_density_matrix(rng, d);
        const ComplexMatrix direct = apply_schur(cs, b, rho);
        worst = std::max(worst, max_abs_diff(apply(schur_channel(cs, b), rho), direct));
        const auto before = cs.to_basis(rho).diagonal_entries();
        const auto after = cs.to_basis(direct).diagonal_entries();
        for (std::size_t j = 0; j < d; ++j) worst_pop = std::max(worst_pop, std::abs(before[j] - after[j]));
    }
    return {worst <= 1e-10 && worst_pop <= 1e-12,
            "100 draws, Kraus vs Schur " + fmt(worst) + ", population drift " + fmt(worst_pop)};
}

Outcome qubit_identity() {
    Rng rng(1005);
    const ClassicalStructure q = computational_structure(2);
    double worst = 0.0;
    for (double g : {0.0, 0.25, std::log(2.0), 2.0}) {
        for (double phi : {0.0, 0.7}) {
            const double p = phase_flip_probability(g);
            const double want_p = 0.5 * (1.0 - std::exp(-g));
            worst = std::max(worst, std::abs(p - want_p));
            // U = e^{+iφσ_z/2} written out entrywise.
            const ComplexMatrix u{{std::polar(1.0, 0.5 * phi), 0.0}, {0.0, std::polar(1.0, -0.5 * phi)}};
            const ComplexMatrix z = pauli::z();
            for (int t = 0; t < 10; ++t) {
                const ComplexMatrix rho = random_density_matrix(rng, 2);
                const ComplexMatrix mix = add(scale(rho, 1.0 - p), scale(multiply(multiply(z, rho), z), p));
                const ComplexMatrix want = multiply(multiply(u, mix), dagger(u));
                worst = std::max(worst, max_abs_diff(apply_schur(q, qubit_dephasing_B(g, phi), rho), want));
                worst = std::max(worst, max_abs_diff(apply(phase_flip_channel(g, phi), rho), want));
            }
            worst = std::max(worst, max_abs_diff(choi(schur_channel(q, qubit_dephasing_B(g, phi))),
                                                 choi(phase_flip_channel(g, phi))));
        }
    }
    return {worst <= 1e-12, "8 (gamma, phi) pairs, max deviation " + fmt(worst)};
}

Outcome roots_of_unity() {
    Rng rng(1006);
    double orth = 0.0, diag = 0.0, pure = 0.0;
    for (std::size_t d : {2UL, 3UL, 5UL}) {
        for (int t = 0; t < 10; ++t) {
            const DephasingFamilySpec spec{d, random_angles(rng, d), random_simplex(rng, d)};
            const auto chi = dephasing_family_vectors(spec);
            for (std::size_t s = 0; s < d; ++s)
                for (std::size_t k = 0; k < d; ++k) {
                    const double want = s == k ? std::sqrt(spec.weights[s] * spec.weights[k]) * static_cast<double>(d) : 0.0;
                    orth = std::max(orth, std::abs(inner(chi[s], chi[k]) - want));
                }
            const ComplexMatrix b = dephasing_family_B(spec).matrix();
            for (std::size_t j = 0; j < d; ++j) diag = std::max(diag, std::abs(b(j, j) - 1.0));

            DephasingFamilySpec delta = spec;
            std::fill(delta.weights.begin(), delta.weights.end(), 0.0);
            delta.weights[0] = 1.0;
            const ComplexMatrix rho = random_density_matrix(rng, d);
            const ClassicalStructure cs = computational_structure(d);
            pure = std::max(pure, max_abs_diff(dephasing_family_B(delta).matrix(), pure_phase_B(spec.phases).matrix()));
            const ComplexMatrix u = pure_phase_unitary(spec.phases);
            pure = std::max(pure, max_abs_diff(apply_schur(cs, dephasing_family_B(delta), rho),
                                               multiply(multiply(u, rho), dagger(u))));
        }
    }
    return {orth <= 1e-12 && diag <= 1e-12 && pure <= 1e-12,
            "orthogonality " + fmt(orth) + ", unit diagonal " + fmt(diag) + ", pure-phase limit " + fmt(pure)};
}

Outcome qfi_values() {
    bool ok = true;
    double worst_rel = 0.0, worst_paths = 0.0;
    auto both = [&](const ParametrizedFamily& fam, double want, double rel) {
        const double a = qfi(fam, kDefaultPhi, DerivativeMethod::analytic).value;
        const double f = qfi(fam, kDefaultPhi, DerivativeMethod::finite_difference).value;
        const double e = std::max(std::abs(a - want), std::abs(f - want)) / want;
        worst_rel = std::max(worst_rel, e);
        worst_paths = std::max(worst_paths, std::abs(a - f));
        ok = ok && e <= rel;
    };
    const ComplexMatrix plus = scale(ComplexMatrix::column(std::vector<Complex>{1.0, 1.0}), 1.0 / std::sqrt(2.0));
    both(phase_gate_family(plus), 1.0, 1e-6);
    for (std::size_t n = 2; n <= 4; ++n) both(ghz_family(n, 0.0), static_cast<double>(n * n), 1e-5);
    for (std::size_t n = 2; n <= 6; ++n) both(ramsey_family(n, 0.0), static_cast<double>(n), 1e-6 / static_cast<double>(n));
    ok = ok && worst_paths <= 1e-8;
    return {ok, "max relative error " + fmt(worst_rel) + ", analytic vs finite difference " + fmt(worst_paths)};
}

Outcome noise_equivalence() {
    double worst = 0.0;
    for (double g : {0.0, 0.1, 0.5, 1.0}) {
        for (std::size_t n = 2; n <= 4; ++n) {
            const double par = qfi(ghz_family(n, g), kDefaultPhi).value;
            const double seq = qfi(sequential_family(n, g), kDefaultPhi).value;
            worst = std::max(worst, std::abs(par - seq) / seq);
        }
    }
    return {worst <= 1e-6, "12 (gamma, n) pairs, max relative gap " + fmt(worst)};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Outcome scaling_fit() {
    std::ostringstream out, err;
    const int code = cli::run({"scaling", "--n-max", "8", "--gammas", "0", "--format", "csv"}, out, err);
    if (code != 0) return {false, "scaling command exited " + std::to_string(code) + ": " + err.str()};

    std::vector<double> ln_seq, d_seq, ln_ram, d_ram;
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (cols.size() != 5) return {false, "malformed CSV row: " + line};
        const double n = std::stod(cols[0]);
        const double dphi = std::stod(cols[4]);
        if (cols[1] == "sequential") {
            ln_seq.push_back(std::log(n));
            d_seq.push_back(std::log(dphi));
        } else if (cols[1] == "ramsey") {
            ln_ram.push_back(std::log(n));
            d_ram.push_back(std::log(dphi));
        }
    }
    if (ln_seq.size() != 8 || ln_ram.size() != 8) return {false, "expected 8 rows per protocol"};
    const double s_seq = slope(ln_seq, d_seq);
    const double s_ram = slope(ln_ram, d_ram);
    return {std::abs(s_seq + 1.0) <= 0.01 && std::abs(s_ram + 0.5) <= 0.01,
            "sequential slope " + std::to_string(s_seq) + ", ramsey slope " + std::to_string(s_ram)};
}

Outcome fisher_bounds() {
    const SeparableBoundReport sep = separable_bound_check(3, 200, 1010);
    double max_tr = sep.max_trace_rho_sld;

    Rng rng(1011);
    double worst_violation = 0.0;
    bool ens_ok = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 1 + rng.index(4);
        const std::size_t d = 2 + rng.index(2);
        std::vector<StatePair> fams;
        for (std::size_t j = 0; j < m; ++j) {
            ComplexMatrix h = random_hermitian(rng, d);
            const ComplexMatrix rho = random_density_matrix(rng, d);
            const ComplexMatrix hr = multiply(h, rho);
            const ComplexMatrix drho = hermitian_part(scale(subtract(hr, dagger(hr)), Complex(0.0, -1.0)));
            max_tr = std::max(max_tr, qfi(rho, drho).trace_rho_sld);
            fams.push_back({rho, drho});
        }
        const EnsembleCheck e = qfi_ensemble_check(random_simplex(rng, m), fams);
        worst_violation = std::max(worst_violation, e.violation);
        ens_ok = ens_ok && e.passed;
    }
    const QFIResult ghz = qfi(ghz_family(3, 0.0), kDefaultPhi);
    max_tr = std::max(max_tr, ghz.trace_rho_sld);

    const bool ok = sep.passed && sep.max_qfi <= 3.0 * sep.single_system_bound + 1e-6 && ens_ok && max_tr < 1e-6 &&
                    ghz.value > sep.bound && std::abs(ghz.value - 9.0) < 1e-6;
    return {ok, "separable max " + fmt(sep.max_qfi) + " <= " + fmt(sep.bound) + ", ensemble violation " +
                    fmt(worst_violation) + ", max |Tr rho L| " + fmt(max_tr) + ", GHZ foil " + fmt(ghz.value)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "classical-structure axioms", 5.0, axiom_suite},
        {2, "operator protocol equivalence", 30.0, operator_equivalence},
        {3, "channel protocol equivalence under dephasing", 30.0, channel_equivalence},
        {4, "Schur/Kraus agreement and populations", 0.0, schur_kraus},
        {5, "qubit dephasing equals phase-flip mixture", 0.0, qubit_identity},
        {6, "roots-of-unity dephasing family", 0.0, roots_of_unity},
        {7, "QFI values (single, GHZ, Ramsey)", 10.0, qfi_values},
        {8, "GHZ and sequential QFI agree under noise", 0.0, noise_equivalence},
        {9, "scaling-law slopes", 0.0, scaling_fit},
        {10, "separable, ensemble and SLD bounds", 0.0, fisher_bounds},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            o.passed = false;
            o.detail += ", over time limit " + std::to_string(c.time_limit) + " s";
        }
        std::printf("%s criterion %d: %s (%s; %.2f s)\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.detail.c_str(), secs);
        if (!o.passed) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
