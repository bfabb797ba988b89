#include "qdeph/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdeph/json_io.hpp"
#include "qdeph/metrology.hpp"
#include "qdeph/random.hpp"

namespace qdeph::cli {
namespace {

using json_io::Json;

// Scaling-experiment checks use the relative tolerance they are stated at,
// independent of --tol.
constexpr double kScalingRelTol = 1e-6;
constexpr double kQfiTraceTol = 1e-6;
constexpr double kQfiResidualTol = 1e-8;

struct Outcome {
    bool passed = true;
    Json report;
    std::string csv;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) throw CLI::ValidationError("--gammas", "'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("--gammas", "empty list");
    return out;
}

ClassicalStructure structure_for(const RunConfig& c) {
    if (c.basis == "computational") return computational_structure(c.dim);
    if (c.basis == "haar") {
        Rng rng(c.seed);
        return make_classical_structure(haar_unitary(rng, c.dim));
    }
    throw ParseError("--basis must be 'computational' or 'haar', got '" + c.basis + "'");
}

Json header(const RunConfig& c) { return Json{{"schema_version", json_io::kSchemaVersion}, {"command", c.command}}; }

Outcome check_axioms(const RunConfig& c) {
    const ClassicalStructure cs =
        c.input_path ? json_io::structure_from_json(json_io::read_json_file(*c.input_path), c.dim) : structure_for(c);
    const AxiomReport r = verify_axioms(cs);
    Outcome o;
    o.passed = r.max() <= c.tol;
    o.report = header(c);
    o.report["dim"] = cs.dim();
    o.report["basis"] = c.input_path ? "file" : c.basis;
    o.report["errors"] = json_io::report_to_json(r);
    o.report["max_error"] = r.max();
    o.report["tolerance"] = c.tol;
    o.report["passed"] = o.passed;
    o.csv = "axiom,error\n";
    for (auto [name, v] : {std::pair{"associativity", r.associativity_err}, {"isometry", r.isometry_err},
                           {"commutativity", r.commutativity_err}, {"frobenius", r.frobenius_err},
                           {"counit", r.counit_err}}) {
        o.csv += std::string(name) + "," + format_double(v) + "\n";
    }
    return o;
}

Outcome channel(const RunConfig& c) {
    Json spec;
    if (c.input_path) {
        spec = json_io::read_json_file(*c.input_path);
    } else if (c.gamma || c.phi) {
        spec = Json{{"type", "qubit_dephasing"}, {"gamma", c.gamma.value_or(0.0)}, {"phi", c.phi.value_or(0.0)}};
    } else {
        throw ParseError("channel: pass --spec or --gamma/--phi");
    }
    const std::size_t d = json_io::channel_spec_dim(spec);
    RunConfig sized = c;
    sized.dim = d;
    const ClassicalStructure cs =
        spec.contains("basis") ? json_io::structure_from_json(spec.at("basis"), d) : structure_for(sized);
    const QuantumChannel ch = json_io::channel_from_json(spec, cs);
    const CptpReport cptp = is_cptp(ch, std::max(c.tol, kStateTol));
    const ComplexMatrix ch_choi = choi(ch);

    Outcome o;
    o.passed = cptp.passed;
    o.report = header(c);
    o.report["type"] = spec.at("type");
    o.report["dim_in"] = ch.dim_in();
    o.report["dim_out"] = ch.dim_out();
    Json kraus = Json::array();
    for (const ComplexMatrix& k : ch.kraus()) kraus.push_back(json_io::matrix_to_json(k));
    o.report["kraus"] = std::move(kraus);
    o.report["choi"] = json_io::matrix_to_json(ch_choi);
    if (auto b = json_io::correlation_from_json(spec)) o.report["correlation_matrix"] = json_io::matrix_to_json(b->matrix());
    o.report["cptp"] = json_io::report_to_json(cptp);
    o.report["tolerance"] = std::max(c.tol, kStateTol);
    o.report["passed"] = o.passed;

    o.csv = "operator,row,col,re,im\n";
    auto emit = [&](const std::string& name, const ComplexMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                o.csv += name + "," + std::to_string(i) + "," + std::to_string(j) + "," + format_double(m(i, j).real()) +
                         "," + format_double(m(i, j).imag()) + "\n";
    };
    for (std::size_t t = 0; t < ch.kraus().size(); ++t) emit("kraus" + std::to_string(t), ch.kraus()[t]);
    emit("choi", ch_choi);
    return o;
}

Outcome equivalence(const RunConfig& c) {
    if (!c.input_path) throw ParseError("equivalence: --spec is required");
    const json_io::ProtocolSpec spec = json_io::protocol_from_json(json_io::read_json_file(*c.input_path));
    const EquivalenceReport r = std::visit([&](const auto& s) { return check_equivalence(s, c.tol); }, spec);
    Outcome o;
    o.passed = r.passed;
    o.report = header(c);
    o.report.update(json_io::report_to_json(r));
    o.report["protocol"] = std::holds_alternative<OperatorProtocolSpec>(spec) ? "operator" : "channel";
    o.csv = "max_abs_deviation,passed,tolerance\n" + format_double(r.max_abs_deviation) + "," +
            (r.passed ? "true" : "false") + "," + format_double(r.tolerance) + "\n";
    return o;
}

Outcome qfi_command(const RunConfig& c) {
    QFIResult r;
    Json source;
    if (c.input_path) {
        const Json spec = json_io::read_json_file(*c.input_path);
        if (!spec.contains("rho") || !spec.contains("drho")) throw ParseError("qfi: spec needs \"rho\" and \"drho\"");
        const double cutoff = spec.value("cutoff", kSldCutoff);
        r = qfi(json_io::matrix_from_json(spec.at("rho")), json_io::matrix_from_json(spec.at("drho")), cutoff);
        source = Json{{"kind", "matrices"}};
    } else {
        const double gamma = c.gamma.value_or(0.0);
        const double phi = c.phi.value_or(kDefaultPhi);
        ParametrizedFamily fam;
        if (c.protocol == "ramsey") fam = ramsey_family(c.n, gamma);
        else if (c.protocol == "ghz_parallel") fam = ghz_family(c.n, gamma);
        else if (c.protocol == "sequential") fam = sequential_family(c.n, gamma);
        else throw ParseError("qfi: --protocol must be ramsey, ghz_parallel or sequential");
        r = qfi(fam, phi);
        source = Json{{"kind", "family"}, {"protocol", c.protocol}, {"n", c.n}, {"gamma", gamma}, {"phi", phi}};
    }
    Outcome o;
    o.passed = r.trace_rho_sld <= kQfiTraceTol && r.residual <= kQfiResidualTol;
    o.report = header(c);
    o.report["source"] = source;
    o.report["qfi"] = r.value;
    o.report["delta_phi"] = r.value > 0.0 ? Json(1.0 / std::sqrt(r.value)) : Json(nullptr);
    o.report["sld"] = json_io::matrix_to_json(r.sld);
    o.report["trace_rho_sld"] = r.trace_rho_sld;
    o.report["residual"] = r.residual;
    o.report["support_cutoff_used"] = r.support_cutoff_used;
    o.report["method"] = r.method == DerivativeMethod::finite_difference ? "finite_difference" : "analytic_derivative";
    o.report["passed"] = o.passed;
    o.csv = "qfi,delta_phi,trace_rho_sld,residual\n" + format_double(r.value) + "," +
            (r.value > 0.0 ? format_double(1.0 / std::sqrt(r.value)) : std::string("inf")) + "," +
            format_double(r.trace_rho_sld) + "," + format_double(r.residual) + "\n";
    return o;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }

Outcome scaling(const RunConfig& c) {
    ScalingOptions opts;
    if (c.phi) opts.phi = *c.phi;
    const std::vector<ScalingRow> rows = scaling_experiment(c.n_max, c.gammas, c.seed, opts);

    // Rows are grouped by n then protocol; pair ghz and sequential rows per (n, γ).
    bool passed = true;
    Json failures = Json::array();
    for (const ScalingRow& a : rows) {
        if (a.protocol != Protocol::ghz_parallel) continue;
        for (const ScalingRow& b : rows) {
            if (b.protocol == Protocol::sequential && b.n == a.n && b.gamma == a.gamma && !rel_close(a.qfi, b.qfi, kScalingRelTol)) {
                passed = false;
                failures.push_back(Json{{"n", a.n}, {"gamma", a.gamma}, {"check", "ghz_vs_sequential"}});
            }
        }
    }
    for (const ScalingRow& r : rows) {
        if (r.gamma != 0.0) continue;
        const double n = static_cast<double>(r.n);
        const double expected = r.protocol == Protocol::ramsey ? n : n * n;
        if (!rel_close(r.qfi, expected, kScalingRelTol)) {
            passed = false;
            failures.push_back(Json{{"n", r.n}, {"protocol", protocol_name(r.protocol)}, {"check", "noiseless_value"}});
        }
    }

    Outcome o;
    o.passed = passed;
    o.report = header(c);
    o.report["metadata"] = Json{{"seed", c.seed}, {"phi_eval", opts.phi}, {"h", opts.h}, {"cutoff", opts.cutoff},
                                {"n_max", c.n_max}, {"gammas", c.gammas}};
    Json jrows = Json::array();
    o.csv = "n,protocol,gamma,qfi,delta_phi\n";
    for (const ScalingRow& r : rows) {
        jrows.push_back(Json{{"n", r.n}, {"protocol", protocol_name(r.protocol)}, {"gamma", r.gamma}, {"qfi", r.qfi},
                             {"delta_phi", std::isfinite(r.delta_phi) ? Json(r.delta_phi) : Json(nullptr)}});
        o.csv += std::to_string(r.n) + "," + protocol_name(r.protocol) + "," + format_double(r.gamma) + "," +
                 format_double(r.qfi) + "," + format_double(r.delta_phi) + "\n";
    }
    o.report["rows"] = std::move(jrows);
    o.report["failures"] = std::move(failures);
    o.report["relative_tolerance"] = kScalingRelTol;
    o.report["passed"] = passed;
    return o;
}

void emit(const RunConfig& c, const Outcome& o, std::ostream& out) {
    const std::string text = c.output == OutputFormat::json ? o.report.dump(2) + "\n" : o.csv;
    if (c.out_path) {
        std::ofstream f(*c.out_path, std::ios::binary);
        if (!f) throw ParseError("cannot write " + *c.out_path);
        f << text;
        if (!f) throw ParseError("write to " + *c.out_path + " failed");
    } else {
        out << text;
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (!(config.tol > 0.0)) throw ParseError("--tol must be positive");
        Outcome o;
        if (config.command == "check-axioms") o = check_axioms(config);
        else if (config.command == "channel") o = channel(config);
        else if (config.command == "equivalence") o = equivalence(config);
        else if (config.command == "qfi") o = qfi_command(config);
        else if (config.command == "scaling") o = scaling(config);
        else throw ParseError("unknown command '" + config.command + "'");
        emit(config, o, out);
        if (!o.passed) err << config.command << ": check failed\n";
        return o.passed ? kExitPassed : kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitSpecError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Dephasing-channel algebra and metrology checks", "qdeph"};
    app.require_subcommand(1, 1);

    std::string format = "json";
    std::string gammas;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--spec", config.input_path, "JSON spec file");
        sub->add_option("--tol", config.tol, "Pass/fail tolerance");
        sub->add_option("--seed", config.seed, "Random seed");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", config.out_path, "Output file (default stdout)");
    };

    auto* axioms = app.add_subcommand("check-axioms", "Verify the classical-structure identities");
    common(axioms);
    axioms->add_option("--dim", config.dim, "Hilbert space dimension");
    axioms->add_option("--basis", config.basis, "computational or haar");

    auto* chan = app.add_subcommand("channel", "Build a channel and report Kraus, Choi and CPTP data");
    common(chan);
    chan->add_option("--basis", config.basis, "computational or haar");
    chan->add_option("--gamma", config.gamma, "Qubit dephasing rate");
    chan->add_option("--phi", config.phi, "Qubit phase");

    auto* equiv = app.add_subcommand("equivalence", "Compare entangled and sequential protocols");
    common(equiv);

    auto* q = app.add_subcommand("qfi", "Quantum Fisher information of a state family");
    common(q);
    q->add_option("--protocol", config.protocol, "ramsey, ghz_parallel or sequential");
    q->add_option("--n", config.n, "Number of probes / channel uses");
    q->add_option("--gamma", config.gamma, "Dephasing rate");
    q->add_option("--phi", config.phi, "Evaluation phase");

    auto* scal = app.add_subcommand("scaling", "QFI scaling table for the three protocols");
    common(scal);
    scal->add_option("--n-max", config.n_max, "Largest n");
    scal->add_option("--gammas", gammas, "Comma-separated dephasing rates");
    scal->add_option("--phi", config.phi, "Evaluation phase");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        config.command = app.get_subcommands().front()->get_name();
        config.output = format == "csv" ? OutputFormat::csv : OutputFormat::json;
        if (!gammas.empty()) config.gammas = parse_list(gammas);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPassed;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSpecError;
    }
    return execute(config, out, err);
}

}  // namespace qdeph::cli
