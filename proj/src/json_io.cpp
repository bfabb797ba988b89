#include "qdeph/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qdeph::json_io {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where + ": missing key \"" + key + "\"");
    return j.at(key);
}

std::size_t require_size(const Json& j, const char* key, const std::string& where) {
    const Json& v = require(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() <= 0) fail(where + ": \"" + key + "\" must be a positive integer");
    return v.get<std::size_t>();
}

double require_number(const Json& j, const char* key, const std::string& where) {
    const Json& v = require(j, key, where);
    if (!v.is_number()) fail(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

std::vector<double> require_numbers(const Json& j, const char* key, const std::string& where) {
    const Json& v = require(j, key, where);
    if (!v.is_array()) fail(where + ": \"" + key + "\" must be an array of numbers");
    std::vector<double> out;
    for (const Json& x : v) {
        if (!x.is_number()) fail(where + ": \"" + key + "\" must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::string type_of(const Json& j) {
    const Json& t = require(j, "type", "channel spec");
    if (!t.is_string()) fail("channel spec: \"type\" must be a string");
    return t.get<std::string>();
}

// Library errors raised while building objects from parsed values keep their
// type; only JSON-shape problems become ParseError.
template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        fail(where + ": " + e.what());
    }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const Complex& z : m.entries()) entries.push_back(Json::array({z.real(), z.imag()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    const std::string where = "matrix";
    const std::size_t rows = require_size(j, "rows", where);
    const std::size_t cols = require_size(j, "cols", where);
    const Json& entries = require(j, "entries", where);
    if (!entries.is_array()) fail("matrix: \"entries\" must be an array");
    if (entries.size() != rows * cols) {
        fail("matrix: " + std::to_string(entries.size()) + " entries for a " + std::to_string(rows) + "x" +
             std::to_string(cols) + " matrix");
    }
    std::vector<Complex> values;
    values.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Json& e = entries[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            fail("matrix: entry " + std::to_string(i) + " must be a [re, im] pair");
        }
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return ComplexMatrix(rows, cols, std::move(values));
}

ClassicalStructure structure_from_json(const Json& j, std::optional<std::size_t> dim_hint) {
    if (j.is_string()) {
        if (j.get<std::string>() != "computational") fail("basis: unknown shorthand \"" + j.get<std::string>() + "\"");
        if (!dim_hint) fail("basis: \"computational\" needs a dimension");
        return computational_structure(*dim_hint);
    }
    const std::size_t dim = require_size(j, "dim", "basis");
    const Json& basis = require(j, "basis", "basis");
    if (basis.is_string()) return structure_from_json(basis, dim);
    const ComplexMatrix m = matrix_from_json(basis);
    if (m.rows() != dim || m.cols() != dim) fail("basis: matrix is " + m.shape() + ", dim is " + std::to_string(dim));
    return make_classical_structure(m);
}

std::size_t channel_spec_dim(const Json& j) {
    const std::string type = type_of(j);
    if (type == "qubit_dephasing") return 2;
    if (type == "pure_phase" || type == "dephasing_family") {
        const auto phases = require_numbers(j, "phases", type);
        if (phases.empty()) fail(type + ": \"phases\" must not be empty");
        return phases.size();
    }
    if (type == "kraus") {
        const Json& ops = require(j, "ops", "kraus");
        if (!ops.is_array() || ops.empty()) fail("kraus: \"ops\" must be a non-empty array");
        return matrix_from_json(ops.front()).cols();
    }
    fail("channel spec: unknown type \"" + type + "\"");
}

std::optional<CorrelationMatrix> correlation_from_json(const Json& j) {
    const std::string type = type_of(j);
    if (type == "qubit_dephasing") {
        return qubit_dephasing_B(require_number(j, "gamma", type), require_number(j, "phi", type));
    }
    if (type == "pure_phase") return pure_phase_B(require_numbers(j, "phases", type));
    if (type == "dephasing_family") {
        DephasingFamilySpec spec;
        spec.phases = require_numbers(j, "phases", type);
        spec.weights = require_numbers(j, "weights", type);
        spec.dim = spec.phases.size();
        return dephasing_family_B(spec);
    }
    if (type == "kraus") return std::nullopt;
    fail("channel spec: unknown type \"" + type + "\"");
}

QuantumChannel channel_from_json(const Json& j, const ClassicalStructure& cs) {
    if (auto b = correlation_from_json(j)) return schur_channel(cs, *b);
    const Json& ops = require(j, "ops", "kraus");
    if (!ops.is_array() || ops.empty()) fail("kraus: \"ops\" must be a non-empty array");
    std::vector<ComplexMatrix> kraus;
    for (const Json& op : ops) kraus.push_back(matrix_from_json(op));
    return QuantumChannel(std::move(kraus));
}

ComplexMatrix input_state_from_json(const Json& j, const ClassicalStructure& cs) {
    const std::size_t d = cs.dim();
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "plus") {
            const ComplexMatrix u = cs.unit();
            return scale(outer(u, u), 1.0 / static_cast<double>(d));
        }
        if (name == "maximally_mixed") return scale(ComplexMatrix::identity(d), 1.0 / static_cast<double>(d));
        fail("input_state: unknown shorthand \"" + name + "\"");
    }
    return matrix_from_json(j);
}

ProtocolSpec protocol_from_json(const Json& j) {
    return guarded("protocol spec", [&]() -> ProtocolSpec {
        if (!j.is_object()) fail("protocol spec: expected an object");
        const bool has_channels = j.contains("channels");
        const bool has_ops = j.contains("ops");
        if (has_channels == has_ops) fail("protocol spec: exactly one of \"channels\" or \"ops\" is required");

        const Json& list = has_channels ? j.at("channels") : j.at("ops");
        if (!list.is_array() || list.empty()) fail("protocol spec: the channel/operator list must be a non-empty array");

        std::size_t n = list.size();
        if (j.contains("n")) {
            n = require_size(j, "n", "protocol spec");
            if (list.size() != n && list.size() != 1) {
                fail("protocol spec: " + std::to_string(list.size()) + " entries for n = " + std::to_string(n));
            }
        }

        std::optional<std::size_t> dim_hint;
        if (j.contains("dim")) dim_hint = require_size(j, "dim", "protocol spec");
        else if (has_channels) dim_hint = channel_spec_dim(list.front());
        else dim_hint = matrix_from_json(list.front()).rows();
        const ClassicalStructure cs =
            structure_from_json(j.contains("basis") ? j.at("basis") : Json("computational"), dim_hint);

        std::vector<std::size_t> perm = identity_permutation(n);
        if (j.contains("permutation")) {
            const Json& p = j.at("permutation");
            if (!p.is_array()) fail("protocol spec: \"permutation\" must be an array");
            perm.clear();
            for (const Json& x : p) {
                if (!x.is_number_integer() || x.get<long long>() < 0) fail("protocol spec: permutation entries must be non-negative integers");
                perm.push_back(x.get<std::size_t>());
            }
        }

        auto entry = [&](std::size_t i) -> const Json& { return list.size() == 1 ? list.front() : list[i]; };

        if (has_ops) {
            OperatorProtocolSpec spec{cs, {}, perm};
            for (std::size_t i = 0; i < n; ++i) spec.ops.push_back(matrix_from_json(entry(i)));
            return spec;
        }
        std::vector<CorrelationMatrix> correlations;
        for (std::size_t i = 0; i < n; ++i) {
            auto b = correlation_from_json(entry(i));
            if (!b) fail("protocol spec: channel " + std::to_string(i) + " is a raw Kraus channel; protocols need dephasing channels");
            correlations.push_back(std::move(*b));
        }
        const ComplexMatrix input = input_state_from_json(j.contains("input_state") ? j.at("input_state") : Json("plus"), cs);
        return ChannelProtocolSpec{cs, std::move(correlations), perm, input};
    });
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read " + path.string() + ": " + (std::filesystem::exists(path) ? "permission denied or not a file" : "no such file"));
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        fail(path.string() + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json report_to_json(const EquivalenceReport& r) {
    return Json{{"max_abs_deviation", r.max_abs_deviation},
                {"passed", r.passed},
                {"tolerance", r.tolerance},
                {"parallel_result", matrix_to_json(r.parallel_result)},
                {"sequential_result", matrix_to_json(r.sequential_result)}};
}

Json report_to_json(const AxiomReport& r) {
    return Json{{"associativity", r.associativity_err},
                {"isometry", r.isometry_err},
                {"commutativity", r.commutativity_err},
                {"frobenius", r.frobenius_err},
                {"counit", r.counit_err}};
}

Json report_to_json(const CptpReport& r) {
    return Json{{"trace_defect", r.trace_defect}, {"min_choi_eigenvalue", r.min_choi_eigenvalue}, {"passed", r.passed}};
}

}  // namespace qdeph::json_io
