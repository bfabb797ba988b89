#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "qdeph/channels.hpp"
#include "qdeph/classical_structure.hpp"
#include "qdeph/protocols.hpp"

namespace qdeph::json_io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"dim": d, "basis": <matrix> | "computational"} or the bare string "computational"
/// (which then needs `dim_hint`).
ClassicalStructure structure_from_json(const Json& j, std::optional<std::size_t> dim_hint = std::nullopt);

/// Dimension implied by a channel spec.
std::size_t channel_spec_dim(const Json& j);
/// Correlation matrix of a dephasing channel spec; nullopt for {"type": "kraus"}.
std::optional<CorrelationMatrix> correlation_from_json(const Json& j);
/// Any channel spec as Kraus operators; dephasing types are built in `cs`.
QuantumChannel channel_from_json(const Json& j, const ClassicalStructure& cs);

/// "plus" and "maximally_mixed" are taken relative to the structure's basis.
ComplexMatrix input_state_from_json(const Json& j, const ClassicalStructure& cs);

using ProtocolSpec = std::variant<OperatorProtocolSpec, ChannelProtocolSpec>;
/// Channel protocols carry "channels"; operator protocols carry "ops".
ProtocolSpec protocol_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);

Json report_to_json(const EquivalenceReport& r);
Json report_to_json(const AxiomReport& r);
Json report_to_json(const CptpReport& r);

}  // namespace qdeph::json_io
