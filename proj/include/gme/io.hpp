#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "gme/elim.hpp"
#include "gme/shopm.hpp"
#include "gme/states.hpp"
#include "gme/tensor.hpp"

namespace gme::io {

using nlohmann::json;

/// Tensor file format:
///   {"order": m, "dims": [d1,...,dm],
///    "entries": [{"idx": [i1,...,im], "value": v}, ...],
///    "symmetrize": false}
/// Indices are 1-based; omitted entries are zero. With "symmetrize": true
/// (equal dims only) each listed entry is copied to its whole permutation
/// orbit, so one representative per orbit suffices.
struct LoadedTensor {
    GenTensor gen;
    std::optional<SymTensor> sym;  // present when square and permutation invariant
};

LoadedTensor tensor_from_json(const json& j);
json tensor_to_json(const GenTensor& a);
json tensor_to_json(const SymTensor& t);

/// State file format:
///   {"dims": [...], "amplitudes": [{"idx": [...], "value": v}, ...],
///    "label": "..."}
PureState state_from_json(const json& j);
json state_to_json(const PureState& s);

json to_json(const ZEigenpair& p);
json to_json(const ZSpectrum& s);
json to_json(const ShopmTrace& t);
json to_json(const RestartAudit& a);
json to_json(const RestartResult& r);
json to_json(const GapEstimate& g);
json to_json(const SingularTuple& t);
json to_json(const EmbedAudit& a);
json to_json(const MeasureResult& r);

/// FNV-1a 64-bit digest, used to fingerprint CLI inputs in reports.
std::string digest(std::string_view bytes);

}  // namespace gme::io
