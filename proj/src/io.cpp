#include "gme/io.hpp"

#include <algorithm>
#include <sstream>

#include "gme/errors.hpp"

namespace gme::io {

namespace {

std::vector<int> read_dims(const json& j) {
    if (!j.contains("dims") || !j["dims"].is_array())
        throw ValidationError("missing or invalid \"dims\" array");
    std::vector<int> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer() || d.get<int>() < 1)
            throw ValidationError("\"dims\" must hold positive integers");
        dims.push_back(d.get<int>());
    }
    if (dims.empty()) throw ValidationError("\"dims\" must not be empty");
    return dims;
}

std::size_t linear_index(const json& idx, const std::vector<int>& dims) {
    if (!idx.is_array() || idx.size() != dims.size())
        throw ValidationError("entry \"idx\" must list one 1-based index per mode");
    std::size_t lin = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!idx[k].is_number_integer())
            throw ValidationError("entry indices must be integers");
        const int v = idx[k].get<int>();
        if (v < 1 || v > dims[k]) {
            std::ostringstream os;
            os << "index " << v << " out of range at mode " << k + 1 << " (dimension "
               << dims[k] << ")";
            throw ValidationError(os.str());
        }
        lin = lin * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(v - 1);
    }
    return lin;
}

Vec read_sparse(const json& j, const char* key, const std::vector<int>& dims,
                bool symmetrize) {
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    Vec data(total, 0.0);
    std::vector<bool> seen(total, false);
    if (!j.contains(key)) return data;
    if (!j[key].is_array()) throw ValidationError("entry list must be an array");
    for (const auto& e : j[key]) {
        if (!e.contains("idx") || !e.contains("value"))
            throw ValidationError("each entry needs \"idx\" and \"value\"");
        if (!e["value"].is_number()) throw ValidationError("entry values must be numbers");
        const double v = e["value"].get<double>();
        std::vector<std::size_t> targets;
        if (symmetrize) {
            std::vector<int> idx;
            for (const auto& i : e["idx"]) idx.push_back(i.get<int>());
            if (idx.size() != dims.size())
                throw ValidationError("entry \"idx\" must list one 1-based index per mode");
            std::sort(idx.begin(), idx.end());
            do {
                targets.push_back(linear_index(json(idx), dims));
            } while (std::next_permutation(idx.begin(), idx.end()));
        } else {
            targets.push_back(linear_index(e["idx"], dims));
        }
        for (std::size_t lin : targets) {
            if (seen[lin] && data[lin] != v)
                throw ValidationError("conflicting duplicate entries in input file");
            data[lin] = v;
            seen[lin] = true;
        }
    }
    return data;
}

json sparse_entries(std::span<const double> data, const std::vector<int>& dims) {
    json entries = json::array();
    std::vector<int> idx(dims.size(), 0);
    for (std::size_t lin = 0; lin < data.size(); ++lin) {
        if (data[lin] != 0.0) {
            json one;
            json jidx = json::array();
            for (std::size_t k = 0; k < dims.size(); ++k) jidx.push_back(idx[k] + 1);
            one["idx"] = std::move(jidx);
            one["value"] = data[lin];
            entries.push_back(std::move(one));
        }
        for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return entries;
}

json vec_json(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

LoadedTensor tensor_from_json(const json& j) {
    const std::vector<int> dims = read_dims(j);
    if (j.contains("order")) {
        if (!j["order"].is_number_integer() ||
            j["order"].get<int>() != static_cast<int>(dims.size()))
            throw ValidationError("\"order\" does not match the length of \"dims\"");
    }
    const bool symmetrize = j.value("symmetrize", false);
    const bool square = std::all_of(dims.begin(), dims.end(),
                                    [&](int d) { return d == dims[0]; });
    if (symmetrize && !square)
        throw ValidationError("\"symmetrize\" needs equal dimensions in every mode");
    Vec data = read_sparse(j, "entries", dims, symmetrize);
    LoadedTensor out{GenTensor(dims, data), std::nullopt};
    if (square && dims[0] >= 2) {
        try {
            out.sym = SymTensor(static_cast<int>(dims.size()), dims[0], std::move(data));
        } catch (const ValidationError&) {
            // stays a general tensor
        }
    }
    return out;
}

json tensor_to_json(const GenTensor& a) {
    json j;
    j["order"] = a.order();
    j["dims"] = a.dims();
    j["entries"] = sparse_entries(a.entries(), a.dims());
    return j;
}

json tensor_to_json(const SymTensor& t) {
    json j;
    j["order"] = t.order();
    j["dims"] = std::vector<int>(static_cast<std::size_t>(t.order()), t.dim());
    j["entries"] = sparse_entries(t.entries(), std::vector<int>(
                                      static_cast<std::size_t>(t.order()), t.dim()));
    return j;
}

PureState state_from_json(const json& j) {
    const std::vector<int> dims = read_dims(j);
    Vec amp = read_sparse(j, "amplitudes", dims, false);
    return PureState(dims, std::move(amp), j.value("label", std::string{}));
}

json state_to_json(const PureState& s) {
    json j;
    j["dims"] = s.dims();
    j["amplitudes"] = sparse_entries(s.amplitudes(), s.dims());
    j["label"] = s.label();
    return j;
}

json to_json(const ZEigenpair& p) {
    json j;
    j["lambda"] = p.lambda;
    j["x"] = vec_json(p.x);
    j["residual"] = p.residual;
    return j;
}

json to_json(const ZSpectrum& s) {
    json j;
    j["radius"] = s.radius;
    j["complete"] = s.complete;
    json pairs = json::array();
    for (const auto& p : s.pairs) pairs.push_back(to_json(p));
    j["pairs"] = std::move(pairs);
    j["notes"] = s.notes;
    return j;
}

json to_json(const ShopmTrace& t) {
    json j;
    j["lambdas"] = t.lambdas;
    j["iterations"] = t.iterations;
    j["converged"] = t.converged;
    j["alpha"] = t.alpha_used;
    j["shift_below_guarantee"] = t.shift_below_guarantee;
    j["final"] = to_json(t.final);
    return j;
}

json to_json(const RestartAudit& a) {
    json j;
    j["lambda0"] = a.lambda0;
    json rounds = json::array();
    for (const auto& r : a.rounds) {
        json jr;
        jr["scale_in"] = r.scale_in;
        jr["limits"] = r.limits;
        jr["absolute"] = r.absolute;
        jr["mu"] = r.mu;
        rounds.push_back(std::move(jr));
    }
    j["rounds"] = std::move(rounds);
    j["telescoped"] = a.telescoped;
    j["telescoped_product"] = a.telescoped_product;
    j["warnings"] = a.warnings;
    json maxi = json::array();
    for (const auto& v : a.maximizers) maxi.push_back(vec_json(v));
    j["maximizers"] = std::move(maxi);
    return j;
}

json to_json(const RestartResult& r) {
    json j;
    j["radius"] = r.radius;
    j["pair"] = to_json(r.pair);
    j["audit"] = to_json(r.audit);
    return j;
}

json to_json(const GapEstimate& g) {
    json j;
    j["rho"] = g.rho;
    j["lambda2"] = g.lambda2;
    j["kappa"] = g.kappa;
    j["acc_radius"] = g.acc_radius;
    j["singleton"] = g.singleton;
    return j;
}

json to_json(const SingularTuple& t) {
    json j;
    j["sigma"] = t.sigma;
    json vecs = json::array();
    for (const auto& v : t.vectors) vecs.push_back(vec_json(v));
    j["vectors"] = std::move(vecs);
    j["residual"] = t.residual;
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

json to_json(const EmbedAudit& a) {
    json j;
    j["embedded_dim"] = a.embedded_dim;
    j["scale_factor"] = a.scale_factor;
    j["block_norm_deviation"] = a.block_norm_deviation;
    j["restart"] = to_json(a.restart);
    return j;
}

json to_json(const MeasureResult& r) {
    json j;
    j["G"] = r.G;
    j["E_G"] = r.E_G;
    json w = json::array();
    for (const auto& v : r.witness) w.push_back(vec_json(v));
    j["witness"] = std::move(w);
    j["witness_overlap"] = r.witness_overlap;
    j["maximizer_count"] = r.maximizer_count;
    j["method"] = r.method;
    if (std::holds_alternative<ZSpectrum>(r.audit))
        j["audit"] = to_json(std::get<ZSpectrum>(r.audit));
    else if (std::holds_alternative<RestartAudit>(r.audit))
        j["audit"] = to_json(std::get<RestartAudit>(r.audit));
    else
        j["audit"] = to_json(std::get<EmbedAudit>(r.audit));
    return j;
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a:" << std::hex << h;
    return os.str();
}

}  // namespace gme::io
