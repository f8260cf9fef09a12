#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gme/elim.hpp"
#include "gme/shopm.hpp"
#include "gme/tensor.hpp"

namespace gme {

/// A normalized m-partite pure state with nonnegative amplitudes, stored as
/// a dense amplitude array indexed like GenTensor (1-based product basis in
/// file formats, 0-based internally). Inputs whose squared amplitudes sum
/// within 1e-6 of 1 are renormalized (flagged); larger deviations and any
/// negative amplitude are rejected.
class PureState {
public:
    PureState(std::vector<int> dims, Vec amplitudes, std::string label = {});

    int parts() const noexcept { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const noexcept { return dims_; }
    std::span<const double> amplitudes() const noexcept { return amp_; }
    const std::string& label() const noexcept { return label_; }
    bool was_renormalized() const noexcept { return renormalized_; }

private:
    std::vector<int> dims_;
    Vec amp_;
    std::string label_;
    bool renormalized_ = false;
};

/// Symmetric qubit basis state with equal amplitudes on every basis string
/// containing exactly k zeros (and m-k ones). dicke(3,2) is the W state,
/// dicke(3,1) the inverted W, dicke(m,m) the product state |0...0>.
PureState dicke(int m, int k);

/// (|0...0> + |1...1>)/sqrt(2) on m qubits.
PureState ghz(int m);

/// alpha|111> + beta|222> + gamma|333> on three qutrits; the coefficients
/// must be nonnegative with squares summing to 1 within 1e-10.
PureState general_ghz_qutrit(double alpha, double beta, double gamma);

using StateTensor = std::variant<SymTensor, GenTensor>;

/// Amplitude tensor of the state: a SymTensor when all parties have the
/// same dimension and the amplitudes are permutation invariant, otherwise a
/// GenTensor.
StateTensor to_tensor(const PureState& s);

enum class GmMethod { Auto, Elim, Power, Embed };

struct GmOptions {
    GmMethod method = GmMethod::Auto;
    int restarts = 32;
    ShopmConfig shopm;
    RestartOptions restart;
};

struct EmbedAudit {
    int embedded_dim = 0;
    double scale_factor = 0.0;        // sqrt(m^m)/m!
    double block_norm_deviation = 0.0;  // worst | ||block|| - 1/sqrt(m) |
    RestartAudit restart;
};

/// Everything geometric_measure reports: the maximal product-state overlap
/// G, the measure E_G = 1 - G^2, the nearest product state as one unit
/// vector per party, and a method-specific audit trail.
struct MeasureResult {
    double G = 0.0;
    double E_G = 0.0;
    std::vector<Vec> witness;
    double witness_overlap = 0.0;
    int maximizer_count = 1;
    std::string method;  // "elim-qubit" | "elim-qutrit" | "shopm-restart" | "embedding"
    std::variant<ZSpectrum, RestartAudit, EmbedAudit> audit;
};

/// Geometric measure of entanglement of a nonnegative normalized pure
/// state. Symmetric states use elimination (dimension 2 or 3) or the
/// restarted power method; nonsymmetric states go through the symmetric
/// embedding, whose radius scales back by sqrt(m^m)/m! and whose
/// eigenvector blocks, rescaled by sqrt(m), give the per-party witness.
MeasureResult geometric_measure(const PureState& s, const GmOptions& opts = {});

/// Largest singular value of a nonnegative tensor with its mode vectors,
/// computed through the symmetric embedding. The zero tensor reports
/// sigma = 0 with canonical basis vectors and an explanatory note.
SingularTuple singular_radius(const GenTensor& a, const GmOptions& opts = {},
                              EmbedAudit* audit_out = nullptr);

}  // namespace gme
