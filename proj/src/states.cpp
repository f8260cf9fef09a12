#include "gme/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

bool lex_greater(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

}  // namespace

PureState::PureState(std::vector<int> dims, Vec amplitudes, std::string label)
    : dims_(std::move(dims)), amp_(std::move(amplitudes)), label_(std::move(label)) {
    if (dims_.size() < 3)
        throw ValidationError("a multipartite state needs at least three parties");
    std::size_t want = 1;
    for (int d : dims_) {
        if (d < 1) throw ValidationError("party dimensions must be positive");
        want *= static_cast<std::size_t>(d);
    }
    if (amp_.size() != want) {
        std::ostringstream os;
        os << "amplitude array has length " << amp_.size() << ", expected " << want;
        throw ValidationError(os.str());
    }
    double s = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (!std::isfinite(amp_[i])) throw ValidationError("amplitudes must be finite");
        if (amp_[i] < 0.0)
            throw ValidationError(
                "state not nonnegative in the given basis (a basis change search is "
                "out of scope)");
        s += amp_[i] * amp_[i];
    }
    if (std::fabs(1.0 - s) > 1e-6) {
        std::ostringstream os;
        os << "state is not normalized: squared amplitudes sum to " << s;
        throw ValidationError(os.str());
    }
    if (std::fabs(1.0 - s) > 1e-10) renormalized_ = true;
    const double inv = 1.0 / std::sqrt(s);
    for (double& a : amp_) a *= inv;
}

PureState dicke(int m, int k) {
    if (m < 3) throw ValidationError("dicke states need at least three qubits here");
    if (k < 0 || k > m) throw ValidationError("dicke weight k must satisfy 0 <= k <= m");
    const std::size_t total = std::size_t(1) << m;
    Vec amp(total, 0.0);
    const double a = 1.0 / std::sqrt(binom(m, k));
    for (std::size_t s = 0; s < total; ++s) {
        // bit 0 of the basis index encodes |1>, so zeros = m - popcount
        int ones = 0;
        for (int b = 0; b < m; ++b) ones += static_cast<int>((s >> b) & 1u);
        if (m - ones == k) amp[s] = a;
    }
    std::ostringstream label;
    label << "dicke(" << m << "," << k << ")";
    return PureState(std::vector<int>(static_cast<std::size_t>(m), 2), std::move(amp),
                     label.str());
}

PureState ghz(int m) {
    if (m < 3) throw ValidationError("ghz states need at least three qubits here");
    const std::size_t total = std::size_t(1) << m;
    Vec amp(total, 0.0);
    amp.front() = 1.0 / std::sqrt(2.0);
    amp.back() = 1.0 / std::sqrt(2.0);
    std::ostringstream label;
    label << "ghz(" << m << ")";
    return PureState(std::vector<int>(static_cast<std::size_t>(m), 2), std::move(amp),
                     label.str());
}

PureState general_ghz_qutrit(double alpha, double beta, double gamma) {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw ValidationError("qutrit ghz coefficients must be nonnegative");
    const double s = alpha * alpha + beta * beta + gamma * gamma;
    if (std::fabs(1.0 - s) > 1e-10)
        throw ValidationError("qutrit ghz coefficients must have squares summing to 1");
    Vec amp(27, 0.0);
    amp[0] = alpha;                 // (1,1,1)
    amp[9 + 3 + 1] = beta;          // (2,2,2)
    amp[18 + 6 + 2] = gamma;        // (3,3,3)
    return PureState({3, 3, 3}, std::move(amp), "qutrit-ghz");
}

StateTensor to_tensor(const PureState& s) {
    const auto& dims = s.dims();
    const bool equal_dims =
        std::all_of(dims.begin(), dims.end(), [&](int d) { return d == dims[0]; });
    const Vec amp(s.amplitudes().begin(), s.amplitudes().end());
    if (equal_dims && dims[0] >= 2) {
        try {
            return SymTensor(s.parts(), dims[0], amp);
        } catch (const ValidationError&) {
            // not permutation invariant
        }
    }
    return GenTensor(dims, amp);
}

namespace {

struct RadiusOutcome {
    double radius = 0.0;
    Vec vector;
    int maximizer_count = 1;
    std::variant<ZSpectrum, RestartAudit, EmbedAudit> audit;
    std::string method;
};

RadiusOutcome radius_by_elim(const SymTensor& t, double admit_tol) {
    RadiusOutcome out;
    ZSpectrum spec = t.dim() == 2 ? qubit_spectrum(t, admit_tol) : qutrit_spectrum(t, admit_tol);
    out.method = t.dim() == 2 ? "elim-qubit" : "elim-qutrit";
    out.radius = spec.radius;
    int count = 0;
    for (const ZEigenpair& p : spec.pairs)
        if (p.lambda >= spec.radius - 1e-9) ++count;
    out.maximizer_count = std::max(count, 1);
    // the nonnegative spectrum is never empty (the zero tensor reports (0, e1))
    out.vector = spec.pairs.front().x;
    out.audit = std::move(spec);
    return out;
}

RadiusOutcome radius_by_power(const SymTensor& t, const GmOptions& opts) {
    RadiusOutcome out;
    RestartResult rr = restart_radius(t, opts.restarts, opts.shopm, opts.restart);
    out.method = "shopm-restart";
    out.radius = rr.radius;
    out.maximizer_count = std::max<int>(static_cast<int>(rr.audit.maximizers.size()), 1);
    // Witness choice for degenerate maxima: lexicographically largest first.
    out.vector = rr.pair.x;
    for (const Vec& v : rr.audit.maximizers)
        if (lex_greater(v, out.vector)) out.vector = v;
    // Newton polishing can leave roundoff-negative components on boundary
    // eigenvectors; the witness is a nonnegative product state.
    for (double& v : out.vector)
        if (v < 0.0 && v > -1e-9) v = 0.0;
    out.vector = vec_normalized(std::move(out.vector));
    out.audit = std::move(rr.audit);
    return out;
}

double embed_scale(int m) {
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    return std::pow(static_cast<double>(m), 0.5 * m) / fact;
}

}  // namespace

MeasureResult geometric_measure(const PureState& s, const GmOptions& opts) {
    StateTensor tens = to_tensor(s);
    const bool symmetric = std::holds_alternative<SymTensor>(tens);
    const int m = s.parts();

    GmMethod method = opts.method;
    if (method == GmMethod::Auto) {
        if (symmetric) {
            const int n = std::get<SymTensor>(tens).dim();
            method = (n <= 3) ? GmMethod::Elim : GmMethod::Power;
        } else {
            method = GmMethod::Embed;
        }
    }

    MeasureResult result;
    if (method == GmMethod::Elim || method == GmMethod::Power) {
        if (!symmetric)
            throw CapabilityError(
                "elimination and the direct power method need a symmetric state; use "
                "the embedding method");
        const SymTensor& t = std::get<SymTensor>(tens);
        if (method == GmMethod::Elim && t.dim() > 3)
            throw CapabilityError(
                "elimination handles party dimension 2 or 3; use the power method");
        RadiusOutcome out;
        if (method == GmMethod::Elim) {
            if (opts.method == GmMethod::Auto) {
                // under automatic selection, degenerate elimination instances
                // (vanishing resultants) fall back to the power method
                try {
                    out = radius_by_elim(t, 1e-8);
                } catch (const DegenerateError&) {
                    out = radius_by_power(t, opts);
                }
            } else {
                out = radius_by_elim(t, 1e-8);
            }
        } else {
            out = radius_by_power(t, opts);
        }
        result.G = out.radius;
        result.witness.assign(static_cast<std::size_t>(m), out.vector);
        result.witness_overlap = contract_full(t, out.vector);
        result.maximizer_count = out.maximizer_count;
        result.method = out.method;
        result.audit = std::move(out.audit);
    } else {
        // Embedding path; also valid for symmetric states as a cross-check.
        const Vec amp(s.amplitudes().begin(), s.amplitudes().end());
        GenTensor a(s.dims(), amp);
        SymTensor embedded = symmetric_embedding(a);
        RadiusOutcome out = radius_by_power(embedded, opts);
        const double scale = embed_scale(m);
        EmbedAudit audit;
        audit.embedded_dim = embedded.dim();
        audit.scale_factor = scale;
        audit.restart = std::get<RestartAudit>(std::move(out.audit));
        result.G = scale * out.radius;
        result.method = "embedding";
        // Mode vectors from the eigenvector blocks, rescaled by sqrt(m).
        const double target = 1.0 / std::sqrt(static_cast<double>(m));
        std::size_t off = 0;
        for (int k = 0; k < m; ++k) {
            const std::size_t dk = static_cast<std::size_t>(s.dims()[static_cast<std::size_t>(k)]);
            Vec block(out.vector.begin() + static_cast<std::ptrdiff_t>(off),
                      out.vector.begin() + static_cast<std::ptrdiff_t>(off + dk));
            audit.block_norm_deviation = std::max(
                audit.block_norm_deviation, std::fabs(vec_norm(block) - target));
            for (double& v : block)
                if (v < 0.0 && v > -1e-9) v = 0.0;
            result.witness.push_back(vec_normalized(std::move(block)));
            off += dk;
        }
        result.witness_overlap = contract_full(a, result.witness);
        result.maximizer_count = out.maximizer_count;
        result.audit = std::move(audit);
    }
    result.E_G = 1.0 - result.G * result.G;
    return result;
}

SingularTuple singular_radius(const GenTensor& a, const GmOptions& opts,
                              EmbedAudit* audit_out) {
    if (!a.is_nonnegative())
        throw ValidationError("singular radius requires a nonnegative tensor");
    SingularTuple tuple;
    const int m = a.order();
    if (a.is_zero()) {
        tuple.sigma = 0.0;
        for (int d : a.dims()) {
            Vec e(static_cast<std::size_t>(d), 0.0);
            e[0] = 1.0;
            tuple.vectors.push_back(std::move(e));
        }
        tuple.residual = singular_residual(a, 0.0, tuple.vectors);
        tuple.note =
            "zero tensor: 0 is the only singular value; the reported mode vectors are "
            "an arbitrary canonical choice";
        if (audit_out) *audit_out = EmbedAudit{};
        return tuple;
    }
    SymTensor embedded = symmetric_embedding(a);
    RestartResult rr = restart_radius(embedded, opts.restarts, opts.shopm, opts.restart);
    const double scale = embed_scale(m);
    EmbedAudit audit;
    audit.embedded_dim = embedded.dim();
    audit.scale_factor = scale;
    tuple.sigma = scale * rr.radius;
    const double target = 1.0 / std::sqrt(static_cast<double>(m));
    std::size_t off = 0;
    for (int k = 0; k < m; ++k) {
        const std::size_t dk = static_cast<std::size_t>(a.dims()[static_cast<std::size_t>(k)]);
        Vec block(rr.pair.x.begin() + static_cast<std::ptrdiff_t>(off),
                  rr.pair.x.begin() + static_cast<std::ptrdiff_t>(off + dk));
        audit.block_norm_deviation =
            std::max(audit.block_norm_deviation, std::fabs(vec_norm(block) - target));
        for (double& v : block)
            if (v < 0.0 && v > -1e-9) v = 0.0;
        tuple.vectors.push_back(vec_normalized(std::move(block)));
        off += dk;
    }
    tuple.residual = singular_residual(a, tuple.sigma, tuple.vectors);
    audit.restart = std::move(rr.audit);
    if (audit.block_norm_deviation > 1e-6)
        tuple.note =
            "eigenvector blocks deviated from the expected 1/sqrt(m) norms; the "
            "scale-back is unreliable for this input";
    if (audit_out) *audit_out = std::move(audit);
    return tuple;
}

}  // namespace gme
