#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gme/tensor.hpp"

namespace gme {

/// Configuration of a single shifted power-method run and of the restart
/// driver. `alpha` empty means: use default_shift of the tensor being
/// iterated (recomputed after every rescaling); an explicit value must be
/// positive.
struct ShopmConfig {
    std::optional<double> alpha;
    double tol = 1e-11;
    int max_iter = 20000;
    std::uint64_t seed = 0;
};

/// Iteration record of one shifted power-method run. `lambdas` starts at
/// lambda_0 = T x0^m and, for a shift of at least default_shift, is
/// nondecreasing up to roundoff. `final` is the last iterate polished by a
/// few Newton steps; `lambdas` keeps the raw sequence.
struct ShopmTrace {
    std::vector<double> lambdas;
    ZEigenpair final;
    int iterations = 0;
    bool converged = false;
    double alpha_used = 0.0;
    bool shift_below_guarantee = false;
};

/// Shift that provably dominates (m-1) * rho(T): since rho is at most the
/// Frobenius norm, (m-1) * ||T||_F + 1e-6 is always admissible.
double default_shift(const SymTensor& t);

/// One shifted power-method run from the strictly positive unit vector x0:
///   x <- normalize(T x^{m-1} + alpha x),   lambda <- T x^m,
/// stopping when ||T x^{m-1} - lambda x|| <= tol or max_iter is reached.
ShopmTrace shopm_run(const SymTensor& t, Vec x0, const ShopmConfig& cfg);

struct RestartRound {
    double scale_in = 1.0;              // cumulative rescaling entering the round
    std::vector<double> limits;         // per-start limits on the rescaled tensor
    std::vector<double> absolute;       // the same limits in original-tensor units
    double mu = 0.0;                    // max of `limits`
};

struct RestartAudit {
    double lambda0 = 0.0;               // the pre-round run of the driver
    std::vector<RestartRound> rounds;
    bool telescoped = false;
    double telescoped_product = 0.0;    // product of all rescalings
    std::vector<std::string> warnings;
    std::vector<Vec> maximizers;        // distinct eigenvectors attaining the radius
};

struct RestartResult {
    double radius = 0.0;
    ZEigenpair pair;
    RestartAudit audit;
};

struct RestartOptions {
    int max_rounds = 50;
    double mu_tol = 1e-10;
};

/// Rescaling restart driver: one run fixes the scale lambda_0, then rounds
/// of n_starts fresh strictly positive starts iterate the rescaled tensor
/// until the round maximum mu satisfies |mu - 1| <= mu_tol, at which point
/// the product of rescalings is the radius estimate. Deterministic given
/// (cfg.seed, n_starts). Reducible inputs are allowed with a warning, but a
/// vanishing limit makes the rescaling undefined and raises DegenerateError.
RestartResult restart_radius(const SymTensor& t, int n_starts, const ShopmConfig& cfg,
                             const RestartOptions& opts = {});

/// Attraction-cap estimate built from the two largest distinct nonnegative
/// eigenvalues: kappa = (rho - lambda2) / 2 and acc_radius =
/// kappa / (m ||T||_F). Any strictly positive unit start within acc_radius
/// of a radius eigenvector yields lambda_0 within kappa of the radius and
/// hence a run converging to it. A single-eigenvalue input sets the
/// singleton flag with the lambda2 = 0 convention: any cap radius works in
/// that case.
struct GapEstimate {
    double rho = 0.0;
    double lambda2 = 0.0;
    double kappa = 0.0;
    double acc_radius = 0.0;
    bool singleton = false;
};

GapEstimate gap_estimate(std::span<const double> nonneg_eigenvalues, const SymTensor& t);

/// Deterministic generator for strictly positive unit vectors (componentwise
/// |N(0,1)|, normalized). Shared by the restart driver and the tests.
class PositiveUnitSampler {
public:
    explicit PositiveUnitSampler(std::uint64_t seed) : state_(seed) {}
    double uniform01();
    double normal();
    Vec positive_unit(int n);

private:
    std::uint64_t next();
    std::uint64_t state_;
};

}  // namespace gme
