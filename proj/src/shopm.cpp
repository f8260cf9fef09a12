#include "gme/shopm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {

std::uint64_t PositiveUnitSampler::next() {
    // splitmix64; deterministic across platforms
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double PositiveUnitSampler::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double PositiveUnitSampler::normal() {
    const double u1 = std::max(uniform01(), 0x1.0p-53);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec PositiveUnitSampler::positive_unit(int n) {
    Vec x(static_cast<std::size_t>(n));
    while (true) {
        bool ok = true;
        for (double& v : x) {
            v = std::fabs(normal());
            if (v < 1e-12) ok = false;
        }
        if (!ok) continue;
        const double nrm = vec_norm(x);
        if (nrm > 0.0 && std::isfinite(nrm)) {
            for (double& v : x) v /= nrm;
            return x;
        }
    }
}

double default_shift(const SymTensor& t) {
    return static_cast<double>(t.order() - 1) * frobenius_norm(t) + 1e-6;
}

ShopmTrace shopm_run(const SymTensor& t, Vec x0, const ShopmConfig& cfg) {
    if (!t.is_nonnegative())
        throw ValidationError("the shifted power method requires a nonnegative tensor");
    if (static_cast<int>(x0.size()) != t.dim())
        throw ValidationError("start vector length does not match tensor dimension");
    for (double v : x0)
        if (!(v > 0.0))
            throw ValidationError("start vector must be strictly positive componentwise");
    if (cfg.alpha && !(*cfg.alpha > 0.0))
        throw ValidationError("shift alpha must be positive");
    if (!(cfg.tol > 0.0)) throw ValidationError("tolerance must be positive");

    const double alpha = cfg.alpha ? *cfg.alpha : default_shift(t);
    ShopmTrace trace;
    trace.alpha_used = alpha;
    trace.shift_below_guarantee = alpha < default_shift(t) - 1e-12;

    Vec x = vec_normalized(std::move(x0));
    Vec w = contract_once(t, x);
    double lambda = vec_dot(w, x);
    trace.lambdas.push_back(lambda);

    int iter = 0;
    double residual = eigen_residual(t, lambda, x);
    while (residual > cfg.tol && iter < cfg.max_iter) {
        Vec next = w;
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += alpha * x[i];
        x = vec_normalized(std::move(next));
        w = contract_once(t, x);
        lambda = vec_dot(w, x);
        trace.lambdas.push_back(lambda);
        ++iter;
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double d = w[i] - lambda * x[i];
            s += d * d;
        }
        residual = std::sqrt(s);
    }
    trace.iterations = iter;
    trace.converged = residual <= cfg.tol;

    double pl = lambda;
    Vec px = x;
    refine_eigenpair(t, pl, px, 40);
    trace.final.lambda = pl;
    trace.final.x = std::move(px);
    trace.final.residual = eigen_residual(t, trace.final.lambda, trace.final.x);
    return trace;
}

namespace {

SymTensor rescaled(const SymTensor& t, double divisor) {
    Vec e(t.entries().begin(), t.entries().end());
    for (double& v : e) v /= divisor;
    return SymTensor(t.order(), t.dim(), std::move(e));
}

}  // namespace

RestartResult restart_radius(const SymTensor& t, int n_starts, const ShopmConfig& cfg,
                             const RestartOptions& opts) {
    if (n_starts < 1) throw ValidationError("at least one restart is required");
    if (!t.is_nonnegative())
        throw ValidationError("the restart driver requires a nonnegative tensor");

    RestartResult result;
    RestartAudit& audit = result.audit;

    if (t.dim() <= 20) {
        if (!is_irreducible(t))
            audit.warnings.push_back(
                "tensor is reducible: the rescaling driver is only guaranteed for "
                "irreducible inputs; proceeding anyway");
    } else {
        audit.warnings.push_back("reducibility not checked (dimension exceeds 20)");
    }

    PositiveUnitSampler sampler(cfg.seed);
    const double zero_gate = 1e-12 * std::max(1.0, frobenius_norm(t));

    // Pre-round run fixes the initial scale.
    ShopmTrace first = shopm_run(t, sampler.positive_unit(t.dim()), cfg);
    const double lambda0 = first.final.lambda;
    audit.lambda0 = lambda0;
    if (!(lambda0 > zero_gate))
        throw DegenerateError(
            "rescaling undefined: the first power-method limit is zero, which can "
            "only happen for reducible input");

    double product = lambda0;
    Vec best_x = first.final.x;
    double best_abs = lambda0;

    for (int round = 0; round < opts.max_rounds; ++round) {
        const SymTensor scaled = rescaled(t, product);
        RestartRound rec;
        rec.scale_in = product;
        std::vector<Vec> round_vectors;
        for (int i = 0; i < n_starts; ++i) {
            ShopmTrace tr = shopm_run(scaled, sampler.positive_unit(t.dim()), cfg);
            const double mu_i = tr.final.lambda;
            rec.limits.push_back(mu_i);
            rec.absolute.push_back(mu_i * product);
            round_vectors.push_back(tr.final.x);
            if (mu_i * product > best_abs) {
                best_abs = mu_i * product;
                best_x = tr.final.x;
            }
        }
        rec.mu = *std::max_element(rec.limits.begin(), rec.limits.end());
        const double mu = rec.mu;
        audit.rounds.push_back(std::move(rec));

        if (std::fabs(mu - 1.0) <= opts.mu_tol) {
            audit.telescoped = true;
            // Collect the distinct maximizers of the final round.
            const RestartRound& last = audit.rounds.back();
            for (std::size_t i = 0; i < last.limits.size(); ++i) {
                if (last.limits[i] < mu - 1e-9) continue;
                bool known = false;
                for (const Vec& v : audit.maximizers) {
                    double d2 = 0.0;
                    for (std::size_t k = 0; k < v.size(); ++k) {
                        const double d = v[k] - round_vectors[i][k];
                        d2 += d * d;
                    }
                    if (std::sqrt(d2) <= 1e-6) {
                        known = true;
                        break;
                    }
                }
                if (!known) audit.maximizers.push_back(round_vectors[i]);
            }
            break;
        }
        if (!(mu * product > zero_gate))
            throw DegenerateError(
                "rescaling undefined: a round limit collapsed to zero on a reducible "
                "input");
        product *= mu;
    }
    audit.telescoped_product = product;
    if (!audit.telescoped)
        audit.warnings.push_back(
            "the rescaling rounds did not telescope to 1 within the round budget; "
            "reporting the best limit found");

    // Final eigenpair against the original tensor, polished.
    double lambda = contract_full(t, best_x);
    refine_eigenpair(t, lambda, best_x, 60);
    result.pair.lambda = lambda;
    result.pair.residual = eigen_residual(t, lambda, best_x);
    result.pair.x = std::move(best_x);
    result.radius = result.pair.lambda;
    if (audit.maximizers.empty()) audit.maximizers.push_back(result.pair.x);
    return result;
}

GapEstimate gap_estimate(std::span<const double> nonneg_eigenvalues, const SymTensor& t) {
    if (nonneg_eigenvalues.empty())
        throw ValidationError("gap estimate needs at least one eigenvalue");
    std::vector<double> sorted(nonneg_eigenvalues.begin(), nonneg_eigenvalues.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    GapEstimate g;
    g.rho = sorted.front();
    g.singleton = true;
    for (double v : sorted) {
        if (v <= g.rho - 1e-9) {
            g.lambda2 = v;
            g.singleton = false;
            break;
        }
    }
    if (g.singleton) g.lambda2 = 0.0;  // convention; any cap radius works
    g.kappa = 0.5 * (g.rho - g.lambda2);
    const double denom = static_cast<double>(t.order()) * frobenius_norm(t);
    g.acc_radius = denom > 0.0 ? g.kappa / denom : 0.0;
    return g;
}

}  // namespace gme
