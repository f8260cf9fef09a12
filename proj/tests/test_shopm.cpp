#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gme/elim.hpp"
#include "gme/errors.hpp"
#include "gme/shopm.hpp"
#include "oracle.hpp"

using gme::ShopmConfig;
using gme::ShopmTrace;
using gme::SymTensor;
using gme::Vec;

namespace {

SymTensor w_tensor() {
    Vec e(8, 0.0);
    e[1] = e[2] = e[4] = 1.0 / std::sqrt(3.0);
    return SymTensor(3, 2, std::move(e));
}

SymTensor ghz_tensor(int m) {
    const std::size_t total = std::size_t(1) << m;
    Vec e(total, 0.0);
    e.front() = e.back() = 1.0 / std::sqrt(2.0);
    return SymTensor(m, 2, std::move(e));
}

}  // namespace

TEST_CASE("default shift values") {
    CHECK(gme::default_shift(w_tensor()) == doctest::Approx(2.0 + 1e-6).epsilon(1e-12));
    CHECK(gme::default_shift(SymTensor::zeros(3, 2)) == doctest::Approx(1e-6));
    Vec e(16, 0.0);
    e[0] = 5.0;
    CHECK(gme::default_shift(SymTensor(4, 2, e)) ==
          doctest::Approx(15.0 + 1e-6).epsilon(1e-12));
}

TEST_CASE("shopm converges to the w state eigenpair") {
    ShopmConfig cfg;
    const ShopmTrace tr = gme::shopm_run(w_tensor(), Vec{0.8, 0.6}, cfg);
    CHECK(tr.converged);
    CHECK(tr.final.lambda == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(tr.final.x[0] == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-8));
    CHECK(tr.final.x[1] == doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-8));
    CHECK(tr.final.residual <= cfg.tol);
    CHECK_FALSE(tr.shift_below_guarantee);
}

TEST_CASE("shopm stops immediately on a fixed point") {
    Vec e(8, 0.0);
    e[0] = 1.0;
    const SymTensor t(3, 2, e);
    ShopmConfig cfg;
    // strictly positive start near e1; the iteration still has to converge
    const ShopmTrace tr = gme::shopm_run(t, Vec{0.999, 0.001}, cfg);
    CHECK(tr.converged);
    CHECK(tr.final.residual <= cfg.tol);
    const gme::ZSpectrum spec = gme::qubit_spectrum(t);
    bool member = false;
    for (const auto& p : spec.pairs)
        if (std::fabs(p.lambda - tr.final.lambda) <= 1e-8) member = true;
    CHECK(member);
}

TEST_CASE("shopm input validation") {
    ShopmConfig cfg;
    CHECK_THROWS_AS(gme::shopm_run(w_tensor(), Vec{0.8, 0.0}, cfg), gme::ValidationError);
    CHECK_THROWS_AS(gme::shopm_run(w_tensor(), Vec{0.8, -0.1}, cfg), gme::ValidationError);
    cfg.alpha = -1.0;
    CHECK_THROWS_AS(gme::shopm_run(w_tensor(), Vec{0.8, 0.6}, cfg), gme::ValidationError);
    Vec e(8, 0.0);
    e[0] = -0.5;
    cfg.alpha.reset();
    CHECK_THROWS_AS(gme::shopm_run(SymTensor(3, 2, e), Vec{0.8, 0.6}, cfg),
                    gme::ValidationError);
}

TEST_CASE("ghz runs always end at an eliminated eigenvalue") {
    const SymTensor t = ghz_tensor(3);
    const gme::ZSpectrum spec = gme::qubit_spectrum(t);  // {1/sqrt(2), 1/2}
    ShopmConfig cfg;
    gme::PositiveUnitSampler sampler(1234);
    for (int run = 0; run < 100; ++run) {
        const ShopmTrace tr = gme::shopm_run(t, sampler.positive_unit(2), cfg);
        bool member = false;
        for (const auto& p : spec.pairs)
            if (std::fabs(tr.final.lambda - p.lambda) <= 1e-8) member = true;
        CHECK(member);
    }
}

TEST_CASE("lambda sequence is nondecreasing at the default shift") {
    std::mt19937_64 rng(5811);
    gme::PositiveUnitSampler sampler(999);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 3 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const SymTensor t = oracle::random_sym(m, n, rng);
        ShopmConfig cfg;
        const ShopmTrace tr = gme::shopm_run(t, sampler.positive_unit(n), cfg);
        for (std::size_t k = 1; k < tr.lambdas.size(); ++k)
            CHECK(tr.lambdas[k] >= tr.lambdas[k - 1] - 1e-12);
        CHECK(tr.converged);
    }
}

TEST_CASE("a deliberately low shift is flagged") {
    ShopmConfig cfg;
    cfg.alpha = 0.01;
    cfg.max_iter = 500;
    const ShopmTrace tr = gme::shopm_run(w_tensor(), Vec{0.8, 0.6}, cfg);
    CHECK(tr.shift_below_guarantee);
}

TEST_CASE("restart radius on the w tensor telescopes quickly") {
    ShopmConfig cfg;
    cfg.seed = 7;
    const gme::RestartResult rr = gme::restart_radius(w_tensor(), 20, cfg);
    CHECK(rr.radius == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(rr.audit.telescoped);
    CHECK(rr.audit.rounds.size() <= 3);
    CHECK(rr.pair.residual <= 1e-9);
    // the w tensor is reducible, which the audit points out
    REQUIRE(!rr.audit.warnings.empty());
    CHECK(rr.audit.warnings.front().find("reducible") != std::string::npos);
}

TEST_CASE("restart terminates in one round when the first run hits the radius") {
    // every strictly positive start on the w tensor converges to 2/3, so the
    // pre-round run already fixes the right scale
    ShopmConfig cfg;
    cfg.seed = 21;
    const gme::RestartResult rr = gme::restart_radius(w_tensor(), 8, cfg);
    CHECK(rr.audit.lambda0 == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(rr.audit.rounds.size() == 1);
    CHECK(rr.audit.telescoped);
    CHECK(rr.audit.telescoped_product == doctest::Approx(2.0 / 3).epsilon(1e-9));
}

TEST_CASE("restart output dominates every per-start limit") {
    std::mt19937_64 rng(24601);
    ShopmConfig cfg;
    cfg.seed = 31;
    const SymTensor t = oracle::random_sym(3, 4, rng);
    const gme::RestartResult rr = gme::restart_radius(t, 16, cfg);
    for (const auto& round : rr.audit.rounds)
        for (double abs : round.absolute) CHECK(rr.radius >= abs - 1e-9);
    // and matches a refined grid search
    const double grid = oracle::grid_max_refined(t);
    CHECK(std::fabs(rr.radius - grid) <= 5e-4);
}

TEST_CASE("restart limits are elimination eigenvalues on small tensors") {
    std::mt19937_64 rng(777);
    ShopmConfig cfg;
    cfg.seed = 17;
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const SymTensor t = oracle::random_sym(3, n, rng);
        const gme::ZSpectrum spec =
            n == 2 ? gme::qubit_spectrum(t) : gme::qutrit_spectrum(t);
        const gme::RestartResult rr = gme::restart_radius(t, 12, cfg);
        for (const auto& round : rr.audit.rounds) {
            for (double abs : round.absolute) {
                bool member = false;
                for (const auto& p : spec.pairs)
                    if (std::fabs(p.lambda - abs) <= 1e-7) member = true;
                CHECK(member);
            }
        }
        CHECK(std::fabs(rr.radius - spec.radius) <= 1e-8 * std::max(1.0, spec.radius));
    }
}

TEST_CASE("restart on the zero tensor reports undefined rescaling") {
    ShopmConfig cfg;
    CHECK_THROWS_AS(gme::restart_radius(SymTensor::zeros(3, 2), 4, cfg),
                    gme::DegenerateError);
}

TEST_CASE("restart is deterministic for a fixed seed") {
    std::mt19937_64 rng(3333);
    const SymTensor t = oracle::random_sym(3, 3, rng);
    ShopmConfig cfg;
    cfg.seed = 4242;
    const gme::RestartResult a = gme::restart_radius(t, 8, cfg);
    const gme::RestartResult b = gme::restart_radius(t, 8, cfg);
    CHECK(a.radius == b.radius);
    REQUIRE(a.audit.rounds.size() == b.audit.rounds.size());
    for (std::size_t r = 0; r < a.audit.rounds.size(); ++r)
        for (std::size_t i = 0; i < a.audit.rounds[r].limits.size(); ++i)
            CHECK(a.audit.rounds[r].limits[i] == b.audit.rounds[r].limits[i]);
}

TEST_CASE("gap estimate for the w tensor") {
    const gme::ZSpectrum spec = gme::qubit_spectrum(w_tensor());
    std::vector<double> lambdas;
    for (const auto& p : spec.pairs) lambdas.push_back(p.lambda);
    const gme::GapEstimate g = gme::gap_estimate(lambdas, w_tensor());
    CHECK_FALSE(g.singleton);
    CHECK(g.rho == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(g.lambda2 == doctest::Approx(0.0));
    CHECK(g.kappa == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(g.acc_radius == doctest::Approx(1.0 / 9).epsilon(1e-8));
}

TEST_CASE("gap estimate flags singleton spectra") {
    const std::vector<double> lone{0.7};
    const gme::GapEstimate g = gme::gap_estimate(lone, w_tensor());
    CHECK(g.singleton);
    CHECK(g.lambda2 == 0.0);
    CHECK(g.kappa == doctest::Approx(0.35));
    CHECK_THROWS_AS(gme::gap_estimate(std::vector<double>{}, w_tensor()),
                    gme::ValidationError);
}

TEST_CASE("gap estimate for the qutrit ghz closed forms") {
    const auto pairs = oracle::qutrit_diag_spectrum(1.0 / 3, 2.0 / 3, 2.0 / 3);
    std::vector<double> lambdas;
    for (const auto& p : pairs) lambdas.push_back(p.lambda);
    Vec e(27, 0.0);
    e[0] = 1.0 / 3;
    e[13] = 2.0 / 3;
    e[26] = 2.0 / 3;
    const SymTensor t(3, 3, e);
    const gme::GapEstimate g = gme::gap_estimate(lambdas, t);
    CHECK(g.rho == doctest::Approx(2.0 / 3).epsilon(1e-12));
    // second distinct value is sqrt(2)/3, from the beta-gamma two-level pair
    CHECK(g.lambda2 == doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-10));
    CHECK(g.kappa == doctest::Approx(0.5 * (2.0 / 3 - std::sqrt(2.0) / 3)).epsilon(1e-10));
}

TEST_CASE("starts inside the attraction cap converge to the radius") {
    // dense random tensors almost always have a singleton nonnegative
    // spectrum, so the corpus with a genuine second eigenvalue is structured
    std::mt19937_64 rng(160914);
    ShopmConfig cfg;
    std::vector<SymTensor> corpus{w_tensor(), ghz_tensor(3), ghz_tensor(4)};
    {
        Vec e(27, 0.0);
        e[0] = 1.0 / 3;
        e[13] = 2.0 / 3;
        e[26] = 2.0 / 3;
        corpus.push_back(SymTensor(3, 3, e));
        Vec f(27, 0.0);
        f[0] = 0.8;
        f[13] = 0.5;
        f[26] = std::sqrt(1.0 - 0.64 - 0.25);
        corpus.push_back(SymTensor(3, 3, f));
    }
    int caps_tested = 0;
    for (const SymTensor& t : corpus) {
        const gme::ZSpectrum spec =
            t.dim() == 2 ? gme::qubit_spectrum(t) : gme::qutrit_spectrum(t);
        std::vector<double> lambdas;
        for (const auto& p : spec.pairs) lambdas.push_back(p.lambda);
        const gme::GapEstimate g = gme::gap_estimate(lambdas, t);
        REQUIRE_FALSE(g.singleton);
        REQUIRE(g.acc_radius > 1e-6);
        const Vec& star = spec.pairs.front().x;
        ++caps_tested;
        for (int s = 0; s < 25; ++s) {
            const Vec x0 = oracle::cap_sample(star, 0.95 * g.acc_radius, rng);
            const ShopmTrace tr = gme::shopm_run(t, x0, cfg);
            CHECK(std::fabs(tr.final.lambda - g.rho) <= 1e-8);
        }
    }
    CHECK(caps_tested == 5);
}

TEST_CASE("the sampler is deterministic and produces positive unit vectors") {
    gme::PositiveUnitSampler a(5), b(5), c(6);
    const Vec va = a.positive_unit(4);
    const Vec vb = b.positive_unit(4);
    CHECK(va == vb);
    CHECK(gme::vec_norm(va) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : va) CHECK(v > 0.0);
    CHECK(c.positive_unit(4) != va);
}
