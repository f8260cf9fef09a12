// Acceptance suite: one self-contained check per shipped guarantee, each
// printing a single [PASS]/[FAIL] line. Run without arguments for the whole
// list or with a criterion number (1-10) for one of them. The CLI checks
// need GME_CLI and GME_FIXTURES in the environment (ctest sets both).

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gme/elim.hpp"
#include "gme/errors.hpp"
#include "gme/io.hpp"
#include "gme/shopm.hpp"
#include "gme/states.hpp"
#include "gme/tensor.hpp"
#include "oracle.hpp"

using gme::SymTensor;
using gme::Vec;
using nlohmann::json;

namespace {

bool approx(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

double vec_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

SymTensor diag3(double a, double b, double c) {
    Vec e(27, 0.0);
    e[0] = a;
    e[13] = b;
    e[26] = c;
    return SymTensor(3, 3, std::move(e));
}

// ---------------------------------------------------------------------------
// CLI plumbing for the criteria that exercise the binary
// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CliRun {
    int exit_code = -1;
    json report;
    bool parsed = false;
};

const char* cli_binary() {
    if (const char* env = std::getenv("GME_CLI")) return env;
#ifdef GME_DEFAULT_CLI
    return GME_DEFAULT_CLI;
#else
    return nullptr;
#endif
}

CliRun run_cli(const std::string& args) {
    CliRun r;
    const char* cli = cli_binary();
    if (!cli) return r;
    static int counter = 0;
    const std::string out_file = "acc_out_" + std::to_string(counter++) + ".json";
    const std::string cmd = std::string(cli) + " " + args + " >" + out_file + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const std::string text = slurp(out_file);
    std::remove(out_file.c_str());
    if (!text.empty()) {
        r.report = json::parse(text, nullptr, false);
        r.parsed = !r.report.is_discarded();
    }
    return r;
}

std::string fixture(const std::string& name) {
    if (const char* dir = std::getenv("GME_FIXTURES")) return std::string(dir) + "/" + name;
#ifdef GME_DEFAULT_FIXTURES
    return std::string(GME_DEFAULT_FIXTURES) + "/" + name;
#else
    return name;
#endif
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

// GHZ family: G = 1/sqrt(2) to 1e-9 by elimination and by the power method;
// odd party counts also expose the interior pair (2^{-(m-1)/2}, (1,1)/sqrt(2)).
bool criterion_1(std::ostream& log) {
    bool ok = true;
    const double root_half = 1.0 / std::sqrt(2.0);
    for (int m = 3; m <= 6; ++m) {
        std::ostringstream elim_cmd;
        elim_cmd << "gm --builder ghz --m " << m << " --method elim --seed 7";
        const CliRun elim = run_cli(elim_cmd.str());
        if (!elim.parsed || elim.exit_code != 0) {
            log << "  m=" << m << ": elimination run failed\n";
            ok = false;
            continue;
        }
        const double g_elim = elim.report["result"]["G"].get<double>();
        if (!approx(g_elim, root_half, 1e-9)) {
            log << "  m=" << m << ": elimination G=" << g_elim << "\n";
            ok = false;
        }

        std::ostringstream power_cmd;
        power_cmd << "gm --builder ghz --m " << m << " --method power --seed 7";
        const CliRun power = run_cli(power_cmd.str());
        if (!power.parsed || power.exit_code != 0 ||
            !approx(power.report["result"]["G"].get<double>(), root_half, 1e-9)) {
            log << "  m=" << m << ": power-method G mismatch\n";
            ok = false;
        }

        if (m % 2 == 1) {
            const double interior = std::pow(root_half, m - 1);
            bool seen = false;
            for (const auto& pair : elim.report["result"]["audit"]["pairs"]) {
                const double lambda = pair["lambda"].get<double>();
                const double x0 = pair["x"][0].get<double>();
                const double x1 = pair["x"][1].get<double>();
                if (approx(lambda, interior, 1e-8) && approx(x0, root_half, 1e-8) &&
                    approx(x1, root_half, 1e-8))
                    seen = true;
            }
            if (!seen) {
                log << "  m=" << m << ": interior eigenpair missing from the spectrum\n";
                ok = false;
            }
        }
    }
    return ok;
}

// W and inverted W: G = 2/3 by both paths and the exact two-pair spectrum.
bool criterion_2(std::ostream& log) {
    bool ok = true;
    for (const char* builder : {"w", "inv-w"}) {
        for (const char* method : {"elim", "power"}) {
            std::ostringstream cmd;
            cmd << "gm --builder " << builder << " --method " << method << " --seed 5";
            const CliRun run = run_cli(cmd.str());
            if (!run.parsed || run.exit_code != 0 ||
                !approx(run.report["result"]["G"].get<double>(), 2.0 / 3, 1e-9)) {
                log << "  " << builder << " via " << method << ": G mismatch\n";
                ok = false;
            }
        }
    }
    const gme::ZSpectrum spec = gme::qubit_spectrum(
        std::get<SymTensor>(gme::to_tensor(gme::dicke(3, 2))));
    if (spec.pairs.size() != 2) {
        log << "  W spectrum has " << spec.pairs.size() << " pairs, expected 2\n";
        ok = false;
    } else {
        const Vec top{std::sqrt(2.0 / 3), std::sqrt(1.0 / 3)};
        const Vec bottom{0.0, 1.0};
        bool top_seen = false, bottom_seen = false;
        for (const auto& p : spec.pairs) {
            if (approx(p.lambda, 2.0 / 3, 1e-8) && vec_dist(p.x, top) <= 1e-8)
                top_seen = true;
            if (approx(p.lambda, 0.0, 1e-8) && vec_dist(p.x, bottom) <= 1e-8)
                bottom_seen = true;
        }
        if (!top_seen || !bottom_seen) {
            log << "  W eigenpairs do not match {0, 2/3} with the known vectors\n";
            ok = false;
        }
    }
    return ok;
}

// Qutrit GHZ: elimination reproduces the seven closed-form eigenpairs.
bool criterion_3(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(33003);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::array<double, 3>> triples{{1.0 / 3, 2.0 / 3, 2.0 / 3}};
    while (triples.size() < 21) {
        std::array<double, 3> v{std::fabs(normal(rng)), std::fabs(normal(rng)),
                                std::fabs(normal(rng))};
        const double nrm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (nrm < 1e-6) continue;
        for (double& x : v) x /= nrm;
        if (v[0] < 1e-2 || v[1] < 1e-2 || v[2] < 1e-2) continue;
        triples.push_back(v);
    }
    for (const auto& v : triples) {
        const gme::ZSpectrum spec = gme::qutrit_spectrum(diag3(v[0], v[1], v[2]));
        const auto want = oracle::qutrit_diag_spectrum(v[0], v[1], v[2]);
        if (spec.pairs.size() != 7) {
            log << "  (" << v[0] << "," << v[1] << "," << v[2] << "): "
                << spec.pairs.size() << " pairs instead of 7\n";
            ok = false;
            continue;
        }
        for (const auto& w : want) {
            bool matched = false;
            for (const auto& p : spec.pairs)
                if (approx(p.lambda, w.lambda, 1e-7) && vec_dist(p.x, w.x) <= 1e-7)
                    matched = true;
            if (!matched) {
                log << "  closed-form pair lambda=" << w.lambda << " missing\n";
                ok = false;
            }
        }
        if (!approx(spec.radius, std::max({v[0], v[1], v[2]}), 1e-9)) {
            log << "  radius differs from max coefficient\n";
            ok = false;
        }
    }
    return ok;
}

// Eigenvalue count bound over a 200-tensor corpus.
bool criterion_4(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(44004);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 3 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 2);
        const SymTensor t = oracle::random_sym(m, n, rng);
        const gme::ZSpectrum spec =
            n == 2 ? gme::qubit_spectrum(t) : gme::qutrit_spectrum(t);
        const double bound = gme::zeigenvalue_count_bound(m, n);
        if (static_cast<double>(spec.pairs.size()) > bound + 1e-9) {
            log << "  violation at trial " << trial << ": " << spec.pairs.size() << " > "
                << bound << " (m=" << m << ", n=" << n << ")\n";
            ok = false;
        }
    }
    return ok;
}

// Monotone lambda sequences over 500 runs at the default shift.
bool criterion_5(std::ostream& log) {
    std::mt19937_64 rng(55005);
    gme::PositiveUnitSampler sampler(505);
    double worst = 0.0;
    for (int run = 0; run < 500; ++run) {
        const int m = 3 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const SymTensor t = oracle::random_sym(m, n, rng);
        gme::ShopmConfig cfg;
        const gme::ShopmTrace tr = gme::shopm_run(t, sampler.positive_unit(n), cfg);
        for (std::size_t k = 1; k < tr.lambdas.size(); ++k)
            worst = std::min(worst, tr.lambdas[k] - tr.lambdas[k - 1]);
    }
    if (worst < -1e-12) {
        log << "  worst lambda decrement " << worst << "\n";
        return false;
    }
    return true;
}

// Elimination, the restarted power method and a dense grid search agree.
bool criterion_6(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(66006);
    gme::ShopmConfig cfg;
    cfg.seed = 606;
    for (int trial = 0; trial < 100; ++trial) {
        const SymTensor t = oracle::random_sym(3, 3, rng);
        const double elim = gme::radius_elim(t);
        const double power = gme::restart_radius(t, 32, cfg).radius;
        if (std::fabs(elim - power) > 1e-7) {
            log << "  trial " << trial << ": |elim - power| = " << std::fabs(elim - power)
                << "\n";
            ok = false;
        }
        const double grid = oracle::grid_max(t, 1e-3);
        if (elim < grid - 5e-4 || power < grid - 5e-4) {
            log << "  trial " << trial << ": radius below the grid value\n";
            ok = false;
        }
    }
    return ok;
}

// Lipschitz bound for partial contractions over 1000 samples.
bool criterion_7(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(77007);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int sample = 0; sample < 1000; ++sample) {
        const int m = 3 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const SymTensor t = oracle::random_sym(m, n, rng);
        Vec x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (double& v : x) v = normal(rng);
        for (double& v : y) v = normal(rng);
        x = gme::vec_normalized(std::move(x));
        y = gme::vec_normalized(std::move(y));
        const int k = static_cast<int>(rng() % static_cast<unsigned>(m));
        const Vec tx = gme::contract_power(t, x, m - k);
        const Vec ty = gme::contract_power(t, y, m - k);
        double diff = 0.0;
        for (std::size_t i = 0; i < tx.size(); ++i)
            diff += (tx[i] - ty[i]) * (tx[i] - ty[i]);
        diff = std::sqrt(diff);
        const double bound =
            (m - k) * gme::frobenius_norm(t) * vec_dist(x, y) + 1e-12;
        if (diff > bound) {
            log << "  sample " << sample << ": " << diff << " > " << bound << "\n";
            ok = false;
        }
    }
    return ok;
}

// Embedding consistency: the scaled embedded radius equals the alternating
// maximization value of the largest singular value.
bool criterion_8(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(88008);
    gme::GmOptions opts;
    opts.shopm.seed = 808;
    std::vector<gme::GenTensor> corpus;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> dims{2 + static_cast<int>(rng() % 2),
                              2 + static_cast<int>(rng() % 2),
                              2 + static_cast<int>(rng() % 2)};
        corpus.push_back(oracle::random_gen(dims, rng));
    }
    // the symmetric corpus through the nonsymmetric path
    for (const gme::PureState& s : {gme::dicke(3, 2), gme::dicke(3, 1), gme::ghz(3)}) {
        corpus.emplace_back(s.dims(), Vec(s.amplitudes().begin(), s.amplitudes().end()));
    }
    for (int trial = 0; trial < 5; ++trial) {
        const SymTensor t = oracle::random_sym(3, 3, rng);
        corpus.emplace_back(std::vector<int>{3, 3, 3},
                            Vec(t.entries().begin(), t.entries().end()));
    }
    int index = 0;
    for (const gme::GenTensor& a : corpus) {
        const gme::SingularTuple tuple = gme::singular_radius(a, opts);
        const double alt = oracle::alt_max_sigma(a, 30, 909 + index);
        if (std::fabs(tuple.sigma - alt) > 1e-6) {
            log << "  corpus[" << index << "]: sigma=" << tuple.sigma << " vs oracle "
                << alt << "\n";
            ok = false;
        }
        ++index;
    }
    return ok;
}

// Attraction-cap convergence: 100 starts inside the estimated cap around a
// radius eigenvector all reach the radius.
bool criterion_9(std::ostream& log) {
    bool ok = true;
    std::mt19937_64 rng(99009);
    std::vector<SymTensor> corpus{
        std::get<SymTensor>(gme::to_tensor(gme::dicke(3, 2))),
        std::get<SymTensor>(gme::to_tensor(gme::dicke(3, 1))),
        std::get<SymTensor>(gme::to_tensor(gme::ghz(3))),
        std::get<SymTensor>(gme::to_tensor(gme::ghz(4))),
        diag3(1.0 / 3, 2.0 / 3, 2.0 / 3),
        diag3(0.8, 0.5, std::sqrt(1.0 - 0.64 - 0.25)),
    };
    int starts_done = 0;
    for (const SymTensor& t : corpus) {
        const gme::ZSpectrum spec =
            t.dim() == 2 ? gme::qubit_spectrum(t) : gme::qutrit_spectrum(t);
        std::vector<double> lambdas;
        for (const auto& p : spec.pairs) lambdas.push_back(p.lambda);
        const gme::GapEstimate gap = gme::gap_estimate(lambdas, t);
        if (gap.singleton) continue;
        const Vec& star = spec.pairs.front().x;
        gme::ShopmConfig cfg;
        for (int s = 0; s < 17; ++s) {
            const Vec x0 = oracle::cap_sample(star, 0.97 * gap.acc_radius, rng);
            const gme::ShopmTrace tr = gme::shopm_run(t, x0, cfg);
            ++starts_done;
            if (!approx(tr.final.lambda, gap.rho, 1e-8)) {
                log << "  start missed the radius: " << tr.final.lambda << " vs "
                    << gap.rho << "\n";
                ok = false;
            }
        }
    }
    if (starts_done < 100) {
        log << "  only " << starts_done << " eligible starts\n";
        ok = false;
    }
    return ok;
}

// CLI determinism: identical numeric payloads across two runs of each golden
// command.
bool criterion_10(std::ostream& log) {
    bool ok = true;
    const std::vector<std::string> goldens{
        "gm --builder w --seed 7",
        "gm --builder inv-w --seed 7",
        "gm --builder ghz --m 4 --seed 7",
        "gm --builder ghz --m 5 --method power --seed 11",
        "gm --builder qutrit-ghz --abc 1/3,2/3,2/3 --seed 9",
        "gm --state " + fixture("w_state.json") + " --seed 13",
        "spectrum --tensor " + fixture("w_tensor.json"),
        "spectrum --tensor " + fixture("qutrit_ghz_tensor.json"),
        "power --tensor " + fixture("w_tensor.json") + " --seed 7",
        "power --tensor " + fixture("random_444.json") + " --seed 7 --trace",
        "validate " + fixture("w_state.json"),
    };
    for (const std::string& cmd : goldens) {
        const CliRun a = run_cli(cmd);
        const CliRun b = run_cli(cmd);
        if (!a.parsed || !b.parsed) {
            log << "  run failed: " << cmd << "\n";
            ok = false;
            continue;
        }
        if (a.report["result"].dump() != b.report["result"].dump()) {
            log << "  nondeterministic payload: " << cmd << "\n";
            ok = false;
        }
    }
    return ok;
}

struct Criterion {
    int number;
    const char* summary;
    std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "GHZ family: G = 1/sqrt(2) by elimination and power; odd-m interior pair",
         criterion_1},
        {2, "W and inverted W: G = 2/3 both paths; spectrum {0, 2/3} with known vectors",
         criterion_2},
        {3, "qutrit GHZ: all seven closed-form eigenpairs on 21 triples", criterion_3},
        {4, "eigenpair count bound over a 200-tensor corpus", criterion_4},
        {5, "power-method lambda sequences are nondecreasing (500 runs)", criterion_5},
        {6, "elimination, restarts and grid search agree (100 tensors)", criterion_6},
        {7, "Lipschitz bound for partial contractions (1000 samples)", criterion_7},
        {8, "embedding radius matches alternating maximization (58 tensors)",
         criterion_8},
        {9, "starts inside the attraction cap reach the radius (>= 100 starts)",
         criterion_9},
        {10, "CLI reports are byte-identical across reruns", criterion_10},
    };

    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    bool all_ok = true;
    for (const Criterion& c : criteria) {
        if (selected != 0 && c.number != selected) continue;
        std::ostringstream log;
        bool ok = false;
        try {
            ok = c.run(log);
        } catch (const std::exception& e) {
            log << "  exception: " << e.what() << "\n";
        }
        std::printf("[%s] %2d: %s\n", ok ? "PASS" : "FAIL", c.number, c.summary);
        if (!ok) {
            std::fputs(log.str().c_str(), stdout);
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}
