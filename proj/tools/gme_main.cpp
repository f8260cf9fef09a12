// gme: geometric measure of entanglement for nonnegative pure states, via
// Z-eigenvalues and singular values of nonnegative tensors. Every subcommand
// prints exactly one JSON report on stdout; diagnostics go to stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gme/elim.hpp"
#include "gme/errors.hpp"
#include "gme/io.hpp"
#include "gme/shopm.hpp"
#include "gme/states.hpp"
#include "gme/tensor.hpp"

using nlohmann::json;

namespace {

// Numeric flags accept plain reals and exact fractions like "1/3".
double parse_real(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text);
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0.0) throw gme::ValidationError("fraction with zero denominator: " + text);
        return num / den;
    } catch (const std::invalid_argument&) {
        throw gme::ValidationError("cannot parse number: " + text);
    } catch (const std::out_of_range&) {
        throw gme::ValidationError("number out of range: " + text);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gme::ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw gme::ValidationError("invalid JSON in " + origin + ": " + e.what());
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GME_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw gme::ValidationError("GME_SEED must be an unsigned integer");
        }
    }
    return 0;
}

struct Report {
    std::string command;
    json input;
    json config;
    std::uint64_t seed = 0;
    json result;

    void emit(double wall_ms, bool pretty) const {
        json j;
        j["command"] = command;
        j["input"] = input;
        j["config"] = config;
        j["seed"] = seed;
        j["result"] = result;
        j["wall_time_ms"] = wall_ms;
        std::cout << j.dump() << "\n";
        if (pretty) std::cerr << j.dump(2) << "\n";
    }
};

struct GmArgs {
    std::string state_file;
    std::string builder;
    int m = 3;
    int k = 0;
    std::string abc;
    std::string method = "auto";
    int restarts = 32;
    std::string tol;
    std::string seed_text;
    std::string alpha = "auto";
};

gme::PureState build_state(const GmArgs& a, json& input_echo) {
    if (!a.state_file.empty()) {
        const std::string bytes = read_file(a.state_file);
        input_echo["kind"] = "file";
        input_echo["path"] = a.state_file;
        input_echo["digest"] = gme::io::digest(bytes);
        return gme::io::state_from_json(parse_json(bytes, a.state_file));
    }
    std::ostringstream canon;
    canon << "builder:" << a.builder << ":m=" << a.m << ":k=" << a.k << ":abc=" << a.abc;
    input_echo["kind"] = "builder";
    input_echo["name"] = a.builder;
    input_echo["digest"] = gme::io::digest(canon.str());
    if (a.builder == "w") return gme::dicke(3, 2);
    if (a.builder == "inv-w") return gme::dicke(3, 1);
    if (a.builder == "ghz") return gme::ghz(a.m);
    if (a.builder == "dicke") return gme::dicke(a.m, a.k);
    if (a.builder == "qutrit-ghz") {
        std::vector<double> v;
        std::stringstream ss(a.abc);
        std::string tok;
        while (std::getline(ss, tok, ',')) v.push_back(parse_real(tok));
        if (v.size() != 3)
            throw gme::ValidationError("--abc expects three comma-separated values");
        return gme::general_ghz_qutrit(v[0], v[1], v[2]);
    }
    throw gme::ValidationError("unknown builder: " + a.builder +
                               " (expected w, inv-w, ghz, dicke or qutrit-ghz)");
}

gme::SymTensor load_symmetric(const std::string& path, json& input_echo) {
    const std::string bytes = read_file(path);
    input_echo["kind"] = "file";
    input_echo["path"] = path;
    input_echo["digest"] = gme::io::digest(bytes);
    gme::io::LoadedTensor loaded = gme::io::tensor_from_json(parse_json(bytes, path));
    if (!loaded.sym)
        throw gme::ValidationError(
            "this command needs a symmetric tensor (equal dims, permutation-invariant "
            "entries); use \"symmetrize\": true to expand orbit representatives");
    return *loaded.sym;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric measure of entanglement via nonnegative tensor spectra"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "echo an indented copy of the report to stderr");

    GmArgs gm;
    CLI::App* cmd_gm = app.add_subcommand("gm", "geometric measure of a pure state");
    cmd_gm->add_option("--state", gm.state_file, "state JSON file");
    cmd_gm->add_option("--builder", gm.builder, "w | inv-w | ghz | dicke | qutrit-ghz");
    cmd_gm->add_option("--m", gm.m, "party count for ghz/dicke builders");
    cmd_gm->add_option("--k", gm.k, "zero count for the dicke builder");
    cmd_gm->add_option("--abc", gm.abc, "qutrit-ghz coefficients, e.g. 1/3,2/3,2/3");
    cmd_gm->add_option("--method", gm.method, "auto | elim | power | embed");
    cmd_gm->add_option("--restarts", gm.restarts, "power-method restarts per round");
    cmd_gm->add_option("--tol", gm.tol, "power-method residual tolerance");
    cmd_gm->add_option("--seed", gm.seed_text, "RNG seed (default: GME_SEED or 0)");

    std::string spectrum_file, spectrum_tol;
    CLI::App* cmd_spectrum =
        app.add_subcommand("spectrum", "all nonnegative Z-eigenpairs (dimension 2 or 3)");
    cmd_spectrum->add_option("--tensor", spectrum_file, "tensor JSON file")->required();
    cmd_spectrum->add_option("--tol", spectrum_tol, "residual admission tolerance");

    std::string power_file, power_alpha = "auto", power_tol, power_seed;
    int power_restarts = 32;
    bool power_trace = false;
    CLI::App* cmd_power =
        app.add_subcommand("power", "Z-spectral radius by the restarted power method");
    cmd_power->add_option("--tensor", power_file, "tensor JSON file")->required();
    cmd_power->add_option("--restarts", power_restarts, "starts per round");
    cmd_power->add_option("--alpha", power_alpha, "shift: auto or a positive value");
    cmd_power->add_option("--seed", power_seed, "RNG seed (default: GME_SEED or 0)");
    cmd_power->add_option("--tol", power_tol, "residual tolerance");
    cmd_power->add_flag("--trace", power_trace, "include the per-iteration lambda trace");

    std::string validate_file;
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "structural checks for a tensor or state file");
    cmd_validate->add_option("file", validate_file, "tensor or state JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto wall_ms = [&t0]() {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t0)
            .count();
    };

    try {
        Report report;
        if (cmd_gm->parsed()) {
            if (gm.state_file.empty() == gm.builder.empty())
                throw gme::ValidationError("gm needs exactly one of --state or --builder");
            report.command = "gm";
            report.seed = gm.seed_text.empty() ? default_seed() : std::stoull(gm.seed_text);
            gme::GmOptions opts;
            opts.restarts = gm.restarts;
            opts.shopm.seed = report.seed;
            if (!gm.tol.empty()) opts.shopm.tol = parse_real(gm.tol);
            if (gm.method == "auto") opts.method = gme::GmMethod::Auto;
            else if (gm.method == "elim") opts.method = gme::GmMethod::Elim;
            else if (gm.method == "power") opts.method = gme::GmMethod::Power;
            else if (gm.method == "embed") opts.method = gme::GmMethod::Embed;
            else throw gme::ValidationError("unknown method: " + gm.method);
            const gme::PureState state = build_state(gm, report.input);
            report.config = {{"method", gm.method},
                             {"restarts", opts.restarts},
                             {"tol", opts.shopm.tol}};
            const gme::MeasureResult res = gme::geometric_measure(state, opts);
            report.result = gme::io::to_json(res);
            report.emit(wall_ms(), pretty);
        } else if (cmd_spectrum->parsed()) {
            report.command = "spectrum";
            report.seed = default_seed();
            const double admit = spectrum_tol.empty() ? 1e-8 : parse_real(spectrum_tol);
            const gme::SymTensor t = load_symmetric(spectrum_file, report.input);
            report.config = {{"tol", admit}};
            if (t.dim() > 3)
                throw gme::CapabilityError(
                    "spectrum enumeration handles dimension 2 or 3; use the power "
                    "subcommand");
            const gme::ZSpectrum spec =
                t.dim() == 2 ? gme::qubit_spectrum(t, admit) : gme::qutrit_spectrum(t, admit);
            report.result = gme::io::to_json(spec);
            report.emit(wall_ms(), pretty);
        } else if (cmd_power->parsed()) {
            report.command = "power";
            report.seed = power_seed.empty() ? default_seed() : std::stoull(power_seed);
            gme::ShopmConfig cfg;
            cfg.seed = report.seed;
            if (!power_tol.empty()) cfg.tol = parse_real(power_tol);
            if (power_alpha != "auto") cfg.alpha = parse_real(power_alpha);
            const gme::SymTensor t = load_symmetric(power_file, report.input);
            report.config = {{"restarts", power_restarts},
                             {"alpha", power_alpha},
                             {"tol", cfg.tol},
                             {"trace", power_trace}};
            bool below_guarantee = false;
            if (cfg.alpha && *cfg.alpha < gme::default_shift(t)) below_guarantee = true;
            const gme::RestartResult rr = gme::restart_radius(t, power_restarts, cfg);
            report.result = gme::io::to_json(rr);
            if (below_guarantee)
                report.result["shift_below_guaranteed_bound"] = true;
            if (power_trace) {
                gme::PositiveUnitSampler sampler(cfg.seed);
                gme::ShopmTrace tr = gme::shopm_run(t, sampler.positive_unit(t.dim()), cfg);
                report.result["trace"] = gme::io::to_json(tr);
            }
            report.emit(wall_ms(), pretty);
        } else if (cmd_validate->parsed()) {
            report.command = "validate";
            report.seed = default_seed();
            const std::string bytes = read_file(validate_file);
            report.input = {{"kind", "file"},
                            {"path", validate_file},
                            {"digest", gme::io::digest(bytes)}};
            report.config = json::object();
            const json j = parse_json(bytes, validate_file);
            json checks;
            bool failed = false;
            if (j.contains("amplitudes")) {
                checks["kind"] = "state";
                try {
                    const gme::PureState s = gme::io::state_from_json(j);
                    checks["finite"] = true;
                    checks["nonnegative"] = true;
                    checks["normalized"] = true;
                    checks["renormalized_within_tolerance"] = s.was_renormalized();
                    const gme::StateTensor t = gme::to_tensor(s);
                    const bool sym = std::holds_alternative<gme::SymTensor>(t);
                    checks["symmetric"] = sym;
                    if (sym) {
                        const auto& st = std::get<gme::SymTensor>(t);
                        checks["irreducible"] =
                            st.dim() <= 20 ? json(gme::is_irreducible(st)) : json(nullptr);
                    }
                } catch (const gme::ValidationError& e) {
                    failed = true;
                    checks["error"] = e.what();
                }
            } else if (j.contains("entries") || j.contains("dims")) {
                checks["kind"] = "tensor";
                try {
                    const gme::io::LoadedTensor t = gme::io::tensor_from_json(j);
                    checks["finite"] = true;
                    checks["nonnegative"] = t.gen.is_nonnegative();
                    if (!t.gen.is_nonnegative()) failed = true;
                    checks["symmetric"] = t.sym.has_value();
                    if (t.sym && t.sym->dim() <= 20)
                        checks["irreducible"] = gme::is_irreducible(*t.sym);
                } catch (const gme::ValidationError& e) {
                    failed = true;
                    checks["error"] = e.what();
                }
            } else {
                throw gme::ValidationError(
                    "file is neither a tensor (\"entries\") nor a state (\"amplitudes\")");
            }
            checks["passed"] = !failed;
            report.result = checks;
            report.emit(wall_ms(), pretty);
            if (failed) return 2;
        }
        return 0;
    } catch (const gme::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const gme::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const gme::DegenerateError& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
