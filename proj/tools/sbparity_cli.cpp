// sbparity_cli.cpp — command-line front end for the spin-boson parity analysis

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sbparity/cli/commands.hpp"

namespace {

using namespace sbparity::cli;

int emit(const CommandOutput& out, const std::string& path) {
    if (out.exit_code == kExitUsage && out.body.rfind("error: ", 0) == 0) {
        std::cerr << out.body;
        return out.exit_code;
    }
    if (path.empty()) {
        std::cout << out.body;
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write " << path << "\n";
            return kExitUsage;
        }
        file << out.body;
    }
    return out.exit_code;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("reference", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parity decomposition of the spin-boson model: branch spectra, non-degeneracy verdicts, "
                 "and truncation-induced parity breaking"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    std::string out_path;
    std::string reference_path;
    double epsilon = -1.0;
    unsigned jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "output file (default: output.path, else stdout)");
        sub->add_option("--epsilon", epsilon, "parity-breaking tolerance, overrides parity.epsilon");
    };

    auto* theorem = app.add_subcommand("theorem", "ground state vs lowest parity-degenerate energy");
    auto* spectrum = app.add_subcommand("spectrum", "lowest levels of both parity branches");
    auto* phase = app.add_subcommand("phase-diagram", "critical alpha over a sweep in s (CSV)");
    auto* audit = app.add_subcommand("parity-audit", "D^2 audit over the truncated displaced basis");
    auto* alpha_c = app.add_subcommand("alpha-c", "critical alpha at a single s");
    auto* closure = app.add_subcommand("closure", "bare-Fock closure ratio R = M / (N_tr + 1)");
    for (auto* sub : {theorem, spectrum, phase, audit, alpha_c, closure}) add_common(sub);
    phase->add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
    phase->add_option("--reference", reference_path, "reference curve CSV: s,alpha_c,label")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    std::vector<ReferenceCurve> references;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (epsilon != -1.0) {
            if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("--epsilon", "must satisfy 0 < epsilon < 1");
            cfg.parity.epsilon = epsilon;
        }
        if (!reference_path.empty()) references = parse_reference_curves(read_file(reference_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const std::string path = out_path.empty() ? cfg.output.path : out_path;

    if (theorem->parsed()) return emit(run_theorem(cfg), path);
    if (spectrum->parsed()) return emit(run_spectrum(cfg), path);
    if (audit->parsed()) return emit(run_parity_audit(cfg), path);
    if (alpha_c->parsed()) return emit(run_alpha_c(cfg), path);
    if (closure->parsed()) return emit(run_closure(cfg), path);
    return emit(run_phase_diagram(cfg, jobs, references), path);
}
