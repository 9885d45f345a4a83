#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wigner/beams.hpp"
#include "wigner/bench.hpp"
#include "wigner/constants.hpp"

using namespace wigner;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    long long seed = -1;
    std::string out;
    int threads = 1;
};

void addCommon(CLI::App* app, Common& c) {
    app->add_option("config", c.config, "experiment config (key = value)")->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "override the anneal seed");
    app->add_option("--out", c.out, "override the output directory");
    app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig configFrom(const Common& c) {
    ExperimentConfig cfg = loadConfig(c.config);
    if (c.seed >= 0) cfg.anneal.seed = static_cast<std::uint64_t>(c.seed);
    if (!c.out.empty()) cfg.outDir = c.out;
    return cfg;
}

void writeFile(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int report(const RunArtifacts& run, double configNuC) {
    for (const auto& s : run.stages)
        std::printf("%-12s %-6s %8.3f s  %s\n", s.name.c_str(), s.ok ? "ok" : "FAILED", s.seconds, s.message.c_str());
    if (run.gate && !run.gate->curve.empty()) {
        std::printf("pair (%d, %d)  nu/omega_c %.6g  amplitude %.6g  theta %.12g\n", run.gate->spec.ion1,
                    run.gate->spec.ion2, run.gate->spec.carrierFrequency / (2.0 * constants::pi * configNuC),
                    run.gate->amplitude, run.gate->phase.theta);
        for (const auto& p : run.gate->curve) std::printf("T = %.4g K  1 - F = %.6g (%c)\n", p.temperature, p.infidelity, p.branch);
    }
    for (const auto& f : run.files) std::printf("wrote %s\n", f.c_str());
    if (!run.ok) std::fprintf(stderr, "error: %s\n", run.error.c_str());
    return run.ok ? 0 : 1;
}

Scheme schemeFrom(const std::string& s) {
    if (s == "same") return Scheme::SameSigmaPlus;
    if (s == "mixed") return Scheme::Mixed;
    if (s == "mixed-p12") return Scheme::MixedP12Only;
    throw std::invalid_argument("unknown scheme '" + s + "' (same, mixed, mixed-p12)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penning-trap Wigner crystal toolkit"};
    app.require_subcommand(1);

    Common eq, md, gt, sw;
    auto* cEq = app.add_subcommand("equilibrium", "anneal and refine the crystal");
    addCommon(cEq, eq);
    auto* cMd = app.add_subcommand("modes", "equilibrium, normal modes and bands");
    addCommon(cMd, md);
    auto* cGt = app.add_subcommand("gate", "full run: modes, phase calibration, fidelity curve");
    addCommon(cGt, gt);
    auto* cSw = app.add_subcommand("sweep", "sweep P_theta, T, nu or tau_g");
    addCommon(cSw, sw);
    std::string param, grid;
    cSw->add_option("--param", param, "P_theta | T | nu | tau_g")->required();
    cSw->add_option("--grid", grid, "comma list, 'logspace a b n' or 'linspace a b n'")->required();

    auto* cPd = app.add_subcommand("pulse-design", "state-dependent force pulse sequence");
    std::string species = "Be+", scheme = "mixed", pulseOut = "pulse.csv";
    double field = 0.0, d1Hz = 0.0, d2Hz = 0.0, nuHz = 0.0, switchTime = 0.0;
    int periods = 1;
    cPd->add_option("--species", species);
    cPd->add_option("--field", field, "magnetic field in T")->required();
    cPd->add_option("--scheme", scheme, "same | mixed | mixed-p12");
    cPd->add_option("--delta1", d1Hz, "detuning of the first beam in Hz")->required();
    cPd->add_option("--delta2", d2Hz, "detuning of the second beam in Hz")->required();
    cPd->add_option("--nu", nuHz, "modulation frequency in Hz")->required();
    cPd->add_option("--periods", periods)->check(CLI::PositiveNumber);
    cPd->add_option("--switch-time", switchTime, "dark time at each switch in s");
    cPd->add_option("--out", pulseOut);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cEq) {
            const ExperimentConfig cfg = configFrom(eq);
            return report(runExperiment(cfg, {true, eq.threads, "equilibrium"}), cfg.nuCyclotronHz);
        }
        if (*cMd) {
            const ExperimentConfig cfg = configFrom(md);
            return report(runExperiment(cfg, {true, md.threads, "bands"}), cfg.nuCyclotronHz);
        }
        if (*cGt) {
            const ExperimentConfig cfg = configFrom(gt);
            return report(runExperiment(cfg, {true, gt.threads, "fidelity"}), cfg.nuCyclotronHz);
        }
        if (*cSw) {
            const ExperimentConfig cfg = configFrom(sw);
            const SweepParameter p = parseSweepParameter(param);
            const std::vector<double> values = parseGridSpec(grid);
            const auto rows = sweep(cfg, p, values, sw.threads);
            fs::create_directories(cfg.outDir);
            const std::string csv = (fs::path(cfg.outDir) / ("sweep_" + param + ".csv")).string();
            writeFile(csv, formatSweepCsv(p, rows));
            writeFile((fs::path(cfg.outDir) / ("sweep_" + param + ".gp")).string(), plotScript(csv, param));
            int failures = 0;
            for (const auto& r : rows) {
                if (r.status != "ok") ++failures;
                std::printf("%3d %-8s %.6g  %s", r.index, param.c_str(), r.value, r.status.c_str());
                if (r.status == "ok") {
                    std::printf("  omega_r/omega_c %.6g", r.rotationFrequency);
                    if (r.hasGate) std::printf("  1 - F %.4g", r.infidelity);
                } else {
                    std::printf("  %s", r.error.c_str());
                }
                std::printf("\n");
            }
            std::printf("wrote %s\n", csv.c_str());
            return failures == 0 ? 0 : 1;
        }
        if (*cPd) {
            const IonSpecies& sp = SpeciesTable::builtin().find(species);
            const Regime regime = classifyRegime(sp, field);
            std::printf("%s at %.4g T: %s regime\n", sp.name.c_str(), field, toString(regime).c_str());
            if (regime != Regime::Zeeman) {
                std::fprintf(stderr, "error: state-dependent force design needs the Zeeman regime\n");
                return 1;
            }
            const double z = zeemanScale(field);
            const double d1 = constants::twoPi * d1Hz, d2 = constants::twoPi * d2Hz;
            if (!detuningChainHolds({d1, d2}, z, sp.fineStructureSplitting))
                std::fprintf(stderr, "warning: detunings violate |B| << |delta| << Delta E / hbar\n");
            const PulseSequence seq =
                buildPulseSequence(schemeFrom(scheme), constants::twoPi * nuHz, periods, d1, d2, z, switchTime);
            const ConditionResiduals r = verifyConditions(seq);
            writeFile(pulseOut, formatPulseCsv(seq));
            std::printf("ratio + %.12g  ratio - %.12g\n", seq.ratioPlus, seq.ratioMinus);
            std::printf("opposition residual %.3g  mean residuals %.3g %.3g\n", r.opposition, r.mean0, r.mean1);
            std::printf("wrote %s\n", pulseOut.c_str());
            return r.pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
