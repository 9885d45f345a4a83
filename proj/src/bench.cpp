#include "wigner/bench.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wigner/constants.hpp"

namespace wigner {

namespace k = constants;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void configError(int line, const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

double toNumber(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') configError(line, "bad number '" + s + "'");
    return v;
}

long toInteger(const std::string& s, int line) {
    const double v = toNumber(s, line);
    if (v != std::floor(v) || std::abs(v) > 9e15) configError(line, "expected an integer, got '" + s + "'");
    return static_cast<long>(v);
}

std::vector<double> parseGrid(const std::string& value, int line) {
    std::vector<double> g;
    std::istringstream in(value);
    std::string first;
    in >> first;
    if (first == "logspace" || first == "linspace") {
        std::string a, b, n, extra;
        if (!(in >> a >> b >> n) || (in >> extra)) configError(line, first + " expects 'start stop count'");
        const double lo = toNumber(a, line), hi = toNumber(b, line);
        const long cnt = toInteger(n, line);
        if (cnt < 1) configError(line, "grid count must be positive");
        if (first == "logspace" && !(lo > 0.0 && hi > 0.0)) configError(line, "logspace bounds must be positive");
        for (long i = 0; i < cnt; ++i) {
            const double f = cnt == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(cnt - 1);
            g.push_back(first == "logspace" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                            : lo + f * (hi - lo));
        }
        return g;
    }
    std::string item;
    std::istringstream list(value);
    while (std::getline(list, item, ',')) {
        item = trim(item);
        if (item.empty()) configError(line, "empty grid entry");
        g.push_back(toNumber(item, line));
    }
    return g;
}

}  // namespace

std::vector<double> parseGridSpec(const std::string& text) { return parseGrid(trim(text), 0); }

void ExperimentConfig::validate() const {
    SpeciesTable::builtin().find(species);
    trap().validate();
    if (pair != "inner") {
        int a = -1, b = -1;
        char comma = 0;
        std::istringstream in(pair);
        if (!(in >> a >> comma >> b) || comma != ',' || a < 0 || b < 0 || a == b || a >= ionCount || b >= ionCount)
            throw std::invalid_argument("config: pair must be 'inner' or two distinct ion indices 'i,j'");
    }
    if (!autoGap && !(nuHz > 0.0)) throw std::invalid_argument("config: nu_Hz must be positive or auto-gap");
    if ((tauG > 0.0) == (tauGOverTauR > 0.0))
        throw std::invalid_argument("config: give exactly one of tau_g_s and tau_g_over_tau_r");
    if (!(windowWidths > 0.0)) throw std::invalid_argument("config: window_widths must be positive");
    if (temperatures.empty()) throw std::invalid_argument("config: temperature grid is empty");
    for (size_t i = 0; i < temperatures.size(); ++i) {
        if (!(temperatures[i] > 0.0)) throw std::invalid_argument("config: temperatures must be positive");
        if (i > 0 && !(temperatures[i] > temperatures[i - 1]))
            throw std::invalid_argument("config: temperature grid must be strictly increasing");
    }
    anneal.validate();
    if (panelNodes != 8 && panelNodes != 16 && panelNodes != 20)
        throw std::invalid_argument("config: panel_nodes must be 8, 16 or 20");
    if (nodesPerPeriod < 20) throw std::invalid_argument("config: nodes_per_period must be at least 20");
}

TrapSetup ExperimentConfig::trap() const {
    TrapSetup t;
    t.cyclotronFrequency = k::twoPi * nuCyclotronHz;
    t.axialRatio = axialRatio;
    t.ionCount = ionCount;
    return t;
}

ExperimentConfig parseConfig(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++lineNo;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) configError(lineNo, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) configError(lineNo, "missing value for '" + key + "'");
        if (!seen.insert(key).second) configError(lineNo, "duplicate key '" + key + "'");
        if (key == "species") c.species = val;
        else if (key == "nu_c_Hz") c.nuCyclotronHz = toNumber(val, lineNo);
        else if (key == "alpha_z") c.axialRatio = toNumber(val, lineNo);
        else if (key == "N") c.ionCount = static_cast<int>(toInteger(val, lineNo));
        else if (key == "P_theta") c.pTheta = toNumber(val, lineNo);
        else if (key == "pair") c.pair = val;
        else if (key == "nu_Hz") {
            if (val == "auto-gap") {
                c.autoGap = true;
            } else {
                c.autoGap = false;
                c.nuHz = toNumber(val, lineNo);
            }
        } else if (key == "tau_g_s") c.tauG = toNumber(val, lineNo);
        else if (key == "tau_g_over_tau_r") c.tauGOverTauR = toNumber(val, lineNo);
        else if (key == "window_widths") c.windowWidths = toNumber(val, lineNo);
        else if (key == "temperatures_K") c.temperatures = parseGrid(val, lineNo);
        else if (key == "anneal_temperature") c.anneal.initialTemperature = toNumber(val, lineNo);
        else if (key == "anneal_decay") c.anneal.decayFactor = toNumber(val, lineNo);
        else if (key == "anneal_cycles") c.anneal.cycles = static_cast<int>(toInteger(val, lineNo));
        else if (key == "anneal_steps") c.anneal.stepsPerCycle = static_cast<int>(toInteger(val, lineNo));
        else if (key == "anneal_step_size") c.anneal.stepSize = toNumber(val, lineNo);
        else if (key == "seed") {
            if (val.find_first_not_of("0123456789") != std::string::npos) configError(lineNo, "seed must be a non-negative integer");
            c.anneal.seed = std::stoull(val);
        } else if (key == "panel_nodes") c.panelNodes = static_cast<int>(toInteger(val, lineNo));
        else if (key == "nodes_per_period") c.nodesPerPeriod = static_cast<int>(toInteger(val, lineNo));
        else if (key == "out") c.outDir = val;
        else configError(lineNo, "unknown key '" + key + "'");
    }
    for (const char* req : {"nu_c_Hz", "alpha_z", "N", "P_theta", "temperatures_K"})
        if (!seen.count(req)) throw std::runtime_error(std::string("config: missing required key '") + req + "'");
    if (!seen.count("tau_g_s") && !seen.count("tau_g_over_tau_r"))
        throw std::runtime_error("config: missing required key 'tau_g_s' or 'tau_g_over_tau_r'");
    c.validate();
    return c;
}

ExperimentConfig loadConfig(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parseConfig(ss.str());
}

std::string formatConfig(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "species = " << c.species << "\n";
    o << "nu_c_Hz = " << fmt17(c.nuCyclotronHz) << "\n";
    o << "alpha_z = " << fmt17(c.axialRatio) << "\n";
    o << "N = " << c.ionCount << "\n";
    o << "P_theta = " << fmt17(c.pTheta) << "\n";
    o << "pair = " << c.pair << "\n";
    o << "nu_Hz = " << (c.autoGap ? std::string("auto-gap") : fmt17(c.nuHz)) << "\n";
    if (c.tauG > 0.0)
        o << "tau_g_s = " << fmt17(c.tauG) << "\n";
    else
        o << "tau_g_over_tau_r = " << fmt17(c.tauGOverTauR) << "\n";
    o << "window_widths = " << fmt17(c.windowWidths) << "\n";
    o << "temperatures_K = ";
    for (size_t i = 0; i < c.temperatures.size(); ++i) o << (i ? ", " : "") << fmt17(c.temperatures[i]);
    o << "\n";
    o << "anneal_temperature = " << fmt17(c.anneal.initialTemperature) << "\n";
    o << "anneal_decay = " << fmt17(c.anneal.decayFactor) << "\n";
    o << "anneal_cycles = " << c.anneal.cycles << "\n";
    o << "anneal_steps = " << c.anneal.stepsPerCycle << "\n";
    o << "anneal_step_size = " << fmt17(c.anneal.stepSize) << "\n";
    o << "seed = " << c.anneal.seed << "\n";
    o << "panel_nodes = " << c.panelNodes << "\n";
    o << "nodes_per_period = " << c.nodesPerPeriod << "\n";
    o << "out = " << c.outDir << "\n";
    return o.str();
}

std::string versionString() {
    std::ostringstream o;
    o << "wigner 1.0.0; eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION
      << "; boost " << BOOST_VERSION / 100000 << "." << BOOST_VERSION / 100 % 1000 << "." << BOOST_VERSION % 100
#if defined(__clang__)
      << "; clang " << __clang_major__ << "." << __clang_minor__
#elif defined(__GNUC__)
      << "; gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "." << __GNUC_PATCHLEVEL__
#endif
      << "; c++ " << __cplusplus;
    return o.str();
}

std::pair<int, int> resolvePair(const ExperimentConfig& c, const CrystalState& state) {
    if (state.ionCount() < 2) throw std::invalid_argument("no pair: the crystal holds fewer than two ions");
    if (c.pair == "inner") return defaultPair(state);
    int a = -1, b = -1;
    char comma = 0;
    std::istringstream in(c.pair);
    in >> a >> comma >> b;
    if (a < 0 || b < 0 || a == b || a >= state.ionCount() || b >= state.ionCount())
        throw std::invalid_argument("no pair: invalid ion indices '" + c.pair + "'");
    return {a, b};
}

double resolveCarrier(const ExperimentConfig& c, const BandInfo& bands, const TrapSetup& setup) {
    if (!c.autoGap) return k::twoPi * c.nuHz;
    return widestGap(bands).geometricMean() * setup.cyclotronFrequency;
}

double resolveTauG(const ExperimentConfig& c, const CrystalState& state, const TrapSetup& setup) {
    if (c.tauG > 0.0) return c.tauG;
    const double wr = std::abs(state.rotationFrequency) * setup.cyclotronFrequency;
    if (!(wr > 0.0)) throw std::domain_error("tau_g / tau_r needs a nonzero rotation frequency");
    return c.tauGOverTauR * k::twoPi / wr;
}

GateSpec makeGateSpec(const ExperimentConfig& c, const CrystalState& state, const BandInfo& bands) {
    const TrapSetup setup = c.trap();
    const auto [i, j] = resolvePair(c, state);
    GateSpec g = GateSpec::pulse(i, j, resolveCarrier(c, bands, setup), resolveTauG(c, state, setup), c.windowWidths);
    g.quadrature.panelNodes = c.panelNodes;
    g.quadrature.nodesPerPeriod = c.nodesPerPeriod;
    return g;
}

namespace {

class ArtifactWriter {
public:
    ArtifactWriter(RunArtifacts& run, bool enabled) : run_(run), enabled_(enabled) {
        if (enabled_) fs::create_directories(run_.directory);
    }
    void write(const std::string& name, const std::string& content) {
        if (!enabled_) return;
        const std::string path = (fs::path(run_.directory) / name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << content;
        if (std::find(run_.files.begin(), run_.files.end(), path) == run_.files.end()) run_.files.push_back(path);
    }
    void remove(const std::string& name) {
        if (enabled_) fs::remove(fs::path(run_.directory) / name);
    }

private:
    RunArtifacts& run_;
    bool enabled_;
};

std::string manifestText(const ExperimentConfig& c, const RunArtifacts& run, const RunOptions& opt) {
    std::ostringstream o;
    o << "# run manifest; the key = value lines reproduce the run\n";
    o << formatConfig(c);
    o << "# version " << versionString() << "\n";
    o << "# threads " << opt.threads << "\n";
    if (run.gate) {
        o << "# pair " << run.gate->spec.ion1 << " " << run.gate->spec.ion2 << " (rule " << c.pair << ")\n";
        o << "# nu_rad_per_s " << fmt17(run.gate->spec.carrierFrequency) << (c.autoGap ? " (auto-gap)" : "") << "\n";
        o << "# tau_g_s " << fmt17(run.gate->spec.width()) << "\n";
    }
    for (const auto& s : run.stages) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", s.seconds);
        o << "# stage " << s.name << " " << (s.ok ? "ok" : "failed") << " " << buf << " s";
        if (!s.message.empty()) o << " : " << s.message;
        o << "\n";
    }
    o << "# status " << (run.ok ? "ok" : "failed") << "\n";
    return o.str();
}

int stageRank(const std::string& s) {
    static const std::map<std::string, int> r{{"equilibrium", 0}, {"hessian", 1}, {"williamson", 2},
                                               {"bands", 3},       {"gate", 4},    {"fidelity", 5}};
    const auto it = r.find(s);
    if (it == r.end()) throw std::invalid_argument("unknown stage '" + s + "'");
    return it->second;
}

}  // namespace

RunArtifacts runExperiment(const ExperimentConfig& c, const RunOptions& opt) {
    c.validate();
    const int last = stageRank(opt.lastStage);
    RunArtifacts run;
    run.directory = c.outDir;
    ArtifactWriter out(run, opt.writeFiles);
    out.remove("FAILED");
    const TrapSetup setup = c.trap();
    const IonSpecies& species = SpeciesTable::builtin().find(c.species);
    const double hbarTilde = deriveScales(setup, species).hbarTilde;
    std::optional<QuadraticHamiltonian> qh;

    auto stage = [&](const std::string& name, const std::function<void(StageRecord&)>& body) {
        if (!run.failedStage.empty() || stageRank(name) > last) return;
        StageRecord rec;
        rec.name = name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(rec);
            rec.ok = true;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.message = e.what();
            run.failedStage = name;
            run.error = name + ": " + e.what();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run.stages.push_back(rec);
    };

    stage("equilibrium", [&](StageRecord& rec) {
        run.state = findEquilibrium(setup, c.pTheta, c.anneal);
        out.write("equilibrium.txt", formatEquilibrium(*run.state));
        if (!run.state->converged) throw std::runtime_error("equilibrium not converged");
        rec.message = "omega_r/omega_c = " + fmt17(run.state->rotationFrequency);
    });
    stage("hessian", [&](StageRecord&) { qh = buildHessian(*run.state, setup); });
    stage("williamson", [&](StageRecord& rec) {
        run.spectrum = williamson(*qh);
        out.write("spectrum.csv", formatSpectrumCsv(*run.spectrum, setup.cyclotronFrequency));
        run.symplecticError = symplecticResidual(run.spectrum->S);
        rec.message = "symplectic residual " + fmt17(run.symplecticError);
        if (!(run.symplecticError < 1e-10)) throw std::runtime_error(rec.message + " exceeds 1e-10");
    });
    stage("bands", [&](StageRecord&) {
        run.bands = classifyBands(*run.spectrum, setup);
        run.spectrum->bands = run.bands->labels;
        out.write("spectrum.csv", formatSpectrumCsv(*run.spectrum, setup.cyclotronFrequency));
    });
    stage("gate", [&](StageRecord& rec) {
        const GateSpec spec = makeGateSpec(c, *run.state, *run.bands);
        run.gate = runGate(spec, *run.state, *run.spectrum, setup, hbarTilde, {});
        out.write("phase.json", formatPhaseReport(*run.gate, setup));
        const double err = phaseError(run.gate->phase.theta);
        rec.message = "|theta - pi| mod 2 pi = " + fmt17(err);
        if (!(err < 1e-6)) throw std::runtime_error(rec.message + " exceeds 1e-6");
    });
    stage("fidelity", [&](StageRecord&) {
        std::vector<FidelityPoint> curve(c.temperatures.size());
        const GateResult& g = *run.gate;
        parallelFor(static_cast<int>(curve.size()), opt.threads, [&](int i) {
            curve[i] = fidelity(g.residual1, g.residual2, g.amplitude, run.spectrum->frequencies, c.temperatures[i], setup);
        });
        run.gate->curve = curve;
        out.write("fidelity.csv", formatFidelityCsv(curve));
    });

    run.ok = run.failedStage.empty();
    out.write("manifest.txt", manifestText(c, run, opt));
    if (!run.ok) out.write("FAILED", "stage " + run.failedStage + "\n" + run.error + "\n");
    return run;
}

void parallelFor(int count, int threads, const std::function<void(int)>& body) {
    if (count <= 0) return;
    const int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

SweepParameter parseSweepParameter(const std::string& name) {
    if (name == "P_theta") return SweepParameter::PTheta;
    if (name == "T") return SweepParameter::Temperature;
    if (name == "nu") return SweepParameter::Carrier;
    if (name == "tau_g") return SweepParameter::TauG;
    throw std::invalid_argument("unknown sweep parameter '" + name + "' (P_theta, T, nu, tau_g)");
}

std::string toString(SweepParameter p) {
    switch (p) {
        case SweepParameter::PTheta: return "P_theta";
        case SweepParameter::Temperature: return "T";
        case SweepParameter::Carrier: return "nu";
        case SweepParameter::TauG: return "tau_g";
    }
    return "?";
}

std::vector<SweepRow> sweep(const ExperimentConfig& c, SweepParameter parameter, const std::vector<double>& grid,
                            int threads) {
    if (grid.empty()) throw std::invalid_argument("sweep: grid is empty");
    c.validate();
    const TrapSetup setup = c.trap();
    std::vector<SweepRow> rows(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        rows[i].index = static_cast<int>(i);
        rows[i].value = grid[i];
    }
    auto fail = [](SweepRow& r, const std::string& stageName, const std::exception& e) {
        r.status = "error:" + stageName;
        r.error = e.what();
    };

    if (parameter == SweepParameter::PTheta) {
        parallelFor(static_cast<int>(grid.size()), threads, [&](int i) {
            SweepRow& r = rows[i];
            try {
                const CrystalState s = findEquilibrium(setup, grid[i], c.anneal);
                r.rotationFrequency = s.rotationFrequency;
                r.anisotropy = s.anisotropy;
                if (!s.converged) throw std::runtime_error("equilibrium not converged");
            } catch (const std::exception& e) {
                fail(r, "equilibrium", e);
            }
        });
        return rows;
    }

    // shared equilibrium and modes
    ExperimentConfig base = c;
    const RunArtifacts shared = runExperiment(base, {false, 1, "bands"});
    if (!shared.ok) {
        for (auto& r : rows) {
            r.status = "error:" + shared.failedStage;
            r.error = shared.error;
        }
        return rows;
    }
    const CrystalState& state = *shared.state;
    const ModeSpectrum& spectrum = *shared.spectrum;
    const BandInfo& bands = *shared.bands;
    const IonSpecies& species = SpeciesTable::builtin().find(c.species);
    const double hbarTilde = deriveScales(setup, species).hbarTilde;

    auto fill = [&](SweepRow& r, const GateResult& g) {
        r.hasGate = true;
        r.rotationFrequency = state.rotationFrequency;
        r.anisotropy = state.anisotropy;
        r.nuOverOmegaC = g.spec.carrierFrequency / setup.cyclotronFrequency;
        r.tauGOverTauR = g.rotationPeriodRatio;
        r.amplitude = g.amplitude;
        r.theta = g.phase.theta;
    };
    auto gateFor = [&](const ExperimentConfig& cfg) {
        GateResult g = runGate(makeGateSpec(cfg, state, bands), state, spectrum, setup, hbarTilde, {});
        if (!(phaseError(g.phase.theta) < 1e-6)) throw std::runtime_error("phase calibration off by more than 1e-6");
        return g;
    };

    if (parameter == SweepParameter::Temperature) {
        for (double t : grid)
            if (!(t > 0.0)) throw std::invalid_argument("sweep: temperatures must be positive");
        GateResult g;
        try {
            g = gateFor(c);
        } catch (const std::exception& e) {
            for (auto& r : rows) fail(r, "gate", e);
            return rows;
        }
        parallelFor(static_cast<int>(grid.size()), threads, [&](int i) {
            SweepRow& r = rows[i];
            fill(r, g);
            const FidelityPoint p = fidelity(g.residual1, g.residual2, g.amplitude, spectrum.frequencies, grid[i], setup);
            r.temperature = p.temperature;
            r.infidelity = p.infidelity;
            r.branch = p.branch;
        });
        return rows;
    }

    parallelFor(static_cast<int>(grid.size()), threads, [&](int i) {
        SweepRow& r = rows[i];
        ExperimentConfig cfg = c;
        if (parameter == SweepParameter::Carrier) {
            cfg.autoGap = false;
            cfg.nuHz = grid[i];
        } else if (c.tauG > 0.0) {
            cfg.tauG = grid[i];
        } else {
            cfg.tauGOverTauR = grid[i];
        }
        try {
            const GateResult g = gateFor(cfg);
            fill(r, g);
            r.infidelity = -1.0;
            for (double t : c.temperatures) {
                const FidelityPoint p = fidelity(g.residual1, g.residual2, g.amplitude, spectrum.frequencies, t, setup);
                if (p.infidelity > r.infidelity) {
                    r.infidelity = p.infidelity;
                    r.temperature = t;
                    r.branch = p.branch;
                }
            }
        } catch (const std::exception& e) {
            fail(r, "gate", e);
        }
    });
    return rows;
}

std::string formatSweepCsv(SweepParameter parameter, const std::vector<SweepRow>& rows) {
    std::ostringstream o;
    o << "index,parameter,value,status,omega_r_over_omega_c,beta,nu_over_omega_c,tau_g_over_tau_r,amplitude,theta,"
         "T_K,infidelity,branch,error\n";
    for (const auto& r : rows) {
        o << r.index << "," << toString(parameter) << "," << fmt17(r.value) << "," << r.status << ",";
        const bool eq = r.status == "ok" || r.hasGate;
        o << (eq ? fmt17(r.rotationFrequency) : "") << "," << (eq ? fmt17(r.anisotropy) : "") << ",";
        if (r.hasGate) {
            o << fmt17(r.nuOverOmegaC) << "," << fmt17(r.tauGOverTauR) << "," << fmt17(r.amplitude) << ","
              << fmt17(r.theta) << "," << fmt17(r.temperature) << "," << fmt17(r.infidelity) << "," << r.branch;
        } else {
            o << ",,,,,,";
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        o << "," << err << "\n";
    }
    return o.str();
}

void saveState(const CrystalState& state, const std::string& path) { saveEquilibrium(state, path); }

CrystalState loadState(const std::string& path) { return loadEquilibrium(path); }

std::string plotScript(const std::string& csv, const std::string& kind) {
    std::ostringstream o;
    o << "set datafile separator ','\n";
    if (kind == "P_theta") {
        o << "set xlabel 'P_theta [l_s^2 m omega_c]'\nset ylabel 'omega_r / omega_c'\n";
        o << "plot '" << csv << "' skip 1 using 3:5 with linespoints title 'omega_r / omega_c'\n";
    } else if (kind == "fidelity") {
        o << "set logscale xy\nset xlabel 'T [K]'\nset ylabel '1 - F'\n";
        o << "plot '" << csv << "' skip 1 using 1:3 with linespoints title '1 - F'\n";
    } else if (kind == "T" || kind == "nu" || kind == "tau_g") {
        o << "set logscale xy\nset xlabel '" << kind << "'\nset ylabel '1 - F'\n";
        o << "plot '" << csv << "' skip 1 using 3:12 with linespoints title '1 - F'\n";
    } else if (kind == "spectrum") {
        o << "set xlabel 'mode'\nset ylabel 'omega / omega_c'\nset logscale y\n";
        o << "plot '" << csv << "' skip 1 using 1:2 with points title 'omega_k'\n";
    } else {
        throw std::invalid_argument("plotScript: unknown kind '" + kind + "'");
    }
    return o.str();
}

}  // namespace wigner
