#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wigner/crystal.hpp"
#include "wigner/gate.hpp"
#include "wigner/modes.hpp"
#include "wigner/scales.hpp"

namespace wigner {

// Key = value text, '#' starts a comment. Frequencies in Hz, times in s, temperatures in K.
struct ExperimentConfig {
    std::string species = "Be+";
    double nuCyclotronHz = 0.0;
    double axialRatio = 0.0;
    int ionCount = 0;
    double pTheta = 0.0;
    std::string pair = "inner";  // "inner" or "i,j" (zero-based)
    bool autoGap = true;
    double nuHz = 0.0;
    double tauG = 0.0;          // s
    double tauGOverTauR = 0.0;  // used when tauG is 0
    double windowWidths = 6.0;  // the force window spans +-windowWidths tauG
    std::vector<double> temperatures;
    AnnealSchedule anneal;
    int panelNodes = 16;
    int nodesPerPeriod = 20;
    std::string outDir = "out";

    void validate() const;
    TrapSetup trap() const;
};

// "a, b, c", "logspace start stop count" or "linspace start stop count".
std::vector<double> parseGridSpec(const std::string& text);

ExperimentConfig parseConfig(const std::string& text);
ExperimentConfig loadConfig(const std::string& path);
// Canonical text, parseable by parseConfig, numbers with 17 significant digits.
std::string formatConfig(const ExperimentConfig& config);

struct StageRecord {
    std::string name;
    bool ok = false;
    double seconds = 0.0;
    std::string message;
};

struct RunArtifacts {
    std::string directory;
    std::vector<std::string> files;
    std::vector<StageRecord> stages;
    bool ok = false;
    std::string failedStage;
    std::string error;

    std::optional<CrystalState> state;
    std::optional<ModeSpectrum> spectrum;
    std::optional<BandInfo> bands;
    std::optional<GateResult> gate;
    double symplecticError = 0.0;
};

struct RunOptions {
    bool writeFiles = true;
    int threads = 1;
    // Stop after this stage ("equilibrium", "williamson", "bands", "gate", "fidelity").
    std::string lastStage = "fidelity";
};

// equilibrium -> hessian -> williamson -> bands -> gate -> fidelity. Stage errors are caught and
// recorded; the artifacts written so far stay on disk next to a FAILED marker.
RunArtifacts runExperiment(const ExperimentConfig& config, const RunOptions& options = {});

// Gate pieces resolved from a config against a computed crystal.
std::pair<int, int> resolvePair(const ExperimentConfig& config, const CrystalState& state);
double resolveCarrier(const ExperimentConfig& config, const BandInfo& bands, const TrapSetup& setup);
double resolveTauG(const ExperimentConfig& config, const CrystalState& state, const TrapSetup& setup);
GateSpec makeGateSpec(const ExperimentConfig& config, const CrystalState& state, const BandInfo& bands);

enum class SweepParameter { PTheta, Temperature, Carrier, TauG };
SweepParameter parseSweepParameter(const std::string& name);
std::string toString(SweepParameter p);

struct SweepRow {
    int index = 0;
    double value = 0.0;
    std::string status = "ok";  // ok or error:<stage>
    std::string error;
    double rotationFrequency = 0.0;
    double anisotropy = 0.0;
    double nuOverOmegaC = 0.0;
    double tauGOverTauR = 0.0;
    double amplitude = 0.0;
    double theta = 0.0;
    double temperature = 0.0;
    double infidelity = 0.0;
    char branch = ' ';
    bool hasGate = false;
};

// P_theta points run the equilibrium stage only. T, nu and tau_g points share one equilibrium;
// nu and tau_g rows report the worst infidelity over the configured temperature grid. The grid
// value for tau_g is tau_g / tau_r when the config uses the ratio, seconds otherwise; nu is in Hz.
std::vector<SweepRow> sweep(const ExperimentConfig& config, SweepParameter parameter, const std::vector<double>& grid,
                            int threads = 1);
std::string formatSweepCsv(SweepParameter parameter, const std::vector<SweepRow>& rows);

// Runs body(i) for i in [0, count) on a pool; results are placed by index.
void parallelFor(int count, int threads, const std::function<void(int)>& body);

void saveState(const CrystalState& state, const std::string& path);
CrystalState loadState(const std::string& path);

// gnuplot script for a sweep CSV or a fidelity CSV.
std::string plotScript(const std::string& csvPath, const std::string& kind);

std::string versionString();

}  // namespace wigner
