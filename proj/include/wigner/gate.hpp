#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "wigner/crystal.hpp"
#include "wigner/modes.hpp"
#include "wigner/scales.hpp"

namespace wigner {

// Sampled carrier replacing cos(nu (t - t_c)); uniform grid starting at t = 0, linear interpolation.
struct CarrierSamples {
    double step = 0.0;  // s
    std::vector<double> values;
};

struct QuadratureSettings {
    int panelNodes = 16;
    int nodesPerPeriod = 20;  // minimum, per period of max(omega_k) + nu
    int totalNodes = 0;       // 0 = automatic; otherwise refused if below the required count
};

// Physical inputs (rad/s, s). gateTime is the force window [0, gateTime]. Envelope center/width <= 0
// select gateTime / 2 and gateTime / 12, so the window holds +-6 widths and the edges sit at e^{-36}.
struct GateSpec {
    int ion1 = 0;
    int ion2 = 1;
    double carrierFrequency = 0.0;
    double gateTime = 0.0;
    double envelopeCenter = 0.0;
    double envelopeWidth = 0.0;
    double amplitude = 1.0;
    QuadratureSettings quadrature;
    CarrierSamples carrier;

    void validate() const;
    // Pulse cos(nu t) e^{-t^2 / tauG^2} centered in a window of +-windowWidths tauG.
    static GateSpec pulse(int ion1, int ion2, double nu, double tauG, double windowWidths = 6.0);
    double center() const { return envelopeCenter > 0.0 ? envelopeCenter : 0.5 * gateTime; }
    double width() const { return envelopeWidth > 0.0 ? envelopeWidth : gateTime / 12.0; }
};

// Drive shape in units of 1 / omega_c.
struct DriveShape {
    double nu = 0.0;
    double duration = 0.0;
    double center = 0.0;
    double width = 0.0;
    double sampleStep = 0.0;
    const std::vector<double>* samples = nullptr;

    double operator()(double tau) const;
};

DriveShape driveShape(const GateSpec& spec, const TrapSetup& setup);

// Per-ion dimensionless force (3N vector) at physical time t.
Eigen::VectorXd forceProfile(double t, const GateSpec& spec, const CrystalState& state, const TrapSetup& setup,
                             double hbarTilde);

// Unit in-plane vector from ion2 to ion1 and the in-plane separation.
Eigen::Vector3d pairDirection(const CrystalState& state, int ion1, int ion2, double* separation = nullptr);

// Pair of nearest neighbours whose midpoint is closest to the crystal center.
std::pair<int, int> defaultPair(const CrystalState& state);

// Coupling of the unit-amplitude force on each driven ion to every mode: column 0 = ion1, 1 = ion2.
// The drive of mode k is g_k(tau) = e(tau) (s1 C(k,0) + s2 C(k,1)).
Eigen::MatrixXcd modeCouplings(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                               const TrapSetup& setup, double hbarTilde);

struct ModeDrive {
    DriveShape shape;
    Eigen::VectorXcd coupling;  // s1 C(k,0) + s2 C(k,1), times the amplitude
    std::complex<double> operator()(int mode, double tau) const { return shape(tau) * coupling[mode]; }
};

ModeDrive modeDrive(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                    const TrapSetup& setup, double hbarTilde, int s1, int s2);

// Composite Gauss-Legendre rule on [0, duration].
struct PanelQuadrature {
    int panelNodes = 16;
    int panels = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    Eigen::MatrixXd cumulative;  // reference-panel integration matrix on [-1, 1]
};

int requiredNodes(const DriveShape& shape, double omegaMax, const QuadratureSettings& settings);
PanelQuadrature makeQuadrature(const DriveShape& shape, double omegaMax, const QuadratureSettings& settings);

// E(omega) = int_0^tau e^{i omega t} e(t) dt.
std::complex<double> envelopeTransform(const PanelQuadrature& q, const DriveShape& shape, double omega);

// Phi(omega) = Im int_0^tau e(t) e^{i omega t} conj(G(t)) dt, G(t) = int_0^t e(s) e^{i omega s} ds.
// The phase of a mode with drive C e(t) is |C|^2 Phi(omega).
double phaseKernel(const PanelQuadrature& q, const DriveShape& shape, double omega);

// Residual displacement at unit amplitude, per mode, for one driven ion.
Eigen::VectorXcd residualDisplacement(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                                      const TrapSetup& setup, double hbarTilde, int ion);

struct PhaseResult {
    double theta = 0.0;
    double theta00 = 0.0, theta01 = 0.0, theta10 = 0.0, theta11 = 0.0;
};

PhaseResult twoQubitPhase(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                          const TrapSetup& setup, double hbarTilde);

double calibrateAmplitude(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                          const TrapSetup& setup, double hbarTilde, double targetPhase = 3.14159265358979323846);

// Distance of theta from the target modulo 2 pi.
double phaseError(double theta, double targetPhase = 3.14159265358979323846);

// Time-stepped route: beta' = -i omega beta - i g, phi' = -Re(conj(g) beta), RK4 with fixed step.
struct OdeResult {
    std::complex<double> beta;
    double phase = 0.0;
};
OdeResult integrateModeOde(double omega, std::complex<double> coupling, const DriveShape& shape, int steps);

struct FidelityPoint {
    double temperature = 0.0;
    double fidelity = 1.0;
    double infidelity = 0.0;
    char branch = '+';
};

FidelityPoint fidelity(const Eigen::VectorXcd& residual1, const Eigen::VectorXcd& residual2, double amplitude,
                       const Eigen::VectorXd& frequencies, double temperature, const TrapSetup& setup);

struct GateResult {
    GateSpec spec;
    Eigen::VectorXcd residual1;
    Eigen::VectorXcd residual2;
    PhaseResult phaseAtUnitAmplitude;
    PhaseResult phase;  // at the calibrated amplitude
    double amplitude = 0.0;
    double rotationPeriodRatio = 0.0;  // envelope width / rotation period
    std::vector<FidelityPoint> curve;
};

GateResult runGate(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                   const TrapSetup& setup, double hbarTilde, const std::vector<double>& temperatures);

std::string formatFidelityCsv(const std::vector<FidelityPoint>& curve);
std::string formatPhaseReport(const GateResult& result, const TrapSetup& setup);

enum class FormFactorRegime { Adiabatic, Modulated, ModulatedExpansion, LeadingTerm };

// 3 x 3 form factor S^{(nj)}_{mu eta} from orthogonal modes (rows of M are modes), m = 1 units.
Eigen::Matrix3d formFactor(const OrthogonalModes& modes, int n, int j, FormFactorRegime regime, double nu,
                           double hbarTilde);

struct LaserGeometry {
    double waist = 0.0;       // m
    double angle = 0.0;       // rad, between the two wave vectors
    double detuning = 0.0;    // rad/s
    double wavelength = 0.0;  // m
};

struct LaserResources {
    double power = 0.0;  // W
    double scatteredPhotons = 0.0;
    double scatteringFidelity = 1.0;
};

LaserResources laserResources(const TrapSetup& setup, const IonSpecies& species, const LaserGeometry& geometry,
                              double amplitude, double pairSeparation);

}  // namespace wigner
