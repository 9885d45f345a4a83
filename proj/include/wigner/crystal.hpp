#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "wigner/scales.hpp"

namespace wigner {

// Positions are stored flat as (x1, y1, z1, x2, ...) in units of l_s.
// Rotation frequency is stored as omega_r / omega_c, angular momentum in l_s^2 m omega_c,
// energy in E_s.
struct CrystalState {
    double axialRatio = 0.0;
    Eigen::VectorXd positions;
    double angularMomentum = 0.0;
    double rotationFrequency = 0.5;
    double anisotropy = 0.0;
    double energy = 0.0;
    bool converged = false;
    double gradientNorm = 0.0;
    int refinementSteps = 0;

    int ionCount() const { return static_cast<int>(positions.size() / 3); }
    Eigen::Vector3d ion(int k) const { return positions.segment<3>(3 * k); }
};

// Radial curvature of the co-rotating potential, alpha_z^2 beta, for x = omega_r / omega_c.
double radialCurvature(double x, double axialRatio);

// (alpha_z^2 / 2) sum (z^2 + beta r^2) + sum_{k<j} 1 / |r_k - r_j|
double effectivePotential(const Eigen::VectorXd& positions, double x, const TrapSetup& setup);
Eigen::VectorXd effectiveGradient(const Eigen::VectorXd& positions, double x, const TrapSetup& setup);
Eigen::MatrixXd effectiveHessian(const Eigen::VectorXd& positions, double x, const TrapSetup& setup);

// Coulomb part alone (energy, gradient, 3N x 3N Hessian).
double coulombEnergy(const Eigen::VectorXd& positions);
Eigen::MatrixXd coulombHessian(const Eigen::VectorXd& positions);

// P_theta = sum_k r_k^2 (1/2 - omega_r / omega_c); zero exactly at omega_r = omega_c / 2.
double totalAngularMomentum(const Eigen::VectorXd& positions, double x);
double rotationFrequencyFromPtheta(const Eigen::VectorXd& positions, double pTheta);

// Temperature is in units of the characteristic Coulomb energy kappa^{1/3} and the step in
// units of kappa^{-1/3}, kappa being the weakest confinement curvature.
struct AnnealSchedule {
    double initialTemperature = 0.05;
    double decayFactor = 0.75;
    int cycles = 24;
    int stepsPerCycle = 200;  // Metropolis sweeps (N proposals each) per cycle
    double stepSize = 0.1;
    std::uint64_t seed = 1;

    void validate() const;
};

CrystalState makeState(const Eigen::VectorXd& positions, double x, const TrapSetup& setup);

// Random starting configuration used by anneal, deterministic in (seed, stream).
Eigen::VectorXd seedConfiguration(const TrapSetup& setup, double x, std::uint64_t seed, bool planar);

// Metropolis annealing at fixed rotation frequency x = omega_r / omega_c. Returns the lowest
// energy configuration visited in each cycle.
std::vector<CrystalState> anneal(const TrapSetup& setup, double x, const AnnealSchedule& schedule,
                                 std::uint64_t stream = 0);

struct NewtonOptions {
    double tolerance = 1e-10;
    int maxIterations = 200;
};

CrystalState newtonRefine(const CrystalState& candidate, const TrapSetup& setup,
                          const NewtonOptions& options = {});

// Energy history of the last refinement, for diagnostics.
std::vector<double> newtonEnergyTrace(const CrystalState& candidate, const TrapSetup& setup,
                                      const NewtonOptions& options = {});

// Anneal + refine at fixed x, lowest-energy converged result.
CrystalState equilibriumAt(const TrapSetup& setup, double x, const AnnealSchedule& schedule,
                           std::uint64_t stream = 0);

// Self-consistent equilibrium at fixed total canonical angular momentum.
CrystalState findEquilibrium(const TrapSetup& setup, double pTheta, const AnnealSchedule& schedule);

// Number of ions per concentric ring (sorted by radius, ions within relTol grouped).
std::vector<int> shellCounts(const CrystalState& state, double relTol = 0.15);

// Equilibrium text file.
std::string formatEquilibrium(const CrystalState& state);
CrystalState parseEquilibrium(const std::string& text, const TrapSetup* setup = nullptr);
void saveEquilibrium(const CrystalState& state, const std::string& path);
CrystalState loadEquilibrium(const std::string& path);

}  // namespace wigner
