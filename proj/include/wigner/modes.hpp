#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wigner/crystal.hpp"
#include "wigner/scales.hpp"

namespace wigner {

// Index of coordinate n (0 = x, 1 = y, 2 = z) of ion k in the interleaved phase vector
// d = (q1x, p1x, q1y, p1y, q1z, p1z, q2x, ...).
inline int qIndex(int ion, int n) { return 2 * (3 * ion + n); }
inline int pIndex(int ion, int n) { return 2 * (3 * ion + n) + 1; }

// Symplectic form J = diag([[0, 1], [-1, 0]], ...) of size 2n.
Eigen::MatrixXd symplecticForm(int dofs);

// Coefficient of the minimal-coupling term (y p_x - x p_y) in the frame rotating at
// x = omega / omega_c; vanishes at x = 1/2.
double minimalCoupling(double x);

// Dimensionless Hamiltonian in the frame rotating at x, evaluated on an absolute phase
// vector (positions and canonical momenta, interleaved).
double dimensionlessHamiltonian(const Eigen::VectorXd& d, double x, const TrapSetup& setup);

// Phase vector of the rigid equilibrium (canonical momenta of a crystal at rest in the frame).
Eigen::VectorXd equilibriumPhaseVector(const CrystalState& state);

struct QuadraticHamiltonian {
    Eigen::MatrixXd hessian;
    CrystalState reference;
    Eigen::VectorXd rotationNullVector;  // empty when the crystal has no rotational zero mode
};

QuadraticHamiltonian buildHessian(const CrystalState& state, const TrapSetup& setup);

// Central finite-difference Hessian of dimensionlessHamiltonian around the equilibrium.
Eigen::MatrixXd finiteDifferenceHessian(const CrystalState& state, const TrapSetup& setup, double h = 1e-4);

enum class Band { Axial, ExB, Cyclotron };
std::string toString(Band b);

struct ModeSpectrum {
    Eigen::MatrixXd S;            // symplectic basis, rows (2k, 2k+1) belong to mode k
    Eigen::VectorXd frequencies;  // omega_k / omega_c, ascending
    Eigen::MatrixXcd A;           // A(k, j) = S(2k, j) + i S(2k+1, j)
    std::vector<bool> regularized;
    std::vector<Band> bands;

    int modeCount() const { return static_cast<int>(frequencies.size()); }
};

struct WilliamsonOptions {
    double regularization = 1e-8;
};

// Williamson normal form of a real symmetric positive-definite 2n x 2n matrix.
ModeSpectrum williamsonDecompose(const Eigen::MatrixXd& h);
ModeSpectrum williamson(const QuadraticHamiltonian& qh, const WilliamsonOptions& options = {});

// Oracle: moduli of the eigenvalues of J H, sorted ascending, one per pair.
Eigen::VectorXd symplecticEigenvaluesOracle(const Eigen::MatrixXd& h);

double symplecticResidual(const Eigen::MatrixXd& S);
double reconstructionResidual(const Eigen::MatrixXd& S, const Eigen::VectorXd& frequencies, const Eigen::MatrixXd& h);

struct OrthogonalModes {
    Eigen::MatrixXd M;            // rows are modes, columns (ion, coordinate) = 3 k + n
    Eigen::VectorXd frequencies;  // omega_K / omega_c, ascending
};

OrthogonalModes orthogonalModes(const CrystalState& state, const TrapSetup& setup);

struct BandGap {
    double lower = 0.0;
    double upper = 0.0;
    Band below = Band::ExB;
    Band above = Band::ExB;
    double width() const { return upper - lower; }
    double geometricMean() const;
};

struct BandInfo {
    std::vector<Band> labels;
    std::vector<BandGap> gaps;  // ascending
    double lower[3] = {0, 0, 0};  // indexed by Band
    double upper[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
};

BandInfo classifyBands(const ModeSpectrum& spectrum, const TrapSetup& setup);

// Widest gap (absolute width); throws when the bands overlap completely.
const BandGap& widestGap(const BandInfo& info);

// Per-ion participation weights of mode k (sum of |A|^2 over the ion's coordinates, normalized).
Eigen::VectorXd participation(const ModeSpectrum& spectrum, int mode);

std::string formatSpectrumCsv(const ModeSpectrum& spectrum, double omegaC);

}  // namespace wigner
