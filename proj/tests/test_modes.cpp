#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wigner/crystal.hpp"
#include "wigner/modes.hpp"

using namespace wigner;

namespace {

AnnealSchedule quickSchedule() {
    AnnealSchedule s;
    s.cycles = 12;
    s.stepsPerCycle = 100;
    s.seed = 5;
    return s;
}

const CrystalState& rotatingCrystal() {
    static const CrystalState s = findEquilibrium(makeTrap(76.08e3, 0.7, 7), 20.0, quickSchedule());
    return s;
}

}  // namespace

TEST_CASE("symplectic form") {
    const Eigen::MatrixXd j = symplecticForm(3);
    CHECK(j.rows() == 6);
    CHECK((j * j + Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);
    CHECK(j(0, 1) == 1.0);
    CHECK(j(1, 0) == -1.0);
    CHECK(minimalCoupling(0.5) == 0.0);
}

TEST_CASE("single ion in a rotating frame has frequencies omega_xy -+ c and alpha_z") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 1);
    const double x = 0.45;
    const CrystalState s = makeState(Eigen::VectorXd::Zero(3), x, t);
    const ModeSpectrum m = williamson(buildHessian(s, t));
    const double wxy = 0.5 * std::sqrt(1.0 - 2.0 * 0.49);
    const double c = 0.5 - x;
    REQUIRE(m.modeCount() == 3);
    CHECK(m.frequencies[0] == doctest::Approx(wxy - c).epsilon(1e-12));
    CHECK(m.frequencies[1] == doctest::Approx(wxy + c).epsilon(1e-12));
    CHECK(m.frequencies[2] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("analytic Hessian matches finite differences of the Hamiltonian") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 7);
    const CrystalState& s = rotatingCrystal();
    const QuadraticHamiltonian qh = buildHessian(s, t);
    const Eigen::MatrixXd fd = finiteDifferenceHessian(s, t, 1e-3);
    CHECK((qh.hessian - fd).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((qh.hessian - qh.hessian.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(qh.rotationNullVector.size() == 42);
    CHECK((qh.hessian * qh.rotationNullVector).norm() < 1e-8);
}

TEST_CASE("Williamson basis is symplectic and diagonalizes H") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 7);
    const QuadraticHamiltonian qh = buildHessian(rotatingCrystal(), t);
    const ModeSpectrum m = williamson(qh);
    CHECK(symplecticResidual(m.S) < 1e-10);
    CHECK(std::is_sorted(m.frequencies.data(), m.frequencies.data() + m.modeCount()));
    CHECK(std::count(m.regularized.begin(), m.regularized.end(), true) == 1);

    Eigen::MatrixXd h = qh.hessian;
    h += 1e-8 * qh.rotationNullVector * qh.rotationNullVector.transpose();
    CHECK(reconstructionResidual(m.S, m.frequencies, h) < 1e-10);
    const Eigen::VectorXd oracle = symplecticEigenvaluesOracle(h);
    CHECK((oracle - m.frequencies).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("an indefinite Hessian is rejected") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(4, 4);
    h(2, 2) = -1.0;
    CHECK_THROWS_AS(williamsonDecompose(h), std::domain_error);
}

TEST_CASE("symplectic eigenvalues of a diagonal oscillator pair") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
    h.diagonal() << 4.0, 1.0, 9.0, 1.0;  // omega = 2 and 3
    const ModeSpectrum m = williamsonDecompose(h);
    CHECK(m.frequencies[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.frequencies[1] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(symplecticResidual(m.S) < 1e-14);
}

TEST_CASE("at omega_r = omega_c / 2 symplectic and orthogonal spectra coincide") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 7);
    const CrystalState s = findEquilibrium(t, 0.0, quickSchedule());
    const ModeSpectrum m = williamson(buildHessian(s, t));
    const OrthogonalModes o = orthogonalModes(s, t);
    REQUIRE(o.frequencies.size() == m.modeCount());
    for (int k = 0; k < m.modeCount(); ++k) {
        if (m.regularized[k]) continue;
        CHECK(std::abs(o.frequencies[k] - m.frequencies[k]) < 1e-8);
    }
    CHECK((o.M * o.M.transpose() - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS(orthogonalModes(rotatingCrystal(), t));
}

TEST_CASE("bands of a planar crystal") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 7);
    ModeSpectrum m = williamson(buildHessian(rotatingCrystal(), t));
    const BandInfo b = classifyBands(m, t);
    CHECK(b.count[static_cast<int>(Band::Axial)] == 7);
    CHECK(b.count[static_cast<int>(Band::ExB)] + b.count[static_cast<int>(Band::Cyclotron)] == 13);
    CHECK(b.upper[static_cast<int>(Band::ExB)] < b.lower[static_cast<int>(Band::Cyclotron)]);
    const BandGap& g = widestGap(b);
    CHECK(g.geometricMean() == doctest::Approx(std::sqrt(g.lower * g.upper)));
    CHECK(g.lower < g.geometricMean());
    CHECK(g.geometricMean() < g.upper);
    m.bands = b.labels;
    const std::string csv = formatSpectrumCsv(m, t.cyclotronFrequency);
    CHECK(csv.rfind("mode,omega_over_omega_c,frequency_Hz,band,regularized,w_ion1", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 22);
    for (int k = 0; k < m.modeCount(); ++k) CHECK(participation(m, k).sum() == doctest::Approx(1.0));
}
