#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "wigner/constants.hpp"
#include "wigner/crystal.hpp"
#include "wigner/gate.hpp"
#include "wigner/modes.hpp"

using namespace wigner;
namespace k = wigner::constants;

namespace {

AnnealSchedule quickSchedule() {
    AnnealSchedule s;
    s.cycles = 12;
    s.stepsPerCycle = 100;
    s.seed = 5;
    return s;
}

struct Fixture {
    TrapSetup setup = makeTrap(76.08e3, 0.7, 7);
    CrystalState state;
    ModeSpectrum spectrum;
    double hbarTilde = 0.0;
    Fixture() {
        state = findEquilibrium(setup, 20.0, quickSchedule());
        spectrum = williamson(buildHessian(state, setup));
        hbarTilde = deriveScales(setup, SpeciesTable::builtin().find("Be+")).hbarTilde;
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

GateSpec smallSpec(const Fixture& f) {
    const auto [a, b] = defaultPair(f.state);
    const double tauR = 2.0 * k::pi / (f.state.rotationFrequency * f.setup.cyclotronFrequency);
    return GateSpec::pulse(a, b, 20.0 * f.setup.cyclotronFrequency, 0.1 * tauR);
}

DriveShape syntheticShape(double nu, double width, double windowWidths = 6.0) {
    DriveShape d;
    d.nu = nu;
    d.width = width;
    d.duration = 2.0 * windowWidths * width;
    d.center = windowWidths * width;
    return d;
}

}  // namespace

TEST_CASE("phase kernel equals the time-stepped phase of a driven mode") {
    const DriveShape shape = syntheticShape(1.3, 8.0);
    const double w = 0.7;
    const std::complex<double> c(0.3, -0.2);
    const PanelQuadrature q = makeQuadrature(shape, w, {});
    const OdeResult ode = integrateModeOde(w, c, shape, 40000);
    CHECK(std::norm(c) * phaseKernel(q, shape, w) == doctest::Approx(ode.phase).epsilon(1e-9));
    const std::complex<double> beta = -std::complex<double>(0, 1) * c * std::polar(1.0, -w * shape.duration) *
                                      envelopeTransform(q, shape, w);
    CHECK(std::abs(beta - ode.beta) < 1e-9 * std::abs(beta));
}

TEST_CASE("envelope transform of a Gaussian pulse matches its closed form") {
    const DriveShape shape = syntheticShape(2.0, 5.0);
    const PanelQuadrature q = makeQuadrature(shape, 3.0, {});
    for (double w : {0.5, 1.5, 2.5}) {
        // e^{i w t_c} sqrt(pi) sigma (e^{-(w - nu)^2 s^2 / 4} + e^{-(w + nu)^2 s^2 / 4}) / 2
        const double s = shape.width;
        const std::complex<double> exact = std::polar(1.0, w * shape.center) * std::sqrt(k::pi) * s * 0.5 *
                                           (std::exp(-(w - 2.0) * (w - 2.0) * s * s / 4.0) +
                                            std::exp(-(w + 2.0) * (w + 2.0) * s * s / 4.0));
        CHECK(std::abs(envelopeTransform(q, shape, w) - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("adiabatic and modulated limits of the phase kernel") {
    // slow drive: Phi -> int e^2 / omega
    const DriveShape slow = syntheticShape(1e-9, 60.0);
    const double w = 2.0;
    const double intE2 = std::sqrt(k::pi / 2.0) * slow.width;
    CHECK(phaseKernel(makeQuadrature(slow, w, {}), slow, w) == doctest::Approx(intE2 / w).epsilon(1e-3));
    // fast carrier: Phi -> -omega int G^2 / (2 (nu^2 - omega^2))
    const DriveShape fast = syntheticShape(40.0, 20.0);
    const double wf = 0.5;
    const double intG2 = std::sqrt(k::pi / 2.0) * fast.width;
    const double expect = -wf * intG2 / (2.0 * (1600.0 - wf * wf));
    CHECK(phaseKernel(makeQuadrature(fast, wf, {}), fast, wf) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("under-resolved quadrature is refused with the required count") {
    const DriveShape shape = syntheticShape(50.0, 4.0);
    QuadratureSettings s;
    const int need = requiredNodes(shape, 1.0, s);
    CHECK(need >= static_cast<int>(20 * shape.duration * 51.0 / (2 * k::pi)));
    s.totalNodes = need / 2;
    try {
        makeQuadrature(shape, 1.0, s);
        FAIL("expected refusal");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(std::to_string(need)) != std::string::npos);
    }
    s.totalNodes = need + 100;
    CHECK(makeQuadrature(shape, 1.0, s).nodes.size() >= static_cast<size_t>(need + 100));
}

TEST_CASE("gate spec validation and defaults") {
    GateSpec g;
    g.ion1 = 0;
    g.ion2 = 0;
    g.carrierFrequency = 1.0;
    g.gateTime = 1.0;
    CHECK_THROWS(g.validate());
    g.ion2 = 1;
    CHECK_NOTHROW(g.validate());
    CHECK(g.center() == 0.5);
    CHECK(g.width() == doctest::Approx(1.0 / 12.0));
    const GateSpec p = GateSpec::pulse(0, 1, 3.0, 2.0);
    CHECK(p.gateTime == 24.0);
    CHECK(p.center() == 12.0);
    CHECK(p.width() == 2.0);
}

TEST_CASE("force profile pushes both ions along their separation and vanishes at the edges") {
    const Fixture& f = fixture();
    const GateSpec spec = smallSpec(f);
    const Eigen::VectorXd mid = forceProfile(spec.center(), spec, f.state, f.setup, f.hbarTilde);
    const Eigen::Vector3d u = pairDirection(f.state, spec.ion1, spec.ion2);
    const Eigen::Vector3d f1 = mid.segment<3>(3 * spec.ion1), f2 = mid.segment<3>(3 * spec.ion2);
    CHECK((f1 - f2).norm() == 0.0);
    CHECK(std::abs(f1.normalized().dot(u)) == doctest::Approx(1.0));
    CHECK(mid.norm() == doctest::Approx(std::sqrt(2.0) * f1.norm()));
    const double edge = forceProfile(0.0, spec, f.state, f.setup, f.hbarTilde).norm();
    CHECK(edge < 1e-15 * mid.norm());
    CHECK_THROWS(forceProfile(-1e-9, spec, f.state, f.setup, f.hbarTilde));
}

TEST_CASE("force integrates to zero over the window when nu tau_g is large") {
    const Fixture& f = fixture();
    const GateSpec spec = smallSpec(f);
    REQUIRE(spec.carrierFrequency * spec.gateTime >= 50.0);
    const Eigen::Vector3d u = pairDirection(f.state, spec.ion1, spec.ion2);
    const int n = 20000;
    const double h = spec.gateTime / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * forceProfile(i * h, spec, f.state, f.setup, f.hbarTilde).segment<3>(3 * spec.ion1).dot(u);
    }
    const double integral = sum * h / 3.0;
    const double peak = forceProfile(spec.center(), spec, f.state, f.setup, f.hbarTilde).segment<3>(3 * spec.ion1).norm();
    CHECK(std::abs(integral) < 1e-6 * peak * spec.gateTime);
}

TEST_CASE("default pair is a nearest-neighbour pair next to the center") {
    const Fixture& f = fixture();
    const auto [a, b] = defaultPair(f.state);
    CHECK(a < b);
    double dmin = 1e300;
    for (int j = 0; j < f.state.ionCount(); ++j)
        if (j != a) dmin = std::min(dmin, (f.state.ion(a) - f.state.ion(j)).norm());
    CHECK((f.state.ion(a) - f.state.ion(b)).norm() == doctest::Approx(dmin));
    CrystalState one = f.state;
    one.positions = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_WITH(defaultPair(one), doctest::Contains("no pair"));
}

TEST_CASE("residual displacement carries amplitude, coupling and the transform over sqrt(omega)") {
    const Fixture& f = fixture();
    GateSpec spec = smallSpec(f);
    spec.amplitude = 2.5;
    const Eigen::VectorXcd r = residualDisplacement(spec, f.state, f.spectrum, f.setup, f.hbarTilde, spec.ion1);
    GateSpec unit = spec;
    unit.amplitude = 1.0;
    const Eigen::MatrixXcd c = modeCouplings(unit, f.state, f.spectrum, f.setup, f.hbarTilde);
    const DriveShape shape = driveShape(spec, f.setup);
    const PanelQuadrature q = makeQuadrature(shape, f.spectrum.frequencies.maxCoeff(), spec.quadrature);
    for (int kk = 0; kk < f.spectrum.modeCount(); kk += 5) {
        const double w = f.spectrum.frequencies[kk];
        const std::complex<double> expect = 2.5 * c(kk, 0) * envelopeTransform(q, shape, w) / std::sqrt(w);
        CHECK(std::abs(r[kk] - expect) <= 1e-12 * std::abs(expect));
    }
    CHECK_THROWS(residualDisplacement(spec, f.state, f.spectrum, f.setup, f.hbarTilde, 99));
}

TEST_CASE("calibration reaches pi and the phase scales with the amplitude squared") {
    const Fixture& f = fixture();
    GateSpec spec = smallSpec(f);
    const PhaseResult unit = twoQubitPhase(spec, f.state, f.spectrum, f.setup, f.hbarTilde);
    CHECK(unit.theta == doctest::Approx(unit.theta00 + unit.theta11 - unit.theta01 - unit.theta10).epsilon(1e-8));
    spec.amplitude = calibrateAmplitude(spec, f.state, f.spectrum, f.setup, f.hbarTilde);
    const PhaseResult cal = twoQubitPhase(spec, f.state, f.spectrum, f.setup, f.hbarTilde);
    CHECK(phaseError(cal.theta) < 1e-6);
    CHECK(std::abs(cal.theta) == doctest::Approx(k::pi).epsilon(1e-12));
    CHECK(cal.theta / unit.theta == doctest::Approx(spec.amplitude * spec.amplitude).epsilon(1e-12));
    CHECK(phaseError(-k::pi) < 1e-15);
}

TEST_CASE("fidelity follows the thermal displacement formula") {
    TrapSetup t = makeTrap(76.08e3, 0.7, 1);
    Eigen::VectorXcd r1(2), r2(2);
    r1 << std::complex<double>(1e-3, 2e-3), std::complex<double>(-4e-4, 0.0);
    r2 << std::complex<double>(5e-4, -1e-3), std::complex<double>(3e-4, 1e-4);
    Eigen::VectorXd w(2);
    w << 0.1, 0.6;
    const double amp = 1.7, temp = 1e-3;
    double sp = 0.0, sm = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double boltz = std::exp(-k::hbar * w[i] * t.cyclotronFrequency / (k::kB * temp));
        sp += amp * amp / 4.0 * std::norm(r1[i] + r2[i]) / (1.0 - boltz);
        sm += amp * amp / 4.0 * std::norm(r1[i] - r2[i]) / (1.0 - boltz);
    }
    const FidelityPoint p = fidelity(r1, r2, amp, w, temp, t);
    CHECK(p.fidelity == doctest::Approx(std::exp(-std::max(sp, sm))).epsilon(1e-12));
    CHECK(p.infidelity == doctest::Approx(1.0 - std::exp(-std::max(sp, sm))).epsilon(1e-9));
    CHECK(p.branch == (sp >= sm ? '+' : '-'));
    CHECK(fidelity(r1, r2, amp, w, 1e-2, t).infidelity > p.infidelity);
    CHECK(fidelity(Eigen::VectorXcd::Zero(2), Eigen::VectorXcd::Zero(2), amp, w, temp, t).fidelity == 1.0);
    CHECK_THROWS(fidelity(r1, r2, amp, w, 0.0, t));
}

TEST_CASE("gate run emits a fidelity table and a phase report") {
    const Fixture& f = fixture();
    const GateResult g = runGate(smallSpec(f), f.state, f.spectrum, f.setup, f.hbarTilde, {1e-4, 1e-3, 1e-2});
    REQUIRE(g.curve.size() == 3);
    CHECK(g.curve[0].infidelity <= g.curve[1].infidelity);
    CHECK(g.curve[1].infidelity <= g.curve[2].infidelity);
    CHECK(g.rotationPeriodRatio == doctest::Approx(0.1).epsilon(1e-12));
    const std::string csv = formatFidelityCsv(g.curve);
    CHECK(csv.rfind("T_K,F,infidelity,branch\n", 0) == 0);
    const auto j = nlohmann::json::parse(formatPhaseReport(g, f.setup));
    CHECK(j["theta"].get<double>() == doctest::Approx(g.phase.theta));
    CHECK(j["tau_g_over_tau_r"].get<double>() == doctest::Approx(0.1));
    CHECK(j.contains("theta_01"));
    CHECK(j.contains("amplitude"));
    CHECK(j.contains("nu_rad_per_s"));
}

TEST_CASE("sampled carrier reproduces the analytic cosine") {
    const Fixture& f = fixture();
    GateSpec spec = smallSpec(f);
    const double step = spec.gateTime / 20000.0;
    spec.carrier.step = step;
    for (int i = 0; i <= 20000; ++i)
        spec.carrier.values.push_back(std::cos(spec.carrierFrequency * (i * step - spec.center())));
    GateSpec plain = smallSpec(f);
    const PhaseResult a = twoQubitPhase(spec, f.state, f.spectrum, f.setup, f.hbarTilde);
    const PhaseResult b = twoQubitPhase(plain, f.state, f.spectrum, f.setup, f.hbarTilde);
    CHECK(a.theta == doctest::Approx(b.theta).epsilon(1e-4));
}

TEST_CASE("form factors: leading term cancels off the diagonal and the expansion matches") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 7);
    const CrystalState s = findEquilibrium(t, 0.0, quickSchedule());
    const OrthogonalModes o = orthogonalModes(s, t);
    const double hb = 1e-4;
    const double nu = 100.0 * o.frequencies.maxCoeff();
    const Eigen::Matrix3d lead = formFactor(o, 0, 3, FormFactorRegime::LeadingTerm, nu, hb);
    CHECK(lead.cwiseAbs().maxCoeff() * 4.0 * hb * nu * nu < 1e-12);
    const Eigen::Matrix3d diag = formFactor(o, 2, 2, FormFactorRegime::LeadingTerm, nu, hb);
    CHECK((diag * (-4.0 * hb * nu * nu) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::Matrix3d mod = formFactor(o, 0, 3, FormFactorRegime::Modulated, nu, hb);
    const Eigen::Matrix3d exp = formFactor(o, 0, 3, FormFactorRegime::ModulatedExpansion, nu, hb);
    CHECK((mod - exp).cwiseAbs().maxCoeff() < 1e-3 * exp.cwiseAbs().maxCoeff());
    CHECK_THROWS(formFactor(o, 0, 3, FormFactorRegime::Modulated, o.frequencies[10], hb));
}

TEST_CASE("laser resources reject unphysical geometry") {
    const TrapSetup t = makeTrap(7.608e6, 0.02, 30);
    const IonSpecies& be = SpeciesTable::builtin().find("Be+");
    LaserGeometry g{2e-6, k::pi / 2, k::twoPi * 100e9, 313e-9};
    const LaserResources r = laserResources(t, be, g, 1.0, 10e-6);
    CHECK(r.power > 0.0);
    CHECK(r.scatteredPhotons > 0.0);
    CHECK(r.scatteringFidelity < 1.0);
    CHECK(r.scatteringFidelity > 0.0);
    g.angle = 0.0;
    CHECK_THROWS(laserResources(t, be, g, 1.0, 10e-6));
    g.angle = k::pi / 2;
    g.detuning = 0.0;
    CHECK_THROWS(laserResources(t, be, g, 1.0, 10e-6));
}
