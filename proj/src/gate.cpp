#include "wigner/gate.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wigner/constants.hpp"

namespace wigner {

namespace k = constants;
using cd = std::complex<double>;

void GateSpec::validate() const {
    if (ion1 == ion2) throw std::invalid_argument("gate: the two target ions must differ");
    if (ion1 < 0 || ion2 < 0) throw std::invalid_argument("gate: negative ion index");
    if (!(carrierFrequency > 0.0)) throw std::invalid_argument("gate: carrier frequency must be positive");
    if (!(gateTime > 0.0)) throw std::invalid_argument("gate: gate time must be positive");
    if (envelopeWidth < 0.0) throw std::invalid_argument("gate: envelope width must be positive");
    if (quadrature.panelNodes < 2 || quadrature.nodesPerPeriod < 1)
        throw std::invalid_argument("gate: invalid quadrature settings");
    if (!carrier.values.empty() && !(carrier.step > 0.0))
        throw std::invalid_argument("gate: carrier samples need a positive step");
}

GateSpec GateSpec::pulse(int ion1, int ion2, double nu, double tauG, double windowWidths) {
    if (!(windowWidths > 0.0)) throw std::invalid_argument("gate: window must span a positive number of widths");
    GateSpec s;
    s.ion1 = ion1;
    s.ion2 = ion2;
    s.carrierFrequency = nu;
    s.gateTime = 2.0 * windowWidths * tauG;
    s.envelopeCenter = windowWidths * tauG;
    s.envelopeWidth = tauG;
    s.validate();
    return s;
}

double DriveShape::operator()(double tau) const {
    if (tau < 0.0 || tau > duration) return 0.0;
    const double s = tau - center;
    double c;
    if (samples) {
        const double u = tau / sampleStep;
        const auto i = static_cast<size_t>(std::floor(u));
        if (i + 1 >= samples->size()) {
            c = samples->empty() ? 0.0 : samples->back();
        } else {
            const double f = u - static_cast<double>(i);
            c = (1.0 - f) * (*samples)[i] + f * (*samples)[i + 1];
        }
    } else {
        c = std::cos(nu * s);
    }
    return c * std::exp(-(s * s) / (width * width));
}

DriveShape driveShape(const GateSpec& spec, const TrapSetup& setup) {
    spec.validate();
    const double wc = setup.cyclotronFrequency;
    DriveShape d;
    d.nu = spec.carrierFrequency / wc;
    d.duration = spec.gateTime * wc;
    d.center = spec.center() * wc;
    d.width = spec.width() * wc;
    if (!spec.carrier.values.empty()) {
        const double period = 2.0 * k::pi / spec.carrierFrequency;
        if (spec.carrier.step > period / 40.0)
            throw std::invalid_argument("gate: carrier samples must hold at least 40 points per modulation period");
        d.sampleStep = spec.carrier.step * wc;
        d.samples = &spec.carrier.values;
    }
    return d;
}

Eigen::Vector3d pairDirection(const CrystalState& state, int ion1, int ion2, double* separation) {
    const int n = state.ionCount();
    if (ion1 < 0 || ion2 < 0 || ion1 >= n || ion2 >= n)
        throw std::out_of_range("gate: ion index outside the crystal");
    if (ion1 == ion2) throw std::invalid_argument("gate: the two target ions must differ");
    Eigen::Vector3d d = state.ion(ion1) - state.ion(ion2);
    d[2] = 0.0;
    const double r = d.norm();
    if (!(r > 1e-12)) throw std::invalid_argument("gate: target ions have zero in-plane separation");
    if (separation) *separation = r;
    return d / r;
}

std::pair<int, int> defaultPair(const CrystalState& state) {
    const int n = state.ionCount();
    if (n < 2) throw std::invalid_argument("no pair: the crystal holds fewer than two ions");
    std::pair<int, int> best{-1, -1};
    double bestMid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            if (j != i) dmin = std::min(dmin, (state.ion(i) - state.ion(j)).norm());
        for (int j = 0; j < n; ++j) {
            if (j == i || (state.ion(i) - state.ion(j)).norm() > dmin * (1.0 + 1e-6)) continue;
            const double mid = (0.5 * (state.ion(i) + state.ion(j))).head<2>().norm();
            const std::pair<int, int> cand{std::min(i, j), std::max(i, j)};
            const double tol = best.first < 0 ? 0.0 : 1e-9 * std::max(1.0, bestMid);
            if (best.first < 0 || mid < bestMid - tol || (std::abs(mid - bestMid) <= tol && cand < best)) {
                bestMid = std::min(mid, bestMid);
                best = cand;
            }
        }
    }
    return best;
}

Eigen::VectorXd forceProfile(double t, const GateSpec& spec, const CrystalState& state, const TrapSetup& setup,
                             double hbarTilde) {
    if (t < 0.0 || t > spec.gateTime) throw std::out_of_range("forceProfile: time outside the gate window");
    const DriveShape shape = driveShape(spec, setup);
    double sep = 0.0;
    const Eigen::Vector3d u = pairDirection(state, spec.ion1, spec.ion2, &sep);
    const double wxy = 0.5 * std::sqrt(1.0 - 2.0 * setup.axialRatio * setup.axialRatio);
    const double mag = spec.amplitude * hbarTilde * wxy * shape(t * setup.cyclotronFrequency) / sep;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * state.ionCount());
    f.segment<3>(3 * spec.ion1) = mag * u;
    f.segment<3>(3 * spec.ion2) = mag * u;
    return f;
}

Eigen::MatrixXcd modeCouplings(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                               const TrapSetup& setup, double hbarTilde) {
    spec.validate();
    if (spectrum.A.cols() != 6 * state.ionCount())
        throw std::invalid_argument("gate: spectrum and crystal disagree on the ion count");
    if (!(hbarTilde > 0.0)) throw std::invalid_argument("gate: hbarTilde must be positive");
    double sep = 0.0;
    const Eigen::Vector3d u = pairDirection(state, spec.ion1, spec.ion2, &sep);
    const double wxy = 0.5 * std::sqrt(1.0 - 2.0 * setup.axialRatio * setup.axialRatio);
    const double scale = hbarTilde * wxy / sep / std::sqrt(2.0 * hbarTilde);
    const int m = spectrum.modeCount();
    Eigen::MatrixXcd c(m, 2);
    const int ions[2] = {spec.ion1, spec.ion2};
    for (int kk = 0; kk < m; ++kk)
        for (int col = 0; col < 2; ++col) {
            cd s = 0.0;
            for (int a = 0; a < 3; ++a) s += u[a] * spectrum.A(kk, qIndex(ions[col], a));
            c(kk, col) = scale * s;
        }
    return c;
}

ModeDrive modeDrive(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                    const TrapSetup& setup, double hbarTilde, int s1, int s2) {
    if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) throw std::invalid_argument("gate: qubit signs must be +1 or -1");
    const Eigen::MatrixXcd c = modeCouplings(spec, state, spectrum, setup, hbarTilde);
    ModeDrive d;
    d.shape = driveShape(spec, setup);
    d.coupling = spec.amplitude * (static_cast<double>(s1) * c.col(0) + static_cast<double>(s2) * c.col(1));
    return d;
}

namespace {

struct ReferencePanel {
    std::vector<long double> x;
    std::vector<long double> w;
    Eigen::MatrixXd cumulative;
};

std::vector<long double> legendreValues(long double x, int count) {
    std::vector<long double> p(count + 1);
    p[0] = 1.0L;
    if (count >= 1) p[1] = x;
    for (int n = 1; n < count; ++n) p[n + 1] = ((2.0L * n + 1.0L) * x * p[n] - n * p[n - 1]) / (n + 1.0L);
    return p;
}

template <int N>
ReferencePanel buildPanel() {
    using rule = boost::math::quadrature::gauss<long double, N>;
    ReferencePanel r;
    const auto& ab = rule::abscissa();
    const auto& wt = rule::weights();
    for (int i = static_cast<int>(ab.size()) - 1; i >= 0; --i) {
        if (ab[i] == 0.0L) continue;
        r.x.push_back(-ab[i]);
        r.w.push_back(wt[i]);
    }
    for (size_t i = 0; i < ab.size(); ++i) {
        r.x.push_back(ab[i]);
        r.w.push_back(wt[i]);
    }
    // C = W V^{-1}: V(i, k) = P_k(x_i), W(i, k) = int_{-1}^{x_i} P_k
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    MatL v(N, N), wi(N, N);
    for (int i = 0; i < N; ++i) {
        const auto p = legendreValues(r.x[i], N);
        for (int kk = 0; kk < N; ++kk) {
            v(i, kk) = p[kk];
            wi(i, kk) = kk == 0 ? r.x[i] + 1.0L : (p[kk + 1] - p[kk - 1]) / (2.0L * kk + 1.0L);
        }
    }
    const MatL c = wi * v.inverse();
    r.cumulative = c.cast<double>();
    return r;
}

const ReferencePanel& referencePanel(int nodes) {
    static const ReferencePanel p8 = buildPanel<8>();
    static const ReferencePanel p16 = buildPanel<16>();
    static const ReferencePanel p20 = buildPanel<20>();
    switch (nodes) {
        case 8: return p8;
        case 16: return p16;
        case 20: return p20;
    }
    throw std::invalid_argument("gate: supported panel sizes are 8, 16 and 20 nodes");
}

}  // namespace

int requiredNodes(const DriveShape& shape, double omegaMax, const QuadratureSettings& settings) {
    const double periods = shape.duration * (std::max(omegaMax, 0.0) + shape.nu) / (2.0 * k::pi);
    const double byPeriod = std::ceil(settings.nodesPerPeriod * periods);
    const double byEnvelope = std::ceil(settings.panelNodes * shape.duration / shape.width);
    double need = std::max({byPeriod, byEnvelope, static_cast<double>(settings.panelNodes)});
    if (shape.samples) need = std::max(need, std::ceil(4.0 * shape.duration / shape.sampleStep));
    if (need > 5e7) throw std::invalid_argument("gate: quadrature would need more than 5e7 nodes");
    return static_cast<int>(need);
}

PanelQuadrature makeQuadrature(const DriveShape& shape, double omegaMax, const QuadratureSettings& settings) {
    const ReferencePanel& ref = referencePanel(settings.panelNodes);
    const int need = requiredNodes(shape, omegaMax, settings);
    int nodes = need;
    if (settings.totalNodes > 0) {
        if (settings.totalNodes < need)
            throw std::invalid_argument("gate: quadrature under-resolved, " + std::to_string(settings.totalNodes) +
                                        " nodes requested but at least " + std::to_string(need) + " required");
        nodes = settings.totalNodes;
    }
    PanelQuadrature q;
    q.panelNodes = settings.panelNodes;
    q.panels = (nodes + settings.panelNodes - 1) / settings.panelNodes;
    q.cumulative = ref.cumulative;
    const double h = shape.duration / q.panels;
    q.nodes.reserve(static_cast<size_t>(q.panels) * q.panelNodes);
    q.weights.reserve(q.nodes.capacity());
    for (int p = 0; p < q.panels; ++p) {
        const double a = p * h;
        for (int i = 0; i < q.panelNodes; ++i) {
            q.nodes.push_back(a + 0.5 * h * (static_cast<double>(ref.x[i]) + 1.0));
            q.weights.push_back(0.5 * h * static_cast<double>(ref.w[i]));
        }
    }
    return q;
}

std::complex<double> envelopeTransform(const PanelQuadrature& q, const DriveShape& shape, double omega) {
    cd s = 0.0;
    for (size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * shape(q.nodes[i]) * std::polar(1.0, omega * q.nodes[i]);
    return s;
}

double phaseKernel(const PanelQuadrature& q, const DriveShape& shape, double omega) {
    const int n = q.panelNodes;
    const double half = 0.5 * shape.duration / q.panels;
    Eigen::VectorXcd f(n);
    const Eigen::MatrixXcd cum = q.cumulative.cast<cd>();
    cd start = 0.0;
    double phi = 0.0;
    for (int p = 0; p < q.panels; ++p) {
        const size_t off = static_cast<size_t>(p) * n;
        for (int i = 0; i < n; ++i) f[i] = shape(q.nodes[off + i]) * std::polar(1.0, omega * q.nodes[off + i]);
        const Eigen::VectorXcd g = (cum * f) * half;
        cd total = 0.0;
        for (int i = 0; i < n; ++i) {
            phi += q.weights[off + i] * std::imag(f[i] * std::conj(start + g[i]));
            total += q.weights[off + i] * f[i];
        }
        start += total;
    }
    return phi;
}

namespace {

PanelQuadrature quadratureFor(const GateSpec& spec, const ModeSpectrum& spectrum, const DriveShape& shape) {
    const double wmax = spectrum.modeCount() ? spectrum.frequencies.maxCoeff() : 0.0;
    return makeQuadrature(shape, wmax, spec.quadrature);
}

}  // namespace

Eigen::VectorXcd residualDisplacement(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                                      const TrapSetup& setup, double hbarTilde, int ion) {
    if (ion != spec.ion1 && ion != spec.ion2) throw std::invalid_argument("gate: ion is not one of the driven pair");
    const Eigen::MatrixXcd c = modeCouplings(spec, state, spectrum, setup, hbarTilde);
    const DriveShape shape = driveShape(spec, setup);
    const PanelQuadrature q = quadratureFor(spec, spectrum, shape);
    const int col = ion == spec.ion1 ? 0 : 1;
    Eigen::VectorXcd out(spectrum.modeCount());
    for (int kk = 0; kk < spectrum.modeCount(); ++kk) {
        const double w = spectrum.frequencies[kk];
        out[kk] = spec.amplitude * c(kk, col) * envelopeTransform(q, shape, w) / std::sqrt(w);
    }
    return out;
}

PhaseResult twoQubitPhase(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                          const TrapSetup& setup, double hbarTilde) {
    GateSpec unit = spec;
    unit.amplitude = 1.0;
    const Eigen::MatrixXcd c = modeCouplings(unit, state, spectrum, setup, hbarTilde);
    const DriveShape shape = driveShape(unit, setup);
    const PanelQuadrature q = quadratureFor(unit, spectrum, shape);
    // per-mode terms cancel strongly for fast carriers, so sum at unit amplitude and scale once
    long double t = 0, t00 = 0, t01 = 0, t11 = 0;
    for (int kk = 0; kk < spectrum.modeCount(); ++kk) {
        const long double phi = phaseKernel(q, shape, spectrum.frequencies[kk]);
        const cd c1 = c(kk, 0), c2 = c(kk, 1);
        t00 += std::norm(c1 + c2) * phi;
        t01 += std::norm(c1 - c2) * phi;
        t11 += std::norm(-c1 - c2) * phi;
        t += 8.0L * static_cast<long double>(std::real(std::conj(c1) * c2)) * phi;
    }
    const long double a2 = static_cast<long double>(spec.amplitude) * spec.amplitude;
    PhaseResult r;
    r.theta = static_cast<double>(a2 * t);
    r.theta00 = static_cast<double>(a2 * t00);
    r.theta01 = static_cast<double>(a2 * t01);
    r.theta10 = r.theta01;
    r.theta11 = static_cast<double>(a2 * t11);
    return r;
}

double calibrateAmplitude(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                          const TrapSetup& setup, double hbarTilde, double targetPhase) {
    GateSpec unit = spec;
    unit.amplitude = 1.0;
    const Eigen::MatrixXcd c = modeCouplings(unit, state, spectrum, setup, hbarTilde);
    const DriveShape shape = driveShape(unit, setup);
    const PanelQuadrature q = quadratureFor(unit, spectrum, shape);
    long double theta = 0.0, scale = 0.0;
    for (int kk = 0; kk < spectrum.modeCount(); ++kk) {
        const long double phi = phaseKernel(q, shape, spectrum.frequencies[kk]);
        theta += 8.0L * static_cast<long double>(std::real(std::conj(c(kk, 0)) * c(kk, 1))) * phi;
        scale += (std::norm(c(kk, 0)) + std::norm(c(kk, 1))) * std::abs(phi);
    }
    if (!(std::abs(theta) > 1e-14 * scale) || !std::isfinite(theta))
        throw std::runtime_error("calibration: degenerate drive, the two-qubit phase vanishes at unit amplitude");
    return static_cast<double>(std::sqrt(std::abs(static_cast<long double>(targetPhase)) / std::abs(theta)));
}

OdeResult integrateModeOde(double omega, std::complex<double> coupling, const DriveShape& shape, int steps) {
    if (steps < 1) throw std::invalid_argument("integrateModeOde: steps must be positive");
    const double h = shape.duration / steps;
    auto rhs = [&](double t, cd b, cd& db, double& dphi) {
        const cd g = coupling * shape(t);
        db = cd(0.0, -omega) * b - cd(0.0, 1.0) * g;
        dphi = -std::real(std::conj(g) * b);
    };
    cd b = 0.0;
    double phi = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        cd k1, k2, k3, k4;
        double p1, p2, p3, p4;
        rhs(t, b, k1, p1);
        rhs(t + 0.5 * h, b + 0.5 * h * k1, k2, p2);
        rhs(t + 0.5 * h, b + 0.5 * h * k2, k3, p3);
        rhs(t + h, b + h * k3, k4, p4);
        b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        phi += h / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    }
    return {b, phi};
}

FidelityPoint fidelity(const Eigen::VectorXcd& residual1, const Eigen::VectorXcd& residual2, double amplitude,
                       const Eigen::VectorXd& frequencies, double temperature, const TrapSetup& setup) {
    if (!(temperature > 0.0)) throw std::invalid_argument("fidelity: temperature must be positive");
    if (residual1.size() != frequencies.size() || residual2.size() != frequencies.size())
        throw std::invalid_argument("fidelity: residuals and spectrum disagree in size");
    double sp = 0.0, sm = 0.0;
    for (Eigen::Index kk = 0; kk < frequencies.size(); ++kk) {
        const double x = k::hbar * frequencies[kk] * setup.cyclotronFrequency / (k::kB * temperature);
        const double occ = -std::expm1(-x);
        sp += 0.25 * amplitude * amplitude * std::norm(residual1[kk] + residual2[kk]) / occ;
        sm += 0.25 * amplitude * amplitude * std::norm(residual1[kk] - residual2[kk]) / occ;
    }
    FidelityPoint p;
    p.temperature = temperature;
    p.branch = sp >= sm ? '+' : '-';
    const double s = std::max(sp, sm);
    p.fidelity = std::exp(-s);
    p.infidelity = -std::expm1(-s);
    return p;
}

double phaseError(double theta, double target) { return std::abs(std::remainder(theta - target, 2.0 * k::pi)); }

GateResult runGate(const GateSpec& spec, const CrystalState& state, const ModeSpectrum& spectrum,
                   const TrapSetup& setup, double hbarTilde, const std::vector<double>& temperatures) {
    GateResult r;
    r.spec = spec;
    GateSpec unit = spec;
    unit.amplitude = 1.0;
    r.residual1 = residualDisplacement(unit, state, spectrum, setup, hbarTilde, spec.ion1);
    r.residual2 = residualDisplacement(unit, state, spectrum, setup, hbarTilde, spec.ion2);
    r.phaseAtUnitAmplitude = twoQubitPhase(unit, state, spectrum, setup, hbarTilde);
    r.amplitude = calibrateAmplitude(unit, state, spectrum, setup, hbarTilde);
    r.spec.amplitude = r.amplitude;
    r.phase = twoQubitPhase(r.spec, state, spectrum, setup, hbarTilde);
    r.rotationPeriodRatio = spec.width() * state.rotationFrequency * setup.cyclotronFrequency / (2.0 * k::pi);
    for (double t : temperatures)
        r.curve.push_back(fidelity(r.residual1, r.residual2, r.amplitude, spectrum.frequencies, t, setup));
    return r;
}

std::string formatFidelityCsv(const std::vector<FidelityPoint>& curve) {
    std::ostringstream o;
    o << "T_K,F,infidelity,branch\n";
    char buf[128];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%c\n", p.temperature, p.fidelity, p.infidelity, p.branch);
        o << buf;
    }
    return o.str();
}

std::string formatPhaseReport(const GateResult& r, const TrapSetup& setup) {
    nlohmann::ordered_json j;
    j["pair"] = {r.spec.ion1, r.spec.ion2};
    j["theta"] = r.phase.theta;
    j["theta_00"] = r.phase.theta00;
    j["theta_01"] = r.phase.theta01;
    j["theta_10"] = r.phase.theta10;
    j["theta_11"] = r.phase.theta11;
    j["amplitude"] = r.amplitude;
    j["nu_rad_per_s"] = r.spec.carrierFrequency;
    j["nu_over_omega_c"] = r.spec.carrierFrequency / setup.cyclotronFrequency;
    j["tau_g_s"] = r.spec.width();
    j["tau_g_over_tau_r"] = r.rotationPeriodRatio;
    j["window_s"] = r.spec.gateTime;
    j["envelope_center_s"] = r.spec.center();
    return j.dump(2) + "\n";
}

Eigen::Matrix3d formFactor(const OrthogonalModes& modes, int n, int j, FormFactorRegime regime, double nu,
                           double hbarTilde) {
    const int dofs = static_cast<int>(modes.M.cols());
    if (n < 0 || j < 0 || 3 * n + 2 >= dofs || 3 * j + 2 >= dofs) throw std::out_of_range("formFactor: ion index");
    if (!(hbarTilde > 0.0)) throw std::invalid_argument("formFactor: hbarTilde must be positive");
    if (regime != FormFactorRegime::Adiabatic && !(nu > 0.0))
        throw std::invalid_argument("formFactor: carrier frequency must be positive");
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
    for (int kk = 0; kk < modes.M.rows(); ++kk) {
        const double w = modes.frequencies[kk];
        double f = 0.0;
        switch (regime) {
            case FormFactorRegime::Adiabatic:
                if (w < 1e-6) continue;  // zero modes carry no restoring force
                f = 1.0 / (2.0 * hbarTilde * w * w);
                break;
            case FormFactorRegime::Modulated:
                if (std::abs(nu - w) < 1e-6)
                    throw std::domain_error("formFactor: carrier resonant with mode " + std::to_string(kk));
                f = -1.0 / (4.0 * hbarTilde * (nu * nu - w * w));
                break;
            case FormFactorRegime::ModulatedExpansion:
                f = -w * w / (4.0 * hbarTilde * nu * nu * nu * nu);
                break;
            case FormFactorRegime::LeadingTerm:
                f = -1.0 / (4.0 * hbarTilde * nu * nu);
                break;
        }
        for (int mu = 0; mu < 3; ++mu)
            for (int eta = 0; eta < 3; ++eta) s(mu, eta) += f * modes.M(kk, 3 * j + mu) * modes.M(kk, 3 * n + eta);
    }
    return s;
}

LaserResources laserResources(const TrapSetup& setup, const IonSpecies& species, const LaserGeometry& g,
                              double amplitude, double pairSeparation) {
    if (!(g.angle > 0.0) || g.angle > k::pi)
        throw std::invalid_argument("laser: beam angle must lie in (0, pi]; a zero angle gives no standing wave");
    if (g.detuning == 0.0) throw std::invalid_argument("laser: detuning must be nonzero");
    if (!(g.waist > 0.0) || !(g.wavelength > 0.0)) throw std::invalid_argument("laser: waist and wavelength must be positive");
    if (!(pairSeparation > 0.0)) throw std::invalid_argument("laser: pair separation must be positive");
    const double wxy = trapFrequencies(setup).radial;
    const double kappa = 2.0 * k::pi / g.wavelength;
    const double s = std::sin(0.5 * g.angle);
    LaserResources r;
    r.power = amplitude * wxy * std::abs(g.detuning) * k::hbar * k::c * kappa * kappa * g.waist * g.waist * s * s /
              (3.0 * species.linewidth * pairSeparation);
    const double m = species.mass;
    r.scatteredPhotons = std::sqrt(2.0) * std::pow(k::pi, 3) * k::epsilon0 * k::c * m * m * g.waist * g.waist *
                         std::pow(wxy, 4) * std::pow(pairSeparation, 3) * s /
                         (3.0 * k::e * k::e * g.wavelength * r.power);
    r.scatteringFidelity = std::exp(-r.scatteredPhotons);
    return r;
}

}  // namespace wigner
