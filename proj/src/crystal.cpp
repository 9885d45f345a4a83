#include "wigner/crystal.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wigner {

namespace {

void requireShape(const Eigen::VectorXd& positions) {
    if (positions.size() == 0 || positions.size() % 3 != 0)
        throw std::invalid_argument("positions must hold 3N coordinates");
}

double weakestCurvature(double x, double axialRatio) {
    return std::min(radialCurvature(x, axialRatio), axialRatio * axialRatio);
}

}  // namespace

double radialCurvature(double x, double axialRatio) {
    return axialRatio * axialRatio * anisotropyRatio(x, axialRatio);
}

double coulombEnergy(const Eigen::VectorXd& positions) {
    requireShape(positions);
    const int n = static_cast<int>(positions.size() / 3);
    double e = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) {
            const double d = (positions.segment<3>(3 * k) - positions.segment<3>(3 * j)).norm();
            if (d == 0.0) throw std::invalid_argument("coincident ions " + std::to_string(k) + " and " + std::to_string(j));
            e += 1.0 / d;
        }
    return e;
}

double effectivePotential(const Eigen::VectorXd& positions, double x, const TrapSetup& setup) {
    requireShape(positions);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double kr = radialCurvature(x, setup.axialRatio);
    const int n = static_cast<int>(positions.size() / 3);
    double trap = 0.0;
    for (int k = 0; k < n; ++k) {
        const double px = positions[3 * k], py = positions[3 * k + 1], pz = positions[3 * k + 2];
        trap += 0.5 * (kr * (px * px + py * py) + az2 * pz * pz);
    }
    return trap + coulombEnergy(positions);
}

Eigen::VectorXd effectiveGradient(const Eigen::VectorXd& positions, double x, const TrapSetup& setup) {
    requireShape(positions);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double kr = radialCurvature(x, setup.axialRatio);
    const int n = static_cast<int>(positions.size() / 3);
    Eigen::VectorXd g(positions.size());
    for (int k = 0; k < n; ++k) {
        g[3 * k] = kr * positions[3 * k];
        g[3 * k + 1] = kr * positions[3 * k + 1];
        g[3 * k + 2] = az2 * positions[3 * k + 2];
    }
    for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) {
            const Eigen::Vector3d d = positions.segment<3>(3 * k) - positions.segment<3>(3 * j);
            const double r = d.norm();
            if (r == 0.0) throw std::invalid_argument("coincident ions " + std::to_string(k) + " and " + std::to_string(j));
            const Eigen::Vector3d f = d / (r * r * r);
            g.segment<3>(3 * k) -= f;
            g.segment<3>(3 * j) += f;
        }
    return g;
}

Eigen::MatrixXd coulombHessian(const Eigen::VectorXd& positions) {
    requireShape(positions);
    const int n = static_cast<int>(positions.size() / 3);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) {
            const Eigen::Vector3d d = positions.segment<3>(3 * k) - positions.segment<3>(3 * j);
            const double r = d.norm();
            if (r == 0.0) throw std::invalid_argument("coincident ions " + std::to_string(k) + " and " + std::to_string(j));
            const double r3 = r * r * r;
            // second derivative of 1/r: (3 d d^T / r^2 - 1) / r^3
            const Eigen::Matrix3d t = (3.0 * d * d.transpose() / (r * r) - Eigen::Matrix3d::Identity()) / r3;
            h.block<3, 3>(3 * k, 3 * k) += t;
            h.block<3, 3>(3 * j, 3 * j) += t;
            h.block<3, 3>(3 * k, 3 * j) -= t;
            h.block<3, 3>(3 * j, 3 * k) -= t;
        }
    return h;
}

Eigen::MatrixXd effectiveHessian(const Eigen::VectorXd& positions, double x, const TrapSetup& setup) {
    Eigen::MatrixXd h = coulombHessian(positions);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double kr = radialCurvature(x, setup.axialRatio);
    const int n = static_cast<int>(positions.size() / 3);
    for (int k = 0; k < n; ++k) {
        h(3 * k, 3 * k) += kr;
        h(3 * k + 1, 3 * k + 1) += kr;
        h(3 * k + 2, 3 * k + 2) += az2;
    }
    return h;
}

namespace {
double sumRadialSquares(const Eigen::VectorXd& positions) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < positions.size() / 3; ++k)
        s += positions[3 * k] * positions[3 * k] + positions[3 * k + 1] * positions[3 * k + 1];
    return s;
}
}  // namespace

double totalAngularMomentum(const Eigen::VectorXd& positions, double x) {
    requireShape(positions);
    return sumRadialSquares(positions) * (0.5 - x);
}

double rotationFrequencyFromPtheta(const Eigen::VectorXd& positions, double pTheta) {
    requireShape(positions);
    const double s = sumRadialSquares(positions);
    if (!(s > 0.0)) throw std::invalid_argument("all ions on the axis: rotation frequency undefined");
    return 0.5 - pTheta / s;
}

void AnnealSchedule::validate() const {
    if (!(decayFactor > 0.0 && decayFactor < 1.0)) throw std::invalid_argument("anneal: decay factor must lie in (0,1)");
    if (cycles < 1) throw std::invalid_argument("anneal: cycles must be at least 1");
    if (stepsPerCycle < 0) throw std::invalid_argument("anneal: steps per cycle must be non-negative");
    if (!(initialTemperature > 0.0)) throw std::invalid_argument("anneal: initial temperature must be positive");
    if (!(stepSize > 0.0)) throw std::invalid_argument("anneal: step size must be positive");
}

CrystalState makeState(const Eigen::VectorXd& positions, double x, const TrapSetup& setup) {
    CrystalState s;
    s.axialRatio = setup.axialRatio;
    s.positions = positions;
    s.rotationFrequency = x;
    s.anisotropy = anisotropyRatio(x, setup.axialRatio);
    s.angularMomentum = totalAngularMomentum(positions, x);
    s.energy = effectivePotential(positions, x, setup);
    s.gradientNorm = effectiveGradient(positions, x, setup).norm();
    s.converged = s.gradientNorm < NewtonOptions{}.tolerance;
    return s;
}

Eigen::VectorXd seedConfiguration(const TrapSetup& setup, double x, std::uint64_t seed, bool planar) {
    const int n = setup.ionCount;
    const double kappa = weakestCurvature(x, setup.axialRatio);
    if (!(kappa > 0.0)) throw std::invalid_argument("no confinement at this rotation frequency");
    const double lc = std::cbrt(1.0 / kappa);
    const double spread = lc * std::cbrt(static_cast<double>(n));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd p(3 * n);
    for (int k = 0; k < n; ++k) {
        p[3 * k] = spread * uni(rng);
        p[3 * k + 1] = spread * uni(rng);
        p[3 * k + 2] = planar ? 0.0 : spread * uni(rng);
    }
    if (n == 1) p.setZero();
    return p;
}

namespace {

// Interaction energy of ion k with every other ion plus its own trap term.
double ionEnergy(const Eigen::VectorXd& p, int k, const Eigen::Vector3d& rk, double kr, double az2) {
    double e = 0.5 * (kr * (rk.x() * rk.x() + rk.y() * rk.y()) + az2 * rk.z() * rk.z());
    const int n = static_cast<int>(p.size() / 3);
    for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const double d = (rk - p.segment<3>(3 * j)).norm();
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        e += 1.0 / d;
    }
    return e;
}

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

std::vector<CrystalState> anneal(const TrapSetup& setup, double x, const AnnealSchedule& schedule,
                                 std::uint64_t stream) {
    setup.validate();
    schedule.validate();
    const double beta = anisotropyRatio(x, setup.axialRatio);
    if (stabilityClass(beta, setup.ionCount) == StabilityClass::Unconfined)
        throw std::invalid_argument("anneal: rotation frequency outside the confining window");
    const bool planar = stabilityClass(beta, setup.ionCount) == StabilityClass::Planar2D;
    const std::uint64_t seed = mixSeed(schedule.seed, stream);
    Eigen::VectorXd p = seedConfiguration(setup, x, seed, planar);
    std::vector<CrystalState> out;
    if (schedule.stepsPerCycle == 0 || setup.ionCount == 1) {
        out.push_back(makeState(p, x, setup));
        return out;
    }

    const double kappa = weakestCurvature(x, setup.axialRatio);
    const double ec = std::cbrt(kappa);
    const double lc = 1.0 / ec;
    const double kr = radialCurvature(x, setup.axialRatio);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const int n = setup.ionCount;

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);

    double step = schedule.stepSize * lc;
    double temperature = schedule.initialTemperature * ec;
    double energy = effectivePotential(p, x, setup);
    const int adaptEvery = 50;
    int accepted = 0, proposed = 0;

    for (int cycle = 0; cycle < schedule.cycles; ++cycle) {
        Eigen::VectorXd best = p;
        double bestEnergy = energy;
        for (int sweep = 0; sweep < schedule.stepsPerCycle; ++sweep) {
            for (int m = 0; m < n; ++m) {
                const int k = pick(rng);
                const Eigen::Vector3d old = p.segment<3>(3 * k);
                Eigen::Vector3d trial = old;
                trial.x() += step * gauss(rng);
                trial.y() += step * gauss(rng);
                if (!planar) trial.z() += step * gauss(rng);
                const double dE = ionEnergy(p, k, trial, kr, az2) - ionEnergy(p, k, old, kr, az2);
                ++proposed;
                if (dE <= 0.0 || uni(rng) < std::exp(-dE / temperature)) {
                    p.segment<3>(3 * k) = trial;
                    energy += dE;
                    ++accepted;
                    if (energy < bestEnergy) {
                        bestEnergy = energy;
                        best = p;
                    }
                }
                if (proposed == adaptEvery) {
                    const double rate = static_cast<double>(accepted) / proposed;
                    step *= rate > 0.5 ? 1.1 : 1.0 / 1.1;
                    accepted = proposed = 0;
                }
            }
        }
        out.push_back(makeState(best, x, setup));
        temperature *= schedule.decayFactor;
        energy = effectivePotential(p, x, setup);  // drop accumulated round-off
    }
    return out;
}

namespace {

struct NewtonRun {
    CrystalState state;
    std::vector<double> energies;
};

NewtonRun runNewton(const CrystalState& candidate, const TrapSetup& setup, const NewtonOptions& options) {
    const double x = candidate.rotationFrequency;
    const int n = candidate.ionCount();
    Eigen::VectorXd p = candidate.positions;
    NewtonRun run;
    double energy = effectivePotential(p, x, setup);
    Eigen::VectorXd g = effectiveGradient(p, x, setup);
    run.energies.push_back(energy);
    int steps = 0;

    for (int it = 0; it < options.maxIterations && g.norm() >= options.tolerance; ++it) {
        // Pin the azimuth of the outermost ion to remove the rotational null direction.
        int pin = -1;
        double rmax = 1e-8;
        for (int k = 0; k < n; ++k) {
            const double r = std::hypot(p[3 * k], p[3 * k + 1]);
            if (r > rmax) {
                rmax = r;
                pin = k;
            }
        }
        const int dim = 3 * n;
        Eigen::MatrixXd basis;
        if (pin >= 0) {
            basis = Eigen::MatrixXd::Zero(dim, dim - 1);
            int col = 0;
            for (int i = 0; i < dim; ++i) {
                if (i == 3 * pin + 1) continue;
                if (i == 3 * pin) {
                    basis(3 * pin, col) = p[3 * pin] / rmax;
                    basis(3 * pin + 1, col) = p[3 * pin + 1] / rmax;
                } else {
                    basis(i, col) = 1.0;
                }
                ++col;
            }
        } else {
            basis = Eigen::MatrixXd::Identity(dim, dim);
        }
        const Eigen::MatrixXd h = basis.transpose() * effectiveHessian(p, x, setup) * basis;
        const Eigen::VectorXd gr = basis.transpose() * g;

        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() == Eigen::Success) {
            step = -llt.solve(gr);
        } else {
            // indefinite: reflect negative curvature directions
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
            Eigen::VectorXd lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-12 * es.eigenvalues().cwiseAbs().maxCoeff());
            step = -es.eigenvectors() * ((es.eigenvectors().transpose() * gr).array() / lam.array()).matrix();
        }
        Eigen::VectorXd full = basis * step;

        // Backtracking keeps the energy non-increasing.
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            Eigen::VectorXd trial = p + t * full;
            double et;
            try {
                et = effectivePotential(trial, x, setup);
            } catch (const std::invalid_argument&) {
                t *= 0.5;
                continue;
            }
            const Eigen::VectorXd gt = effectiveGradient(trial, x, setup);
            if (et < energy || (et == energy && gt.norm() < g.norm())) {
                p = trial;
                energy = et;
                g = gt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        ++steps;
        run.energies.push_back(energy);
    }
    run.state = makeState(p, x, setup);
    run.state.refinementSteps = steps;
    run.state.converged = run.state.gradientNorm < options.tolerance;
    return run;
}

}  // namespace

CrystalState newtonRefine(const CrystalState& candidate, const TrapSetup& setup, const NewtonOptions& options) {
    return runNewton(candidate, setup, options).state;
}

std::vector<double> newtonEnergyTrace(const CrystalState& candidate, const TrapSetup& setup,
                                      const NewtonOptions& options) {
    return runNewton(candidate, setup, options).energies;
}

namespace {

bool isStableMinimum(const CrystalState& s, const TrapSetup& setup) {
    if (!s.converged) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(effectiveHessian(s.positions, s.rotationFrequency, setup),
                                                      Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    return es.eigenvalues().minCoeff() > -1e-9 * scale;
}

}  // namespace

CrystalState equilibriumAt(const TrapSetup& setup, double x, const AnnealSchedule& schedule, std::uint64_t stream) {
    const auto candidates = anneal(setup, x, schedule, stream);
    CrystalState best;
    bool have = false;
    for (const auto& c : candidates) {
        CrystalState r = newtonRefine(c, setup);
        if (!isStableMinimum(r, setup)) continue;
        if (!have || r.energy < best.energy) {
            best = r;
            have = true;
        }
    }
    if (!have) throw std::runtime_error("annealing produced no refinable candidate");
    return best;
}

CrystalState findEquilibrium(const TrapSetup& setup, double pTheta, const AnnealSchedule& schedule) {
    setup.validate();
    schedule.validate();
    const double az = setup.axialRatio;
    const double kmax = 0.25 - 0.5 * az * az;  // (omega_xy / omega_c)^2
    if (pTheta == 0.0 || setup.ionCount == 1) {
        if (setup.ionCount == 1 && pTheta != 0.0)
            throw std::invalid_argument("a single ion on the axis carries no angular momentum");
        return equilibriumAt(setup, 0.5, schedule, 0);
    }
    const double sign = pTheta > 0.0 ? 1.0 : -1.0;
    // Parametrize by log(kappa / kappa_max): x = 1/2 - sign sqrt(kappa_max - kappa).
    auto xOf = [&](double logS) {
        const double s = std::exp(logS);
        return 0.5 - sign * std::sqrt(std::max(0.0, kmax * (1.0 - s)));
    };

    std::map<double, CrystalState> cache;  // keyed by log s
    std::uint64_t stream = 1;
    auto solveAt = [&](double logS) -> const CrystalState& {
        auto it = cache.find(logS);
        if (it != cache.end()) return it->second;
        const double x = xOf(logS);
        const double kappa = radialCurvature(x, az);
        if (!(kappa > 0.0)) throw std::runtime_error("no confining rotation frequency in bracket");
        CrystalState result;
        bool ok = false;
        if (!cache.empty()) {
            // continuation from the nearest solved point; planar crystals scale as kappa^{-1/3}
            auto near = cache.lower_bound(logS);
            if (near == cache.end() || (near != cache.begin() && std::abs(std::prev(near)->first - logS) < std::abs(near->first - logS)))
                near = std::prev(near);
            const CrystalState& ref = near->second;
            const double f = std::cbrt(radialCurvature(ref.rotationFrequency, az) / kappa);
            Eigen::VectorXd p = ref.positions;
            for (Eigen::Index k = 0; k < p.size() / 3; ++k) {
                p[3 * k] *= f;
                p[3 * k + 1] *= f;
            }
            CrystalState r = newtonRefine(makeState(p, x, setup), setup);
            if (isStableMinimum(r, setup)) {
                result = r;
                ok = true;
            }
        }
        if (!ok) {
            result = equilibriumAt(setup, x, schedule, stream++);
        }
        return cache.emplace(logS, result).first->second;
    };
    auto residual = [&](double logS) {
        const CrystalState& s = solveAt(logS);
        return sign * s.angularMomentum - std::abs(pTheta);
    };

    for (int pass = 0; pass < 3; ++pass) {
        double hi = 0.0;  // kappa = kappa_max, P = 0
        double lo = std::log(0.5);
        int tries = 0;
        while (residual(lo) < 0.0) {
            hi = lo;
            lo -= std::log(8.0);
            if (++tries > 40)
                throw std::runtime_error("no confining rotation frequency reaches the requested angular momentum");
        }
        std::uintmax_t maxIter = 200;
        auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)); };
        const auto root = boost::math::tools::toms748_solve(residual, lo, hi, residual(lo), residual(hi), tol, maxIter);
        const double logS = 0.5 * (root.first + root.second);
        const CrystalState at = solveAt(logS);
        // a fresh anneal at the root guards against continuation locking onto a metastable branch
        CrystalState fresh = equilibriumAt(setup, at.rotationFrequency, schedule, stream++);
        if (fresh.energy < at.energy - 1e-9 * std::abs(at.energy)) {
            cache.clear();
            cache.emplace(logS, fresh);
            continue;
        }
        return at;
    }
    throw std::runtime_error("equilibrium search did not settle on a single structure");
}

std::vector<int> shellCounts(const CrystalState& state, double relTol) {
    std::vector<double> r;
    for (int k = 0; k < state.ionCount(); ++k) r.push_back(std::hypot(state.positions[3 * k], state.positions[3 * k + 1]));
    std::sort(r.begin(), r.end());
    std::vector<int> counts;
    const double scale = r.empty() ? 1.0 : std::max(r.back(), 1e-12);
    double last = -1.0;
    for (double v : r) {
        if (counts.empty() || v - last > relTol * scale)
            counts.push_back(1);
        else
            ++counts.back();
        last = v;
    }
    return counts;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string formatEquilibrium(const CrystalState& state) {
    std::ostringstream o;
    o << "N " << state.ionCount() << "\n";
    o << "alpha_z " << fmt17(state.axialRatio) << "\n";
    o << "P_theta " << fmt17(state.angularMomentum) << "\n";
    o << "omega_r_over_omega_c " << fmt17(state.rotationFrequency) << "\n";
    o << "energy " << fmt17(state.energy) << "\n";
    for (int k = 0; k < state.ionCount(); ++k)
        o << fmt17(state.positions[3 * k]) << " " << fmt17(state.positions[3 * k + 1]) << " "
          << fmt17(state.positions[3 * k + 2]) << "\n";
    return o.str();
}

namespace {

[[noreturn]] void parseError(int line, const std::string& what) {
    throw std::runtime_error("equilibrium file line " + std::to_string(line) + ": " + what);
}

double parseNumber(const std::string& tok, int line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') parseError(line, "bad number '" + tok + "'");
    return v;
}

}  // namespace

CrystalState parseEquilibrium(const std::string& text, const TrapSetup* setup) {
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    const char* keys[] = {"N", "alpha_z", "P_theta", "omega_r_over_omega_c", "energy"};
    double header[5] = {0, 0, 0, 0, 0};
    for (int h = 0; h < 5; ++h) {
        ++lineNo;
        if (!std::getline(in, line)) parseError(lineNo, std::string("missing header '") + keys[h] + "'");
        std::istringstream ls(line);
        std::string key, val, extra;
        if (!(ls >> key >> val) || key != keys[h]) parseError(lineNo, std::string("expected '") + keys[h] + " <value>'");
        if (ls >> extra) parseError(lineNo, "trailing content");
        header[h] = parseNumber(val, lineNo);
    }
    const int n = static_cast<int>(header[0]);
    if (n < 1 || header[0] != n) parseError(1, "ion count must be a positive integer");
    CrystalState s;
    s.axialRatio = header[1];
    s.angularMomentum = header[2];
    s.rotationFrequency = header[3];
    s.energy = header[4];
    s.positions.resize(3 * n);
    for (int k = 0; k < n; ++k) {
        ++lineNo;
        if (!std::getline(in, line)) parseError(lineNo, "missing position row " + std::to_string(k + 1) + " of " + std::to_string(n));
        std::istringstream ls(line);
        std::string a, b, c, extra;
        if (!(ls >> a >> b >> c)) parseError(lineNo, "expected 'x y z'");
        if (ls >> extra) parseError(lineNo, "trailing content");
        s.positions[3 * k] = parseNumber(a, lineNo);
        s.positions[3 * k + 1] = parseNumber(b, lineNo);
        s.positions[3 * k + 2] = parseNumber(c, lineNo);
    }
    TrapSetup local{1.0, s.axialRatio, n};
    const TrapSetup& ts = setup ? *setup : local;
    s.anisotropy = anisotropyRatio(s.rotationFrequency, s.axialRatio);
    s.gradientNorm = effectiveGradient(s.positions, s.rotationFrequency, ts).norm();
    s.converged = s.gradientNorm < NewtonOptions{}.tolerance;
    return s;
}

void saveEquilibrium(const CrystalState& state, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << formatEquilibrium(state);
}

CrystalState loadEquilibrium(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parseEquilibrium(ss.str());
}

}  // namespace wigner
