#include "wigner/modes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wigner/constants.hpp"

namespace wigner {

Eigen::MatrixXd symplecticForm(int dofs) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * dofs, 2 * dofs);
    for (int k = 0; k < dofs; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

double minimalCoupling(double x) { return 0.5 - x; }

double dimensionlessHamiltonian(const Eigen::VectorXd& d, double x, const TrapSetup& setup) {
    if (d.size() == 0 || d.size() % 6 != 0) throw std::invalid_argument("phase vector must hold 6N entries");
    const int n = static_cast<int>(d.size() / 6);
    const double c = minimalCoupling(x);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double wxy2 = 0.25 - 0.5 * az2;
    Eigen::VectorXd q(3 * n);
    double h = 0.0;
    for (int k = 0; k < n; ++k) {
        const double qx = d[qIndex(k, 0)], qy = d[qIndex(k, 1)], qz = d[qIndex(k, 2)];
        const double px = d[pIndex(k, 0)], py = d[pIndex(k, 1)], pz = d[pIndex(k, 2)];
        h += 0.5 * (px * px + py * py + pz * pz) + c * (qy * px - qx * py);
        h += 0.5 * wxy2 * (qx * qx + qy * qy) + 0.5 * az2 * qz * qz;
        q.segment<3>(3 * k) << qx, qy, qz;
    }
    return h + coulombEnergy(q);
}

Eigen::VectorXd equilibriumPhaseVector(const CrystalState& state) {
    const int n = state.ionCount();
    const double c = minimalCoupling(state.rotationFrequency);
    Eigen::VectorXd d(6 * n);
    for (int k = 0; k < n; ++k) {
        const double x = state.positions[3 * k], y = state.positions[3 * k + 1], z = state.positions[3 * k + 2];
        d[qIndex(k, 0)] = x;
        d[qIndex(k, 1)] = y;
        d[qIndex(k, 2)] = z;
        d[pIndex(k, 0)] = -c * y;
        d[pIndex(k, 1)] = c * x;
        d[pIndex(k, 2)] = 0.0;
    }
    return d;
}

QuadraticHamiltonian buildHessian(const CrystalState& state, const TrapSetup& setup) {
    if (!state.converged) throw std::invalid_argument("buildHessian: crystal state is not a converged equilibrium");
    const int n = state.ionCount();
    const double c = minimalCoupling(state.rotationFrequency);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double wxy2 = 0.25 - 0.5 * az2;
    const Eigen::MatrixXd coul = coulombHessian(state.positions);

    QuadraticHamiltonian qh;
    qh.reference = state;
    Eigen::MatrixXd& h = qh.hessian;
    h = Eigen::MatrixXd::Zero(6 * n, 6 * n);
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < 3; ++a) {
            h(pIndex(k, a), pIndex(k, a)) = 1.0;
            for (int j = 0; j < n; ++j)
                for (int b = 0; b < 3; ++b) h(qIndex(k, a), qIndex(j, b)) = coul(3 * k + a, 3 * j + b);
        }
        h(qIndex(k, 0), qIndex(k, 0)) += wxy2;
        h(qIndex(k, 1), qIndex(k, 1)) += wxy2;
        h(qIndex(k, 2), qIndex(k, 2)) += az2;
        // c (y p_x - x p_y)
        h(pIndex(k, 0), qIndex(k, 1)) = h(qIndex(k, 1), pIndex(k, 0)) = c;
        h(pIndex(k, 1), qIndex(k, 0)) = h(qIndex(k, 0), pIndex(k, 1)) = -c;
    }

    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += std::pow(state.positions[3 * k], 2) + std::pow(state.positions[3 * k + 1], 2);
    if (n >= 2 && r2 > 1e-16) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(6 * n);
        for (int k = 0; k < n; ++k) {
            const double x = state.positions[3 * k], y = state.positions[3 * k + 1];
            v[qIndex(k, 0)] = -y;
            v[qIndex(k, 1)] = x;
            v[pIndex(k, 0)] = -c * x;
            v[pIndex(k, 1)] = -c * y;
        }
        qh.rotationNullVector = v.normalized();
    }
    return qh;
}

Eigen::MatrixXd finiteDifferenceHessian(const CrystalState& state, const TrapSetup& setup, double h) {
    const Eigen::VectorXd d0 = equilibriumPhaseVector(state);
    const int m = static_cast<int>(d0.size());
    const double x = state.rotationFrequency;
    Eigen::MatrixXd out(m, m);
    Eigen::VectorXd d = d0;
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            auto at = [&](double si, double sj) {
                d = d0;
                d[i] += si * h;
                d[j] += sj * h;
                return dimensionlessHamiltonian(d, x, setup);
            };
            const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
            out(i, j) = out(j, i) = v;
        }
    }
    return out;
}

std::string toString(Band b) {
    switch (b) {
        case Band::Axial: return "axial";
        case Band::ExB: return "ExB";
        case Band::Cyclotron: return "cyclotron";
    }
    return "?";
}

namespace {

int dominantIndex(const Eigen::MatrixXcd& a, int k) {
    int best = 0;
    double bestAbs = -1.0;
    for (int j = 0; j < a.cols(); ++j) {
        const double v = std::abs(a(k, j));
        if (v > bestAbs * (1.0 + 1e-9)) {
            bestAbs = v;
            best = j;
        }
    }
    return best;
}

ModeSpectrum decompose(const Eigen::MatrixXd& hIn) {
    if (hIn.rows() != hIn.cols() || hIn.rows() % 2 != 0) throw std::invalid_argument("williamson: matrix must be 2n x 2n");
    const int m = static_cast<int>(hIn.rows());
    const int n = m / 2;
    // extended precision: the rotational mode and the slow E x B band make H badly conditioned
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using MatCL = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const MatL h = (0.5 * (hIn + hIn.transpose())).cast<long double>();
    Eigen::SelfAdjointEigenSolver<MatL> es(h);
    const VecL lam = es.eigenvalues();
    for (int i = 0; i < m; ++i)
        if (!(lam[i] > 0.0L)) {
            std::ostringstream msg;
            msg << "williamson: matrix is not positive definite (eigenvalue " << i << " = "
                << static_cast<double>(lam[i]) << ")";
            throw std::domain_error(msg.str());
        }
    const MatL& v = es.eigenvectors();
    const MatL hHalf = v * lam.cwiseSqrt().asDiagonal() * v.transpose();
    const MatL J = symplecticForm(n).cast<long double>();
    MatL k = hHalf * J * hHalf;
    k = 0.5L * (k - k.transpose());

    // i K is Hermitian; its positive eigenvalues are the symplectic eigenvalues.
    const MatCL ik = std::complex<long double>(0.0L, 1.0L) * k.cast<std::complex<long double>>();
    Eigen::SelfAdjointEigenSolver<MatCL> hs(ik);
    MatL sInvT(m, m);
    ModeSpectrum out;
    out.frequencies.resize(n);
    for (int p = 0; p < n; ++p) {
        const int col = n + p;
        const long double w = hs.eigenvalues()[col];
        const VecL a = std::sqrt(2.0L) * hs.eigenvectors().col(col).real();
        const VecL b = std::sqrt(2.0L) * hs.eigenvectors().col(col).imag();
        out.frequencies[p] = static_cast<double>(w);
        // rows of S^{-T}; S itself follows from S = -J S^{-T} J without inverting H
        sInvT.row(2 * p) = (hHalf * b).transpose() / std::sqrt(w);
        sInvT.row(2 * p + 1) = (hHalf * a).transpose() / std::sqrt(w);
    }
    out.S = (-J * sInvT * J).cast<double>();
    out.A.resize(n, m);
    for (int p = 0; p < n; ++p)
        for (int j = 0; j < m; ++j) out.A(p, j) = std::complex<double>(out.S(2 * p, j), out.S(2 * p + 1, j));

    // ascending frequency, ties by dominant coefficient index
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> dom(n);
    for (int p = 0; p < n; ++p) dom[p] = dominantIndex(out.A, p);
    const double scale = out.frequencies.cwiseAbs().maxCoeff();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double wa = out.frequencies[a], wb = out.frequencies[b];
        if (std::abs(wa - wb) > 1e-13 * std::max(1.0, scale)) return wa < wb;
        return dom[a] < dom[b];
    });
    ModeSpectrum sorted;
    sorted.S.resize(m, m);
    sorted.frequencies.resize(n);
    sorted.A.resize(n, m);
    for (int p = 0; p < n; ++p) {
        sorted.S.row(2 * p) = out.S.row(2 * order[p]);
        sorted.S.row(2 * p + 1) = out.S.row(2 * order[p] + 1);
        sorted.frequencies[p] = out.frequencies[order[p]];
        sorted.A.row(p) = out.A.row(order[p]);
    }
    sorted.regularized.assign(n, false);
    return sorted;
}

}  // namespace

ModeSpectrum williamsonDecompose(const Eigen::MatrixXd& h) { return decompose(h); }

ModeSpectrum williamson(const QuadraticHamiltonian& qh, const WilliamsonOptions& options) {
    Eigen::MatrixXd h = qh.hessian;
    const bool reg = qh.rotationNullVector.size() == h.rows();
    if (reg) h += options.regularization * qh.rotationNullVector * qh.rotationNullVector.transpose();
    ModeSpectrum s = decompose(h);
    if (reg) {
        // the regularized mode is the one carrying the rotational null direction
        int best = 0;
        double bestOverlap = -1.0;
        const Eigen::MatrixXd J = symplecticForm(static_cast<int>(h.rows() / 2));
        for (int k = 0; k < s.modeCount(); ++k) {
            // coordinates of v in the mode basis: Lambda = S^{-T} v = -J S J v
            const Eigen::VectorXd lam = -(J * (s.S * (J * qh.rotationNullVector)));
            const double o = std::hypot(lam[2 * k], lam[2 * k + 1]);
            if (o > bestOverlap) {
                bestOverlap = o;
                best = k;
            }
        }
        s.regularized[best] = true;
    }
    return s;
}

Eigen::VectorXd symplecticEigenvaluesOracle(const Eigen::MatrixXd& h) {
    const int n = static_cast<int>(h.rows() / 2);
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const MatL jh = symplecticForm(n).cast<long double>() * h.cast<long double>();
    Eigen::EigenSolver<MatL> es(jh, false);
    std::vector<double> mags;
    for (int i = 0; i < h.rows(); ++i) mags.push_back(static_cast<double>(std::abs(es.eigenvalues()[i])));
    std::sort(mags.begin(), mags.end());
    Eigen::VectorXd out(n);
    for (int k = 0; k < n; ++k) out[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
    return out;
}

double symplecticResidual(const Eigen::MatrixXd& S) {
    const Eigen::MatrixXd J = symplecticForm(static_cast<int>(S.rows() / 2));
    return (S * J * S.transpose() - J).cwiseAbs().maxCoeff();
}

double reconstructionResidual(const Eigen::MatrixXd& S, const Eigen::VectorXd& frequencies, const Eigen::MatrixXd& h) {
    Eigen::VectorXd w(2 * frequencies.size());
    for (Eigen::Index k = 0; k < frequencies.size(); ++k) w[2 * k] = w[2 * k + 1] = frequencies[k];
    // S H S^T = W  <=>  H = S^{-1} W S^{-T}, with S^{-1} = -J S^T J
    const Eigen::MatrixXd J = symplecticForm(static_cast<int>(frequencies.size()));
    const Eigen::MatrixXd sInv = -J * S.transpose() * J;
    const Eigen::MatrixXd rec = sInv * w.asDiagonal() * sInv.transpose();
    return (rec - h).norm() / h.norm();
}

OrthogonalModes orthogonalModes(const CrystalState& state, const TrapSetup& setup) {
    if (std::abs(state.rotationFrequency - 0.5) > 1e-12)
        throw std::invalid_argument("orthogonalModes: requires the frame without minimal coupling (omega_r = omega_c / 2)");
    const int n = state.ionCount();
    Eigen::MatrixXd k = coulombHessian(state.positions);
    const double az2 = setup.axialRatio * setup.axialRatio;
    const double wxy2 = 0.25 - 0.5 * az2;
    for (int i = 0; i < n; ++i) {
        k(3 * i, 3 * i) += wxy2;
        k(3 * i + 1, 3 * i + 1) += wxy2;
        k(3 * i + 2, 3 * i + 2) += az2;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    OrthogonalModes out;
    out.M = es.eigenvectors().transpose();
    out.frequencies = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    for (int r = 0; r < out.M.rows(); ++r) {
        Eigen::Index idx;
        out.M.row(r).cwiseAbs().maxCoeff(&idx);
        if (out.M(r, idx) < 0) out.M.row(r) *= -1.0;
    }
    return out;
}

double BandGap::geometricMean() const { return std::sqrt(lower * upper); }

BandInfo classifyBands(const ModeSpectrum& spectrum, const TrapSetup&) {
    const int m = spectrum.modeCount();
    const int n = static_cast<int>(spectrum.A.cols() / 6);
    BandInfo info;
    info.labels.assign(m, Band::ExB);
    std::vector<int> planar;
    for (int k = 0; k < m; ++k) {
        double wz = 0.0, wxy = 0.0;
        for (int i = 0; i < n; ++i) {
            wxy += std::norm(spectrum.A(k, qIndex(i, 0))) + std::norm(spectrum.A(k, qIndex(i, 1)));
            wz += std::norm(spectrum.A(k, qIndex(i, 2)));
        }
        const bool reg = !spectrum.regularized.empty() && spectrum.regularized[k];
        if (wz > wxy && !reg)
            info.labels[k] = Band::Axial;
        else
            planar.push_back(k);
    }
    // split in-plane modes at their largest frequency gap, regularized mode excluded
    std::vector<int> free;
    for (int k : planar)
        if (spectrum.regularized.empty() || !spectrum.regularized[k]) free.push_back(k);
    std::sort(free.begin(), free.end(), [&](int a, int b) { return spectrum.frequencies[a] < spectrum.frequencies[b]; });
    size_t split = free.size();
    double bestGap = -1.0;
    for (size_t i = 0; i + 1 < free.size(); ++i) {
        const double g = spectrum.frequencies[free[i + 1]] - spectrum.frequencies[free[i]];
        if (g > bestGap) {
            bestGap = g;
            split = i + 1;
        }
    }
    for (size_t i = split; i < free.size(); ++i) info.labels[free[i]] = Band::Cyclotron;

    for (int b = 0; b < 3; ++b) {
        info.lower[b] = std::numeric_limits<double>::infinity();
        info.upper[b] = -std::numeric_limits<double>::infinity();
    }
    for (int k = 0; k < m; ++k) {
        if (!spectrum.regularized.empty() && spectrum.regularized[k]) continue;
        const int b = static_cast<int>(info.labels[k]);
        info.lower[b] = std::min(info.lower[b], spectrum.frequencies[k]);
        info.upper[b] = std::max(info.upper[b], spectrum.frequencies[k]);
        ++info.count[b];
    }
    std::vector<int> present;
    for (int b = 0; b < 3; ++b)
        if (info.count[b] > 0) present.push_back(b);
    std::sort(present.begin(), present.end(), [&](int a, int b) { return info.lower[a] < info.lower[b]; });
    double reach = -std::numeric_limits<double>::infinity();
    int reachBand = -1;
    for (size_t i = 0; i < present.size(); ++i) {
        const int b = present[i];
        if (reachBand >= 0 && info.lower[b] > reach)
            info.gaps.push_back({reach, info.lower[b], static_cast<Band>(reachBand), static_cast<Band>(b)});
        if (info.upper[b] > reach) {
            reach = info.upper[b];
            reachBand = b;
        }
    }
    return info;
}

const BandGap& widestGap(const BandInfo& info) {
    if (info.gaps.empty()) throw std::runtime_error("bands overlap: no spectral gap available");
    const BandGap* best = &info.gaps.front();
    for (const auto& g : info.gaps)
        if (g.width() > best->width()) best = &g;
    return *best;
}

Eigen::VectorXd participation(const ModeSpectrum& spectrum, int mode) {
    const int n = static_cast<int>(spectrum.A.cols() / 6);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
        w[i] = 0.0;
        for (int a = 0; a < 3; ++a) w[i] += std::norm(spectrum.A(mode, qIndex(i, a)));
    }
    const double s = w.sum();
    if (s > 0) w /= s;
    return w;
}

std::string formatSpectrumCsv(const ModeSpectrum& spectrum, double omegaC) {
    std::ostringstream o;
    const int n = static_cast<int>(spectrum.A.cols() / 6);
    o << "mode,omega_over_omega_c,frequency_Hz,band,regularized";
    for (int i = 0; i < n; ++i) o << ",w_ion" << (i + 1);
    o << "\n";
    char buf[64];
    for (int k = 0; k < spectrum.modeCount(); ++k) {
        o << (k + 1);
        std::snprintf(buf, sizeof buf, ",%.17g", spectrum.frequencies[k]);
        o << buf;
        std::snprintf(buf, sizeof buf, ",%.17g", spectrum.frequencies[k] * omegaC / constants::twoPi);
        o << buf;
        o << "," << (spectrum.bands.empty() ? std::string("unclassified") : toString(spectrum.bands[k]));
        o << "," << ((!spectrum.regularized.empty() && spectrum.regularized[k]) ? 1 : 0);
        const Eigen::VectorXd w = participation(spectrum, k);
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, ",%.10g", w[i]);
            o << buf;
        }
        o << "\n";
    }
    return o.str();
}

}  // namespace wigner
