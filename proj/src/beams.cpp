#include "wigner/beams.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "wigner/constants.hpp"

namespace wigner {

namespace k = constants;

std::string toString(Line l) { return l == Line::D1 ? "D1" : "D2"; }

std::string toString(Polarization p) {
    switch (p) {
        case Polarization::SigmaMinus: return "sigma-";
        case Polarization::Pi: return "pi";
        case Polarization::SigmaPlus: return "sigma+";
    }
    return "?";
}

std::string toString(Regime r) {
    switch (r) {
        case Regime::Zeeman: return "Zeeman";
        case Regime::Intermediate: return "intermediate";
        case Regime::PaschenBack: return "PaschenBack";
    }
    return "?";
}

std::string toString(Scheme s) {
    switch (s) {
        case Scheme::SameSigmaMinus: return "same-sigma-";
        case Scheme::SameSigmaPlus: return "same-sigma+";
        case Scheme::Mixed: return "mixed";
        case Scheme::MixedInverted: return "mixed-inverted";
        case Scheme::MixedP12Only: return "mixed-P1/2-only";
    }
    return "?";
}

double zeemanShift(Level level, double mj, double magneticField) {
    double j = 0.5, g = 0.0;
    switch (level) {
        case Level::S12: g = landeFactor(0.0, 0.5, 0.5); break;
        case Level::P12: g = landeFactor(1.0, 0.5, 0.5); break;
        case Level::P32:
            j = 1.5;
            g = landeFactor(1.0, 0.5, 1.5);
            break;
    }
    const double twice = 2.0 * mj;
    if (std::abs(mj) > j + 1e-12 || std::abs(twice - std::round(twice)) > 1e-12 ||
        static_cast<long>(std::round(twice)) % 2 == 0)
        throw std::invalid_argument("zeemanShift: m_j must be a half-integer with |m_j| <= j");
    return k::muB * g * mj * magneticField;
}

Regime classifyRegime(const IonSpecies& species, double magneticField) {
    if (!(magneticField >= 0.0)) throw std::invalid_argument("classifyRegime: magnetic field must be non-negative");
    if (magneticField < species.zeemanLimit) return Regime::Zeeman;
    if (magneticField > species.paschenBackLimit) return Regime::PaschenBack;
    return Regime::Intermediate;
}

Regime classifyRegime(const std::string& speciesName, double magneticField) {
    return classifyRegime(SpeciesTable::builtin().find(speciesName), magneticField);
}

double zeemanScale(double magneticField) { return k::muB * magneticField / k::hbar; }

double forceCoefficient(Polarization pol, Line line, int state, double d, double b) {
    if (state != 0 && state != 1) throw std::invalid_argument("forceCoefficient: qubit state must be 0 or 1");
    const bool d1 = line == Line::D1;
    switch (pol) {
        case Polarization::SigmaMinus:
            if (d1) return state == 0 ? 0.0 : -1.0 / (2.0 * (3.0 * d + 4.0 * b));
            return state == 0 ? -1.0 / (4.0 * (d + b)) : -1.0 / (4.0 * (3.0 * d + 5.0 * b));
        case Polarization::Pi:
            if (d1) return state == 0 ? 1.0 / (4.0 * (2.0 * b - 3.0 * d)) : -1.0 / (4.0 * (3.0 * d + 2.0 * b));
            return state == 0 ? 1.0 / (2.0 * (b - 3.0 * d)) : -1.0 / (2.0 * (3.0 * d + b));
        case Polarization::SigmaPlus:
            if (d1) return state == 0 ? 1.0 / (2.0 * (4.0 * b - 3.0 * d)) : 0.0;
            return state == 0 ? 1.0 / (4.0 * (5.0 * b - 3.0 * d)) : 1.0 / (4.0 * (b - d));
    }
    return 0.0;
}

double dipoleForce(const ForceTerm& t) {
    if (t.regime == Regime::PaschenBack)
        throw std::domain_error("state-dependent force unavailable in the Paschen-Back regime");
    if (t.regime == Regime::Intermediate)
        throw std::domain_error("intermediate coupling regime is not modeled");
    const double c = forceCoefficient(t.polarization, t.line, t.qubitState, t.detuning, t.zeemanScale);
    if (!std::isfinite(c)) throw std::domain_error("dipoleForce: singular detuning");
    return c * t.fieldStrengthSquaredGradient / k::hbar;
}

bool detuningChainHolds(const std::vector<double>& detunings, double b, double fine, double margin) {
    for (double d : detunings)
        if (!(std::abs(d) >= margin * std::abs(b)) || !(margin * std::abs(d) <= std::abs(fine))) return false;
    return true;
}

namespace {

double checked(double num, double den) {
    if (den == 0.0 || !std::isfinite(den)) throw std::domain_error("solveIntensityRatio: singular denominator");
    return num / den;
}

}  // namespace

RatioSolution solveIntensityRatio(Scheme scheme, double d1, double d2, double b) {
    double r = 0.0;
    switch (scheme) {
        case Scheme::SameSigmaPlus:
            r = checked((4.0 * b - 3.0 * d1) * (2.0 * d2 - 3.0 * b), (d2 - b) * (3.0 * d2 - 5.0 * b));
            break;
        case Scheme::SameSigmaMinus:
            r = checked(-(3.0 * d1 + 4.0 * b) * (2.0 * d2 + 3.0 * b), (d2 + b) * (3.0 * d2 + 5.0 * b));
            break;
        case Scheme::Mixed:
            r = checked((4.0 * b - 3.0 * d1) * (2.0 * d2 + 3.0 * b), (d2 + b) * (3.0 * d2 + 5.0 * b));
            break;
        case Scheme::MixedInverted:
            r = checked((3.0 * d1 + 4.0 * b) * (3.0 * b - 2.0 * d2), (b - d2) * (5.0 * b - 3.0 * d2));
            break;
        case Scheme::MixedP12Only:
            r = checked(4.0 * b - 3.0 * d1, 3.0 * d2 + 4.0 * b);
            break;
    }
    if (4.0 * b - 3.0 * d1 == 0.0 && scheme != Scheme::SameSigmaMinus && scheme != Scheme::MixedInverted)
        throw std::domain_error("solveIntensityRatio: D1 force vanishes, no finite ratio");
    return {r, r > 0.0};
}

std::pair<Beam, Beam> schemeBeams(Scheme scheme, double d1, double d2) {
    using P = Polarization;
    switch (scheme) {
        case Scheme::SameSigmaMinus: return {{Line::D1, P::SigmaMinus, d1}, {Line::D2, P::SigmaMinus, d2}};
        case Scheme::SameSigmaPlus: return {{Line::D1, P::SigmaPlus, d1}, {Line::D2, P::SigmaPlus, d2}};
        case Scheme::Mixed: return {{Line::D1, P::SigmaPlus, d1}, {Line::D2, P::SigmaMinus, d2}};
        case Scheme::MixedInverted: return {{Line::D1, P::SigmaMinus, d1}, {Line::D2, P::SigmaPlus, d2}};
        case Scheme::MixedP12Only: return {{Line::D1, P::SigmaPlus, d1}, {Line::D1, P::SigmaMinus, d2}};
    }
    throw std::invalid_argument("unknown scheme");
}

RatioSolution opposingRatio(const Beam& a, const Beam& b, double z) {
    const double sa = forceCoefficient(a.polarization, a.line, 0, a.detuning, z) +
                      forceCoefficient(a.polarization, a.line, 1, a.detuning, z);
    const double sb = forceCoefficient(b.polarization, b.line, 0, b.detuning, z) +
                      forceCoefficient(b.polarization, b.line, 1, b.detuning, z);
    if (sa == 0.0 || !std::isfinite(sa) || !std::isfinite(sb))
        throw std::domain_error("opposingRatio: singular balance equation");
    const double r = -sb / sa;
    return {r, r > 0.0};
}

double PulseSequence::period() const { return 2.0 * k::pi / modulationFrequency; }

double PulseSequence::duration() const {
    double end = 0.0;
    for (const auto& s : segments) end = std::max(end, s.start + s.duration);
    return end;
}

double PulseSequence::intensity(const PulseSegment& s, double t) const {
    if (t < s.start || t >= s.start + s.duration) return 0.0;
    const double x = std::sin(k::pi * (t - s.start) / s.duration);
    return s.peak * x * x;
}

double PulseSequence::force(int state, double t) const {
    double f = 0.0;
    for (const auto& s : segments) {
        const double i = intensity(s, t);
        if (i != 0.0) f += i * forceCoefficient(s.beam.polarization, s.beam.line, state, s.beam.detuning, zeemanScale);
    }
    return f;
}

namespace {

Beam swapped(Beam b) {
    using P = Polarization;
    if (b.polarization == P::SigmaPlus)
        b.polarization = P::SigmaMinus;
    else if (b.polarization == P::SigmaMinus)
        b.polarization = P::SigmaPlus;
    return b;
}

double stateForce(const Beam& a, double xa, const Beam& b, double xb, int state, double z) {
    return xa * forceCoefficient(a.polarization, a.line, state, a.detuning, z) +
           xb * forceCoefficient(b.polarization, b.line, state, b.detuning, z);
}

}  // namespace

PulseSequence buildPulseSequence(Scheme scheme, double nu, int nPeriods, double d1, double d2, double z,
                                 double switchTime) {
    if (!(nu > 0.0)) throw std::invalid_argument("pulse: modulation frequency must be positive");
    if (nPeriods < 1) throw std::invalid_argument("pulse: at least one modulation period is required");
    const double half = k::pi / nu;
    if (switchTime < 0.0 || switchTime >= half) throw std::invalid_argument("pulse: switch time must lie in [0, pi/nu)");

    Scheme first = scheme;
    if (scheme == Scheme::SameSigmaMinus) first = Scheme::SameSigmaPlus;
    if (scheme == Scheme::MixedInverted) first = Scheme::Mixed;
    const auto plus = schemeBeams(first, d1, d2);
    const std::pair<Beam, Beam> minus{swapped(plus.first), swapped(plus.second)};

    const RatioSolution rp = opposingRatio(plus.first, plus.second, z);
    const RatioSolution rm = opposingRatio(minus.first, minus.second, z);
    if (!rp.physical || !rm.physical)
        throw std::domain_error("pulse: unsolvable, the opposing intensity ratio is negative for the " +
                                std::string(!rp.physical ? "+" : "-") + " branch");
    // scale the - branch so the |0> force averages to zero over a period
    const double f0p = stateForce(plus.first, rp.ratio, plus.second, 1.0, 0, z);
    const double f0m = stateForce(minus.first, rm.ratio, minus.second, 1.0, 0, z);
    const double lambda = -f0p / f0m;
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("pulse: unsolvable, both polarization branches push |0> the same way");

    PulseSequence seq;
    seq.modulationFrequency = nu;
    seq.zeemanScale = z;
    seq.switchTime = switchTime;
    seq.ratioPlus = rp.ratio;
    seq.ratioMinus = rm.ratio;
    const double peak = std::max({rp.ratio, 1.0, lambda * rm.ratio, lambda});
    const double hump = half - switchTime;
    for (int p = 0; p < nPeriods; ++p) {
        const double t0 = p * 2.0 * half + 0.5 * switchTime;
        seq.segments.push_back({t0, hump, plus.first, rp.ratio / peak, '+'});
        seq.segments.push_back({t0, hump, plus.second, 1.0 / peak, '+'});
        seq.segments.push_back({t0 + half, hump, minus.first, lambda * rm.ratio / peak, '-'});
        seq.segments.push_back({t0 + half, hump, minus.second, lambda / peak, '-'});
    }
    return seq;
}

ConditionResiduals verifyConditions(const PulseSequence& seq, int samplesPerPeriod) {
    ConditionResiduals r;
    if (seq.segments.empty()) return r;
    if (samplesPerPeriod < 40) throw std::invalid_argument("verifyConditions: at least 40 samples per period");
    const double tau = seq.period();
    const double total = seq.duration();
    const int periods = std::max(1, static_cast<int>(std::ceil(total / tau - 1e-9)));
    const int samples = periods * samplesPerPeriod;
    double peak = 0.0, opp = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = total * i / samples;
        const double f0 = seq.force(0, t), f1 = seq.force(1, t);
        peak = std::max({peak, std::abs(f0), std::abs(f1)});
        opp = std::max(opp, std::abs(f0 + f1));
    }
    // segment midpoints are the hump maxima
    for (const auto& s : seq.segments) {
        const double t = s.start + 0.5 * s.duration;
        const double f0 = seq.force(0, t), f1 = seq.force(1, t);
        peak = std::max({peak, std::abs(f0), std::abs(f1)});
        opp = std::max(opp, std::abs(f0 + f1));
    }
    if (peak == 0.0) return r;
    r.opposition = opp / peak;

    // per-period integrals, exact for sin^2 humps with Gauss-Legendre on each segment
    using rule = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> int0(periods, 0.0), int1(periods, 0.0);
    for (const auto& s : seq.segments) {
        const int p = std::min(periods - 1, static_cast<int>(std::floor(s.start / tau)));
        const double c0 = forceCoefficient(s.beam.polarization, s.beam.line, 0, s.beam.detuning, seq.zeemanScale);
        const double c1 = forceCoefficient(s.beam.polarization, s.beam.line, 1, s.beam.detuning, seq.zeemanScale);
        const double area = rule::integrate(
            [&](double u) {
                const double x = std::sin(k::pi * u);
                return x * x;
            },
            0.0, 1.0) * s.duration * s.peak;
        int0[p] += c0 * area;
        int1[p] += c1 * area;
    }
    for (int p = 0; p < periods; ++p) {
        r.mean0 = std::max(r.mean0, std::abs(int0[p]) / (peak * tau));
        r.mean1 = std::max(r.mean1, std::abs(int1[p]) / (peak * tau));
    }
    return r;
}

std::string formatPulseCsv(const PulseSequence& seq) {
    std::ostringstream o;
    o << "t_start,duration,line,polarization,detuning_Hz,intensity_rel,ratio_branch\n";
    char buf[256];
    for (const auto& s : seq.segments) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%s,%.17g,%.17g,%c\n", s.start, s.duration,
                      toString(s.beam.line).c_str(), toString(s.beam.polarization).c_str(),
                      s.beam.detuning / (2.0 * k::pi), s.peak, s.branch);
        o << buf;
    }
    return o.str();
}

std::vector<double> sampleCarrier(const PulseSequence& seq, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("sampleCarrier: step must be positive");
    if (step > seq.period() / 40.0) throw std::invalid_argument("sampleCarrier: need at least 40 samples per period");
    const double total = seq.duration();
    const auto n = static_cast<size_t>(std::floor(total / step)) + 1;
    std::vector<double> v(n);
    double peak = 0.0;
    for (size_t i = 0; i < n; ++i) {
        v[i] = seq.force(0, i * step);
        peak = std::max(peak, std::abs(v[i]));
    }
    if (peak > 0.0)
        for (double& x : v) x /= peak;
    return v;
}

}  // namespace wigner
