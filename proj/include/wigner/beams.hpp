#pragma once

#include <string>
#include <vector>

#include "wigner/scales.hpp"

namespace wigner {

enum class Level { S12, P12, P32 };
enum class Line { D1, D2 };
enum class Polarization { SigmaMinus, Pi, SigmaPlus };
enum class Regime { Zeeman, Intermediate, PaschenBack };

std::string toString(Line l);
std::string toString(Polarization p);
std::string toString(Regime r);

// mu_B g_J m_j B in joules.
double zeemanShift(Level level, double mj, double magneticField);

Regime classifyRegime(const IonSpecies& species, double magneticField);
Regime classifyRegime(const std::string& speciesName, double magneticField);

// Zeeman scale mu_B B / hbar in rad/s.
double zeemanScale(double magneticField);

// Table entry c such that the force on a state is c X / hbar, with X = M E0^2 grad chi^2.
// Detuning and zeeman scale in rad/s.
double forceCoefficient(Polarization pol, Line line, int qubitState, double detuning, double zeemanScale);

struct ForceTerm {
    Line line = Line::D1;
    Polarization polarization = Polarization::SigmaPlus;
    int qubitState = 0;
    double detuning = 0.0;                      // rad/s
    double fieldStrengthSquaredGradient = 1.0;  // X
    double zeemanScale = 0.0;                   // rad/s
    Regime regime = Regime::Zeeman;
};

// Force c X / hbar; throws outside the Zeeman regime.
double dipoleForce(const ForceTerm& term);

// Checks |B| << |delta| << Delta E / hbar with the given margin factor.
bool detuningChainHolds(const std::vector<double>& detunings, double zeemanScale, double fineStructure,
                        double margin = 3.0);

enum class Scheme {
    SameSigmaMinus,  // D1 and D2, both sigma-
    SameSigmaPlus,   // D1 and D2, both sigma+
    Mixed,           // D1 sigma+, D2 sigma-
    MixedInverted,   // D1 sigma-, D2 sigma+
    MixedP12Only     // D1 sigma+ at delta_a, D1 sigma- at delta_b
};

std::string toString(Scheme s);

struct RatioSolution {
    double ratio = 0.0;  // X_first / X_second
    bool physical = true;  // false when the ratio is negative
};

// Closed-form intensity ratio that opposes the forces on |0> and |1>. For MixedP12Only the two
// detuning arguments are delta_a and delta_b of the two P1/2 beams.
RatioSolution solveIntensityRatio(Scheme scheme, double delta1, double delta2, double zeemanScale);

struct Beam {
    Line line = Line::D1;
    Polarization polarization = Polarization::SigmaPlus;
    double detuning = 0.0;
};

// The two beams of a scheme, in ratio order.
std::pair<Beam, Beam> schemeBeams(Scheme scheme, double delta1, double delta2);

// Ratio from the table coefficients of two arbitrary beams (X_first / X_second).
RatioSolution opposingRatio(const Beam& first, const Beam& second, double zeemanScale);

struct PulseSegment {
    double start = 0.0;     // s
    double duration = 0.0;  // s
    Beam beam;
    double peak = 0.0;  // X in units of the largest peak
    char branch = '+';
};

struct PulseSequence {
    double modulationFrequency = 0.0;  // nu, rad/s
    double zeemanScale = 0.0;
    double switchTime = 0.0;  // dark time at each polarization switch
    std::vector<PulseSegment> segments;
    double ratioPlus = 0.0;
    double ratioMinus = 0.0;

    double period() const;
    double duration() const;
    // Force c X / hbar on a qubit state at time t, in units of X_peak / hbar.
    double force(int qubitState, double t) const;
    double intensity(const PulseSegment& s, double t) const;
};

// sin^2 humps: the + branch on [0, pi/nu), the - branch on [pi/nu, 2 pi/nu), repeated nPeriods times.
// The same-polarization schemes use sigma+ then sigma-, the mixed schemes swap both polarizations.
PulseSequence buildPulseSequence(Scheme scheme, double nu, int nPeriods, double delta1, double delta2,
                                 double zeemanScale, double switchTime = 0.0);

struct ConditionResiduals {
    double opposition = 0.0;
    double mean0 = 0.0;
    double mean1 = 0.0;
    bool pass(double tol = 1e-8) const { return opposition < tol && mean0 < tol && mean1 < tol; }
};

ConditionResiduals verifyConditions(const PulseSequence& seq, int samplesPerPeriod = 64);

std::string formatPulseCsv(const PulseSequence& seq);

// Uniform sampling of f^{|0>} normalized to its peak, usable as the gate carrier.
std::vector<double> sampleCarrier(const PulseSequence& seq, double step);

}  // namespace wigner
