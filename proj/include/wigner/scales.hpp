#pragma once

#include <string>
#include <vector>

namespace wigner {

struct IonSpecies {
    std::string name;
    int chargeNumber = 1;
    double mass = 0.0;                  // kg
    double charge = 0.0;                // C
    double fineStructureSplitting = 0;  // Delta E / hbar, rad/s
    double linewidth = 0.0;             // Gamma, rad/s
    double omegaD1 = 0.0;               // rad/s
    double omegaD2 = 0.0;               // rad/s
    double matrixElementD1 = 0.0;       // C m
    double matrixElementD2 = 0.0;       // C m
    double gS12 = 2.0;
    double gP12 = 2.0 / 3.0;
    double gP32 = 4.0 / 3.0;
    double zeemanLimit = 0.0;           // B_Z, T
    double paschenBackLimit = 0.0;      // B_PB, T

    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

// Lande factor g_J for an LS-coupled level with g_s = 2 (nuclear term neglected).
double landeFactor(double L, double S, double J);

class SpeciesTable {
public:
    static SpeciesTable load(const std::string& path);
    static SpeciesTable parse(const std::string& text);
    // Table shipped with the repository (path fixed at build time).
    static const SpeciesTable& builtin();

    // Accepts "Be+", "Be II", "9Be+", case-insensitive.
    const IonSpecies& find(const std::string& name) const;
    const std::vector<IonSpecies>& all() const { return species_; }

private:
    std::vector<IonSpecies> species_;
};

std::string normalizeSpeciesName(const std::string& name);

struct TrapSetup {
    double cyclotronFrequency = 0.0;  // omega_c, rad/s
    double axialRatio = 0.0;          // alpha_z = omega_z / omega_c
    int ionCount = 1;

    void validate() const;
    double magneticField(const IonSpecies& species) const;
};

TrapSetup makeTrap(double nuCyclotronHz, double axialRatio, int ionCount);

struct ScaleSet {
    double length = 0.0;    // l_s, m
    double momentum = 0.0;  // p_s, kg m / s
    double energy = 0.0;    // E_s, J
    double hbarTilde = 0.0; // hbar / (l_s^2 m omega_c)
};

ScaleSet deriveScales(const TrapSetup& setup, const IonSpecies& species);

struct TrapFrequencies {
    double axial = 0.0;     // omega_z
    double radial = 0.0;    // omega_xy
    double magnetron = 0.0; // omega_m
};

TrapFrequencies trapFrequencies(const TrapSetup& setup);

// beta = omega_r (omega_c - omega_r) / omega_z^2 - 1/2
double anisotropy(double omegaR, const TrapSetup& setup);
// Same relation in omega_c units: x = omega_r / omega_c.
double anisotropyRatio(double x, double axialRatio);

enum class StabilityClass { Unconfined, Confined3D, Planar2D };

double criticalAnisotropy(int ionCount);
StabilityClass stabilityClass(double beta, int ionCount);
std::string toString(StabilityClass c);

double effectiveRadialFrequency(double omegaR, const TrapSetup& setup);
// Alternative closed form sqrt(omega_r (omega_c - omega_r) - omega_z^2 / 2).
double effectiveRadialFrequencyAlt(double omegaR, const TrapSetup& setup);

}  // namespace wigner
