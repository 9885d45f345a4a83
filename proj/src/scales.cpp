#include "wigner/scales.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wigner/constants.hpp"

#ifndef WIGNER_DATA_DIR
#define WIGNER_DATA_DIR "data"
#endif

namespace wigner {

namespace k = constants;

void IonSpecies::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("species " + name + ": mass must be positive");
    if (!(linewidth > 0.0)) throw std::invalid_argument("species " + name + ": linewidth must be positive");
    if (!(fineStructureSplitting > 0.0))
        throw std::invalid_argument("species " + name + ": fine-structure splitting must be positive");
    if (std::abs(gS12 - 2.0) > 1e-12 || std::abs(gP12 - 2.0 / 3.0) > 1e-12 || std::abs(gP32 - 4.0 / 3.0) > 1e-12)
        throw std::invalid_argument("species " + name + ": Lande factors inconsistent");
}

double landeFactor(double L, double S, double J) {
    if (J <= 0.0) throw std::invalid_argument("landeFactor: J must be positive");
    return 1.0 + (J * (J + 1.0) + S * (S + 1.0) - L * (L + 1.0)) / (2.0 * J * (J + 1.0));
}

std::string normalizeSpeciesName(const std::string& name) {
    std::string s;
    for (char ch : name)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    s = s.substr(i);
    // spectroscopic notation: "ii" = singly ionized, "i" = neutral
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "ii") == 0)
        s = s.substr(0, s.size() - 2) + "+";
    else if (s.size() > 1 && s.back() == 'i')
        s.pop_back();
    return s;
}

SpeciesTable SpeciesTable::parse(const std::string& text) {
    SpeciesTable table;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        IonSpecies sp;
        double massU, gammaMHz, dE, l1, l2, m1, m2, bz, bpb;
        if (!(ls >> sp.name)) continue;
        if (!(ls >> sp.chargeNumber >> massU >> gammaMHz >> dE >> l1 >> l2 >> m1 >> m2 >> bz >> bpb))
            throw std::runtime_error("species table line " + std::to_string(lineNo) + ": expected 11 columns");
        sp.mass = massU * k::u;
        sp.charge = sp.chargeNumber * k::e;
        sp.linewidth = k::twoPi * gammaMHz * 1e6;
        sp.fineStructureSplitting = dE * 1e12;
        sp.omegaD1 = k::twoPi * k::c / (l1 * 1e-9);
        sp.omegaD2 = k::twoPi * k::c / (l2 * 1e-9);
        sp.matrixElementD1 = m1 * k::e * k::a0;
        sp.matrixElementD2 = m2 * k::e * k::a0;
        sp.gS12 = landeFactor(0.0, 0.5, 0.5);
        sp.gP12 = landeFactor(1.0, 0.5, 0.5);
        sp.gP32 = landeFactor(1.0, 0.5, 1.5);
        sp.zeemanLimit = bz;
        sp.paschenBackLimit = bpb;
        sp.validate();
        table.species_.push_back(sp);
    }
    return table;
}

SpeciesTable SpeciesTable::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open species table " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

const SpeciesTable& SpeciesTable::builtin() {
    static const SpeciesTable table = load(std::string(WIGNER_DATA_DIR) + "/species.tsv");
    return table;
}

const IonSpecies& SpeciesTable::find(const std::string& name) const {
    const std::string key = normalizeSpeciesName(name);
    for (const auto& sp : species_)
        if (normalizeSpeciesName(sp.name) == key) return sp;
    throw std::invalid_argument("unknown species: " + name);
}

void TrapSetup::validate() const {
    if (!(cyclotronFrequency > 0.0)) throw std::invalid_argument("trap: cyclotron frequency must be positive");
    if (!(axialRatio > 0.0) || !(axialRatio < 1.0 / std::sqrt(2.0)))
        throw std::invalid_argument("trap: axial ratio must lie in (0, 1/sqrt(2)), no radial confinement otherwise");
    if (ionCount < 1) throw std::invalid_argument("trap: ion count must be at least 1");
}

double TrapSetup::magneticField(const IonSpecies& species) const {
    if (species.charge == 0.0) throw std::invalid_argument("species " + species.name + " is neutral");
    return species.mass * cyclotronFrequency / species.charge;
}

TrapSetup makeTrap(double nuCyclotronHz, double axialRatio, int ionCount) {
    TrapSetup s{k::twoPi * nuCyclotronHz, axialRatio, ionCount};
    s.validate();
    return s;
}

ScaleSet deriveScales(const TrapSetup& setup, const IonSpecies& species) {
    setup.validate();
    species.validate();
    if (species.charge == 0.0) throw std::invalid_argument("species " + species.name + " is neutral");
    const double m = species.mass;
    const double wc = setup.cyclotronFrequency;
    const double q2 = species.charge * species.charge / (4.0 * k::pi * k::epsilon0);
    ScaleSet s;
    s.length = std::cbrt(q2 / (m * wc * wc));
    s.momentum = s.length * m * wc;
    s.energy = q2 / s.length;
    s.hbarTilde = k::hbar / (s.length * s.length * m * wc);
    return s;
}

TrapFrequencies trapFrequencies(const TrapSetup& setup) {
    setup.validate();
    const double wc = setup.cyclotronFrequency;
    const double wz = setup.axialRatio * wc;
    TrapFrequencies f;
    f.axial = wz;
    f.radial = 0.5 * std::sqrt(wc * wc - 2.0 * wz * wz);
    f.magnetron = 0.5 * wc - f.radial;
    return f;
}

double anisotropy(double omegaR, const TrapSetup& setup) {
    const double wz = setup.axialRatio * setup.cyclotronFrequency;
    return omegaR * (setup.cyclotronFrequency - omegaR) / (wz * wz) - 0.5;
}

double anisotropyRatio(double x, double axialRatio) {
    return x * (1.0 - x) / (axialRatio * axialRatio) - 0.5;
}

double criticalAnisotropy(int ionCount) {
    if (ionCount < 1) throw std::invalid_argument("ion count must be at least 1");
    return 0.665 / std::sqrt(static_cast<double>(ionCount));
}

StabilityClass stabilityClass(double beta, int ionCount) {
    const double bc = criticalAnisotropy(ionCount);
    if (beta <= 0.0) return StabilityClass::Unconfined;
    if (beta < bc) return StabilityClass::Planar2D;
    return StabilityClass::Confined3D;
}

std::string toString(StabilityClass c) {
    switch (c) {
        case StabilityClass::Unconfined: return "unconfined";
        case StabilityClass::Confined3D: return "confined3D";
        case StabilityClass::Planar2D: return "planar2D";
    }
    return "?";
}

double effectiveRadialFrequency(double omegaR, const TrapSetup& setup) {
    const double wc = setup.cyclotronFrequency;
    const double wz = setup.axialRatio * wc;
    const double dw = wc - 2.0 * omegaR;
    const double rad = wc * wc - dw * dw - 2.0 * wz * wz;
    if (rad < 0.0) throw std::domain_error("no effective radial confinement at this rotation frequency");
    return 0.5 * std::sqrt(rad);
}

double effectiveRadialFrequencyAlt(double omegaR, const TrapSetup& setup) {
    const double wc = setup.cyclotronFrequency;
    const double wz = setup.axialRatio * wc;
    const double rad = omegaR * (wc - omegaR) - 0.5 * wz * wz;
    if (rad < 0.0) throw std::domain_error("no effective radial confinement at this rotation frequency");
    return std::sqrt(rad);
}

}  // namespace wigner
