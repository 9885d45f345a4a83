#include <doctest.h>

#include <cmath>

#include "wigner/constants.hpp"
#include "wigner/scales.hpp"

using namespace wigner;
namespace k = wigner::constants;

TEST_CASE("trap frequencies follow omega_z = alpha_z omega_c and omega_xy^2 = (omega_c^2 - 2 omega_z^2) / 4") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 30);
    const TrapFrequencies f = trapFrequencies(t);
    const double wc = k::twoPi * 76.08e3;
    CHECK(f.axial == doctest::Approx(0.7 * wc).epsilon(1e-14));
    CHECK(f.radial == doctest::Approx(0.5 * wc * std::sqrt(1.0 - 2.0 * 0.49)).epsilon(1e-12));
    CHECK(f.magnetron == doctest::Approx(0.5 * wc - f.radial).epsilon(1e-12));
    CHECK(std::abs(f.axial / k::twoPi - 53.26e3) < 10.0);
    CHECK(std::abs(f.radial / k::twoPi - 5.38e3) < 10.0);

    const TrapFrequencies g = trapFrequencies(makeTrap(7.608e6, 0.02, 30));
    CHECK(std::abs(g.axial / k::twoPi / 152.16e3 - 1.0) < 5e-3);
    CHECK(std::abs(g.radial / k::twoPi / 3.80e6 - 1.0) < 5e-3);
}

TEST_CASE("trap setup rejects unconfined axial ratios") {
    CHECK_THROWS(makeTrap(76.08e3, 0.75, 30));
    CHECK_THROWS(makeTrap(-1.0, 0.5, 30));
    CHECK_THROWS(makeTrap(76.08e3, 0.5, 0));
}

TEST_CASE("Lande factors") {
    CHECK(landeFactor(0.0, 0.5, 0.5) == doctest::Approx(2.0));
    CHECK(landeFactor(1.0, 0.5, 0.5) == doctest::Approx(2.0 / 3.0));
    CHECK(landeFactor(1.0, 0.5, 1.5) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("species lookup accepts spectroscopic and isotope names") {
    const auto& table = SpeciesTable::builtin();
    const IonSpecies& be = table.find("Be+");
    CHECK(&table.find("Be II") == &be);
    CHECK(&table.find("9Be+") == &be);
    CHECK(&table.find("be+") == &be);
    CHECK(be.mass == doctest::Approx(9.0116345 * k::u));
    CHECK_THROWS(table.find("Xx+"));
    CHECK_THROWS(SpeciesTable::parse("Be+ 1 9.0\n"));
}

TEST_CASE("length scale solves l_s^3 = e^2 / (4 pi eps0 m omega_c^2)") {
    const TrapSetup t = makeTrap(7.608e6, 0.02, 30);
    const IonSpecies& be = SpeciesTable::builtin().find("Be+");
    const ScaleSet s = deriveScales(t, be);
    const double wc = t.cyclotronFrequency;
    const double lhs = be.mass * wc * wc * std::pow(s.length, 3);
    CHECK(lhs == doctest::Approx(k::e * k::e / (4.0 * k::pi * k::epsilon0)).epsilon(1e-12));
    CHECK(s.hbarTilde == doctest::Approx(k::hbar / (be.mass * wc * s.length * s.length)).epsilon(1e-12));
    CHECK(s.energy == doctest::Approx(be.mass * wc * wc * s.length * s.length).epsilon(1e-12));
}

TEST_CASE("anisotropy and critical value") {
    const TrapSetup t = makeTrap(76.08e3, 0.7, 30);
    const double wr = 0.5 * t.cyclotronFrequency;
    CHECK(anisotropy(wr, t) == doctest::Approx(0.25 / 0.49 - 0.5).epsilon(1e-12));
    CHECK(anisotropyRatio(0.5, 0.7) == doctest::Approx(anisotropy(wr, t)).epsilon(1e-12));
    CHECK(std::abs(criticalAnisotropy(30) - 0.1214) < 5e-4);
    CHECK((stabilityClass(3.4e-4, 30) == StabilityClass::Planar2D));
    CHECK((stabilityClass(0.5, 30) == StabilityClass::Confined3D));
    CHECK((stabilityClass(-0.1, 30) == StabilityClass::Unconfined));
}

TEST_CASE("effective radial frequency closed forms agree") {
    const TrapSetup t = makeTrap(7.608e6, 0.02, 30);
    for (double nuR : {1.65e3, 3.0e3, 5.0e3, 1.0e6}) {
        const double wr = k::twoPi * nuR;
        CHECK(effectiveRadialFrequency(wr, t) == doctest::Approx(effectiveRadialFrequencyAlt(wr, t)).epsilon(1e-9));
    }
    CHECK_THROWS(effectiveRadialFrequency(k::twoPi * 10.0, t));
    CHECK_THROWS(effectiveRadialFrequency(k::twoPi * 1.0e3, t));
}
