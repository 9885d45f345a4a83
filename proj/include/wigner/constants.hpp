#pragma once

// CODATA 2018 values, SI units.
namespace wigner::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double twoPi = 2.0 * pi;

inline constexpr double e = 1.602176634e-19;          // C
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double kB = 1.380649e-23;            // J / K
inline constexpr double c = 299792458.0;              // m / s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F / m
inline constexpr double muB = 9.2740100783e-24;       // J / T
inline constexpr double u = 1.66053906660e-27;        // kg
inline constexpr double a0 = 5.29177210903e-11;       // m

}  // namespace wigner::constants
