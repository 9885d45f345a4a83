#pragma once

#include <cmath>
#include <cstdlib>

#include "wigner/beams.hpp"

namespace oracle {

using wigner::Line;
using wigner::Polarization;

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// <j1 m1; j2 m2 | J M> by the Racah formula, half-integers passed doubled.
inline double clebsch(int j1, int m1, int j2, int m2, int J, int M) {
    if (m1 + m2 != M) return 0.0;
    auto f = [](int twice) { return factorial(twice / 2); };
    const double pre = std::sqrt((J + 1) * f(J + j1 - j2) * f(J - j1 + j2) * f(j1 + j2 - J) / f(j1 + j2 + J + 2));
    const double norm = std::sqrt(f(J + M) * f(J - M) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2));
    double sum = 0.0;
    for (int kk = 0; kk <= 20; kk += 2) {
        const int a = j1 + j2 - J - kk, b = j1 - m1 - kk, c = j2 + m2 - kk, d = J - j2 + m1 + kk, e = J - j1 - m2 + kk;
        if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
        sum += ((kk / 2) % 2 ? -1.0 : 1.0) / (f(kk) * f(a) * f(b) * f(c) * f(d) * f(e));
    }
    return pre * norm * sum;
}

// Force coefficient from the light shift: -CG^2 / (4 (delta - (g_e m_e - g_g m_g) B)), with
// |0> = m_j -1/2 and |1> = m_j +1/2 of S1/2.
inline double lightShiftOracle(Polarization pol, Line line, int state, double delta, double b) {
    const int q = pol == Polarization::SigmaMinus ? -2 : pol == Polarization::Pi ? 0 : 2;
    const int mg = state == 0 ? -1 : 1;
    const int je = line == Line::D1 ? 1 : 3;
    const int me = mg + q;
    if (std::abs(me) > je) return 0.0;
    const double cg = clebsch(1, mg, 2, q, je, me);
    const double ge = line == Line::D1 ? 2.0 / 3.0 : 4.0 / 3.0;
    const double shift = (ge * me / 2.0 - 2.0 * mg / 2.0) * b;
    return -cg * cg / (4.0 * (delta - shift));
}

}  // namespace oracle
