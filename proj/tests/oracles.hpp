#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
            return m;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Upper arc of the cubic focus from (-x0, 0): xi^2 + xi^3 = x0^2 - x0^3.
inline double cubic_upper_return(double x0)
{
    const double rhs = x0 * x0 - x0 * x0 * x0;
    return bisect([rhs](double s) { return s * s + s * s * s - rhs; }, 0.0, 1.0);
}

// x0^(2^r) by repeated squaring.
inline double squared(double x0, int r)
{
    double v = x0;
    for (int i = 0; i < r; ++i) {
        v *= v;
    }
    return v;
}

// x0 + 2 * sum_{r>=1} x0^(2^r), unit horizontal speed.
inline double cascade_total_time(double x0)
{
    double sum = 0.0;
    double term = x0;
    for (int r = 1; r < 12; ++r) {
        term *= term;
        sum += term;
    }
    return x0 + 2.0 * sum;
}

// Frozen from 30-digit evaluations.
inline constexpr double total_time_half = 1.1328430180437862874;
inline constexpr double cubic_return_01 = 0.090832691319598390674;
inline constexpr double cubic_return_02 = 0.16568542494923802113;
inline constexpr double psi_at_half = 0.26359713811572677008;
inline constexpr double psi_prime_at_half = -0.46861713442795870236;
inline constexpr double quarter_over_e = 0.091969860292860580399;

} // namespace oracle
