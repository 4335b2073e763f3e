#pragma once

#include <cmath>
#include <complex>

namespace crossing {

/// e^z - 1 without cancellation near z = 0.
inline std::complex<double> expm1(std::complex<double> z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// (e^z - 1)/z, continuous at z = 0.
inline std::complex<double> exprel(std::complex<double> z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
    return expm1(z) / z;
}

inline double exprel(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
    return std::expm1(z) / z;
}

}  // namespace crossing
