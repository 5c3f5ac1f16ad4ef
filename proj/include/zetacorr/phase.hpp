#pragma once

#include <cmath>
#include <complex>

namespace zetacorr {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;
inline constexpr long double kTwoPiL = 2.0L * kPiL;

// x mod 2 pi in [0, 2 pi), in extended precision. Phases like t log n reach
// 1e9 rad at desk heights, so reducing in double would cost ~1e-7 absolute.
inline long double reduce_2pi(long double x) {
    long double r = std::fmod(x, kTwoPiL);
    if (r < 0) r += kTwoPiL;
    return r;
}

// e^{i phase} with the phase reduced first.
inline std::complex<double> unit_phasor(long double phase) {
    const double r = static_cast<double>(reduce_2pi(phase));
    return {std::cos(r), std::sin(r)};
}

}  // namespace zetacorr
