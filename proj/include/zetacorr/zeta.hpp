#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace zetacorr {

inline constexpr double kEulerMaclaurinMaxImag = 1e5;
inline constexpr int kDefaultRsTerms = 2;
inline constexpr int kMaxRsTerms = 6;

// zeta(s) by Euler-Maclaurin summation. Truncation point N = max(20, 2|Im s|),
// doubled until the correction series falls below precision_target.
// Throws PoleError at s = 1 and RangeError for |Im s| > 1e5.
std::complex<double> zeta_euler_maclaurin(std::complex<double> s, double precision_target = 1e-12);

// Riemann-Siegel theta, asymptotic expansion (accurate to ~1e-13 for t >= 10).
double riemann_siegel_theta(double t);
long double riemann_siegel_theta_ld(long double t);

// Hardy Z(t) via Riemann-Siegel with remainder terms C_0..C_k, k = correction_terms.
// Requires t >= 10 and 0 <= correction_terms <= kMaxRsTerms.
double riemann_siegel_Z(double t, int correction_terms = kDefaultRsTerms);

// Documented error envelope c_k * t^{-(2k+3)/4} for riemann_siegel_Z; the
// constants were fitted against the Euler-Maclaurin evaluator on t in [10, 1e4]
// with a safety factor of 4 (see tests/test_zeta.cpp).
double riemann_siegel_error_bound(double t, int correction_terms);

// Remainder coefficient C_k(p), p = frac(sqrt(t / 2 pi)). Exposed for tests.
double riemann_siegel_coefficient(int k, double p);

struct OneLinePoint {
    double delta = 0.0;
    double sigma_offset = 0.0;
    std::complex<double> value;
};

// zeta(1 + sigma_offset + i delta); sigma_offset in (0, 1], |delta| <= 1e7.
OneLinePoint zeta_one_line(double delta, double sigma_offset);

// Samples of zeta(1/2 + i t_k) at t_k = t0 + k * step. Either complex values
// or moduli only, never both.
struct ZetaGrid {
    double t0 = 0.0;
    double step = 0.0;
    bool modulus_only = false;
    std::vector<std::complex<double>> values;
    std::vector<double> moduli;

    std::size_t size() const { return modulus_only ? moduli.size() : values.size(); }
    double t(std::size_t k) const {
        return static_cast<double>(static_cast<long double>(t0) + static_cast<long double>(k) * step);
    }
    double modulus(std::size_t k) const { return modulus_only ? moduli[k] : std::abs(values[k]); }

    bool operator==(const ZetaGrid&) const = default;
};

struct GridRequest {
    double t0 = 0.0;
    double t1 = 0.0;
    double step = 0.05;
    int correction_terms = kDefaultRsTerms;
    bool modulus_only = false;
};

// Number of samples: floor((t1 - t0) / step) + 1, so the last sample is >= t1 - step.
std::size_t grid_sample_count(const GridRequest& req);

// OpenMP kernel: chunks of kDefaultChunk samples, each evaluated with rotating
// phasors n^{-i t} from an exactly-seeded start, concatenated in chunk order.
ZetaGrid sample_critical_line(const GridRequest& req);

// Serial reference: direct Riemann-Siegel evaluation at every sample.
ZetaGrid sample_critical_line_reference(const GridRequest& req);

// ZGRD cache file (little-endian): "ZGRD", u32 version, u32 flags (bit 0 =
// modulus-only), f64 t0, f64 step, u64 count, then count (re, im) f64 pairs
// or count f64 moduli.
inline constexpr std::uint32_t kGridFileVersion = 1;
inline constexpr std::uint32_t kGridFlagModulusOnly = 1u;

void cache_write(const ZetaGrid& grid, const std::filesystem::path& path);
ZetaGrid cache_read(const std::filesystem::path& path);

}  // namespace zetacorr
