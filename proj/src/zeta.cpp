#include "zetacorr/zeta.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "zetacorr/errors.hpp"
#include "zetacorr/parallel.hpp"
#include "zetacorr/phase.hpp"
#include "zetacorr/summation.hpp"

namespace zetacorr {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Euler-Maclaurin
// ---------------------------------------------------------------------------

constexpr int kMaxBernoulli = 60;

// B_{2k} / (2k)!, k = 1..kMaxBernoulli.
const std::array<double, kMaxBernoulli + 1>& bernoulli_ratios() {
    static const auto table = [] {
        std::array<double, kMaxBernoulli + 1> b{};
        for (int k = 1; k <= kMaxBernoulli; ++k)
            b[k] = boost::math::bernoulli_b2n<double>(k) / boost::math::factorial<double>(2 * k);
        return b;
    }();
    return table;
}

// n^{-s} with the phase t log n reduced in extended precision.
std::complex<double> pow_minus_s(long double log_n, std::complex<double> s) {
    const double mag = std::exp(-s.real() * static_cast<double>(log_n));
    const double phase = static_cast<double>(reduce_2pi(static_cast<long double>(s.imag()) * log_n));
    return {mag * std::cos(phase), -mag * std::sin(phase)};
}

std::complex<double> euler_maclaurin_core(std::complex<double> s, double target, std::uint64_t n_trunc) {
    const auto& bern = bernoulli_ratios();
    for (int attempt = 0; attempt < 8; ++attempt, n_trunc *= 2) {
        ComplexKahanSum acc;
        for (std::uint64_t n = 1; n < n_trunc; ++n)
            acc.add(pow_minus_s(std::log(static_cast<long double>(n)), s));

        const long double log_N = std::log(static_cast<long double>(n_trunc));
        const double N = static_cast<double>(n_trunc);
        const std::complex<double> N_ms = pow_minus_s(log_N, s);
        acc.add(N * N_ms / (s - 1.0));
        acc.add(0.5 * N_ms);

        // term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
        std::complex<double> poch = s * N_ms / N;
        double prev = INFINITY;
        bool converged = false;
        for (int k = 1; k <= kMaxBernoulli; ++k) {
            if (k > 1) poch *= (s + double(2 * k - 3)) * (s + double(2 * k - 2)) / (N * N);
            const std::complex<double> term = bern[k] * poch;
            const double mag = std::abs(term);
            acc.add(term);
            if (mag < 0.1 * target) {
                converged = true;
                break;
            }
            if (k > 2 && mag > prev) break;  // asymptotic series started diverging
            prev = mag;
        }
        if (converged) return acc.value();
    }
    throw RangeError("Euler-Maclaurin failed to reach the precision target");
}

// ---------------------------------------------------------------------------
// Riemann-Siegel remainder coefficients
// ---------------------------------------------------------------------------

// Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), written in x = p - 1/2.
// The singularities of the quotient are removable, so Psi is entire and its
// Taylor coefficients come from the Cauchy integral on |x| = 1.
std::complex<double> psi_of_x(std::complex<double> x) {
    const std::complex<double> num = std::cos(2.0 * kPi * x * x - 5.0 * kPi / 8.0);
    const std::complex<double> den = std::cos(2.0 * kPi * x);
    return -num / den;
}

constexpr int kPsiDegree = 110;
constexpr int kCauchyPoints = 512;

struct RsCoefficients {
    std::array<std::vector<double>, kMaxRsTerms + 1> c;  // C_k as power series in x = p - 1/2
};

const RsCoefficients& rs_coefficients() {
    static const RsCoefficients tables = [] {
        const int deg = kPsiDegree + 18;
        std::vector<std::complex<double>> samples(kCauchyPoints);
        for (int j = 0; j < kCauchyPoints; ++j)
            samples[j] = psi_of_x(std::polar(1.0, 2.0 * kPi * j / kCauchyPoints));
        std::vector<double> a(deg + 1);
        for (int k = 0; k <= deg; ++k) {
            ComplexKahanSum acc;
            for (int j = 0; j < kCauchyPoints; ++j)
                acc.add(samples[j] * std::polar(1.0, -2.0 * kPi * double(k) * j / kCauchyPoints));
            a[k] = acc.value().real() / kCauchyPoints;
        }
        // d[m] = series of the m-th derivative of Psi.
        std::array<std::vector<double>, 19> d;
        d[0] = a;
        for (int m = 1; m <= 18; ++m) {
            d[m].assign(deg + 1 - m, 0.0);
            for (std::size_t k = 0; k < d[m].size(); ++k) d[m][k] = double(k + 1) * d[m - 1][k + 1];
        }
        const double p2 = kPi * kPi, p4 = p2 * p2, p6 = p4 * p2, p8 = p4 * p4, p10 = p8 * p2, p12 = p8 * p4;
        RsCoefficients out;
        auto combine = [&](std::initializer_list<std::pair<int, double>> parts) {
            std::vector<double> series(kPsiDegree + 1, 0.0);
            for (auto [m, w] : parts)
                for (int k = 0; k <= kPsiDegree; ++k) series[k] += w * d[m][k];
            while (series.size() > 1 && std::abs(series.back()) < 1e-300) series.pop_back();
            return series;
        };
        out.c[0] = combine({{0, 1.0}});
        out.c[1] = combine({{3, -1.0 / (96.0 * p2)}});
        out.c[2] = combine({{2, 1.0 / (64.0 * p2)}, {6, 1.0 / (18432.0 * p4)}});
        out.c[3] = combine({{1, -1.0 / (64.0 * p2)}, {5, -1.0 / (3840.0 * p4)}, {9, -1.0 / (5308416.0 * p6)}});
        out.c[4] = combine({{0, 1.0 / (128.0 * p2)},
                            {4, 19.0 / (24576.0 * p4)},
                            {8, 11.0 / (5898240.0 * p6)},
                            {12, 1.0 / (2038431744.0 * p8)}});
        // C_5 and C_6 from the same saddle expansion. Expanding u^n against the
        // kernel gives e^{i pi l^2 / 2} Psi(p + l/2) as generating function, and
        // a phase e^{-i w^2 / (96 pi) - 7 i w^6 / (46080 pi^3)} makes every order
        // real; the recipe reproduces C_1..C_4 above term by term.
        out.c[5] = combine({{3, -5.0 / (3072.0 * p4)},
                            {7, -901.0 / (82575360.0 * p6)},
                            {11, -7.0 / (849346560.0 * p8)},
                            {15, -1.0 / (978447237120.0 * p10)}});
        out.c[6] = combine({{2, 5.0 / (2048.0 * p4)},
                            {6, 367.0 / (7864320.0 * p6)},
                            {10, 18889.0 / (237817036800.0 * p8)},
                            {14, 17.0 / (652298158080.0 * p10)},
                            {18, 1.0 / (563585608581120.0 * p12)}});
        return out;
    }();
    return tables;
}

double horner(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

void check_rs_args(double t, int terms) {
    if (!(t >= 10.0)) throw RangeError("Riemann-Siegel requires t >= 10; use Euler-Maclaurin below");
    if (terms < 0 || terms > kMaxRsTerms)
        throw RangeError("Riemann-Siegel correction terms must lie in [0, " + std::to_string(kMaxRsTerms) + "]");
}

// Remainder (-1)^{N-1} a^{-1/2} sum_k C_k(p) a^{-k}, a = sqrt(t / 2 pi).
double rs_remainder(long double a, std::uint64_t N, int terms) {
    const auto& rc = rs_coefficients();
    const double p = static_cast<double>(a - static_cast<long double>(N));
    const double x = p - 0.5;
    const double inv_a = static_cast<double>(1.0L / a);
    double sum = 0.0, w = 1.0;
    for (int k = 0; k <= terms; ++k, w *= inv_a) sum += horner(rc.c[k], x) * w;
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;
    return sign * sum / std::sqrt(static_cast<double>(a));
}

struct RsPoint {
    double Z;
    double theta_mod;  // theta(t) reduced to [0, 2 pi)
};

RsPoint rs_direct(long double t, int terms) {
    const long double a = std::sqrt(t / kTwoPiL);
    const auto N = static_cast<std::uint64_t>(a);
    const long double theta = riemann_siegel_theta_ld(t);
    double main = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const long double ln = std::log(static_cast<long double>(n));
        const double ph = static_cast<double>(reduce_2pi(theta - t * ln));
        main += std::cos(ph) / std::sqrt(static_cast<double>(n));
    }
    return {2.0 * main + rs_remainder(a, N, terms), static_cast<double>(reduce_2pi(theta))};
}

void check_grid(const GridRequest& req) {
    if (!(req.t0 >= 10.0 && req.t0 <= req.t1 && req.t1 <= 1e8))
        throw RangeError("grid requires 10 <= t0 <= t1 <= 1e8");
    if (!(req.step > 0.0 && req.step <= 0.1)) throw RangeError("grid step must lie in (0, 0.1]");
    check_rs_args(req.t0, req.correction_terms);
}

void store(ZetaGrid& g, std::size_t k, double Z, double theta_mod) {
    if (g.modulus_only)
        g.moduli[k] = std::abs(Z);
    else
        g.values[k] = std::polar(Z, -theta_mod);
}

ZetaGrid empty_grid(const GridRequest& req, std::size_t n) {
    ZetaGrid g;
    g.t0 = req.t0;
    g.step = req.step;
    g.modulus_only = req.modulus_only;
    if (req.modulus_only)
        g.moduli.resize(n);
    else
        g.values.resize(n);
    return g;
}

}  // namespace

std::complex<double> zeta_euler_maclaurin(std::complex<double> s, double precision_target) {
    if (s == std::complex<double>(1.0, 0.0)) throw PoleError("zeta has a pole at s = 1");
    if (std::abs(s.imag()) > kEulerMaclaurinMaxImag)
        throw RangeError("|Im s| > 1e5: use riemann_siegel_Z on the critical line");
    if (!(precision_target >= 1e-12)) throw RangeError("precision target must be >= 1e-12");
    const auto n0 = static_cast<std::uint64_t>(std::max(20.0, std::ceil(2.0 * std::abs(s.imag()))));
    return euler_maclaurin_core(s, precision_target, n0);
}

long double riemann_siegel_theta_ld(long double t) {
    const long double it = 1.0L / t, it2 = it * it;
    long double corr = it * (1.0L / 48 + it2 * (7.0L / 5760 + it2 * (31.0L / 80640 + it2 * (127.0L / 430080 + it2 * (511.0L / 1216512)))));
    return t / 2 * std::log(t / kTwoPiL) - t / 2 - kPiL / 8 + corr;
}

double riemann_siegel_theta(double t) { return static_cast<double>(riemann_siegel_theta_ld(t)); }

double riemann_siegel_coefficient(int k, double p) {
    if (k < 0 || k > kMaxRsTerms) throw RangeError("coefficient index out of range");
    return horner(rs_coefficients().c[k], p - 0.5);
}

double riemann_siegel_Z(double t, int correction_terms) {
    check_rs_args(t, correction_terms);
    return rs_direct(t, correction_terms).Z;
}

double riemann_siegel_error_bound(double t, int correction_terms) {
    // c_k = 4 x observed max |err| * t^{(2k+3)/4} over t in [10, 1e4]. At k = 6 the
    // series is already diverging near t = 10, hence the large constant; for t >= 20
    // six terms are still the most accurate choice.
    static constexpr std::array<double, kMaxRsTerms + 1> c = {0.5, 0.23, 0.06, 0.13, 0.06, 0.55, 54.0};
    check_rs_args(t, correction_terms);
    return c[correction_terms] * std::pow(t, -(2.0 * correction_terms + 3.0) / 4.0);
}

OneLinePoint zeta_one_line(double delta, double sigma_offset) {
    if (!(sigma_offset > 0.0 && sigma_offset <= 1.0)) throw RangeError("sigma_offset must lie in (0, 1]");
    if (!(std::abs(delta) <= 1e7)) throw RangeError("|delta| must be <= 1e7");
    const std::complex<double> s(1.0 + sigma_offset, delta);
    const auto n0 = static_cast<std::uint64_t>(std::max(20.0, std::ceil(2.0 * std::abs(delta))));
    return {delta, sigma_offset, euler_maclaurin_core(s, 1e-12, n0)};
}

std::size_t grid_sample_count(const GridRequest& req) {
    return static_cast<std::size_t>(std::floor((req.t1 - req.t0) / req.step + 1e-9)) + 1;
}

ZetaGrid sample_critical_line_reference(const GridRequest& req) {
    check_grid(req);
    const std::size_t n = grid_sample_count(req);
    ZetaGrid g = empty_grid(req, n);
    for (std::size_t k = 0; k < n; ++k) {
        const long double t = static_cast<long double>(req.t0) + static_cast<long double>(k) * req.step;
        const RsPoint r = rs_direct(t, req.correction_terms);
        store(g, k, r.Z, r.theta_mod);
    }
    return g;
}

ZetaGrid sample_critical_line(const GridRequest& req) {
    check_grid(req);
    const std::size_t n = grid_sample_count(req);
    ZetaGrid g = empty_grid(req, n);
    const std::size_t nchunks = chunk_count(n, kDefaultChunk);
    rs_coefficients();  // build the static tables outside the parallel region

#pragma omp parallel
    {
        std::vector<double> amp, wr, wi, rr, ri;
#pragma omp for schedule(dynamic)
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t k0 = c * kDefaultChunk;
            const std::size_t k1 = std::min(n, k0 + kDefaultChunk);
            const long double t_first = static_cast<long double>(req.t0) + static_cast<long double>(k0) * req.step;
            const long double t_last = static_cast<long double>(req.t0) + static_cast<long double>(k1 - 1) * req.step;
            const auto n_max = static_cast<std::size_t>(std::sqrt(t_last / kTwoPiL));

            amp.resize(n_max + 1);
            wr.resize(n_max + 1);
            wi.resize(n_max + 1);
            rr.resize(n_max + 1);
            ri.resize(n_max + 1);
            for (std::size_t m = 1; m <= n_max; ++m) {
                const long double ln = std::log(static_cast<long double>(m));
                amp[m] = 1.0 / std::sqrt(static_cast<double>(m));
                const double ph0 = static_cast<double>(reduce_2pi(t_first * ln));
                const double dph = static_cast<double>(reduce_2pi(static_cast<long double>(req.step) * ln));
                wr[m] = std::cos(ph0);
                wi[m] = -std::sin(ph0);
                rr[m] = std::cos(dph);
                ri[m] = -std::sin(dph);
            }

            for (std::size_t k = k0; k < k1; ++k) {
                const long double t = static_cast<long double>(req.t0) + static_cast<long double>(k) * req.step;
                const long double a = std::sqrt(t / kTwoPiL);
                const auto N = static_cast<std::size_t>(a);
                double sr = 0.0, si = 0.0;
                for (std::size_t m = 1; m <= N; ++m) {
                    sr += amp[m] * wr[m];
                    si += amp[m] * wi[m];
                }
                const double theta = static_cast<double>(reduce_2pi(riemann_siegel_theta_ld(t)));
                const double Z = 2.0 * (std::cos(theta) * sr - std::sin(theta) * si) +
                                 rs_remainder(a, N, req.correction_terms);
                store(g, k, Z, theta);
                for (std::size_t m = 1; m <= n_max; ++m) {
                    const double nr = wr[m] * rr[m] - wi[m] * ri[m];
                    const double ni = wr[m] * ri[m] + wi[m] * rr[m];
                    wr[m] = nr;
                    wi[m] = ni;
                }
            }
        }
    }
    return g;
}

}  // namespace zetacorr
