// Acceptance run: one PASS/FAIL line per criterion, observed values alongside.
// Exit status is the number of failed criteria (0 = all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "zetacorr/decomposition.hpp"
#include "zetacorr/dirichlet.hpp"
#include "zetacorr/moments.hpp"
#include "zetacorr/parallel.hpp"
#include "zetacorr/primes.hpp"
#include "zetacorr/zeta.hpp"

using namespace zetacorr;
using cd = std::complex<double>;
using json = nlohmann::json;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(int id, const std::string& detail) {
    std::printf("INFO criterion %d: %s\n", id, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cd rand_cd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    return {re, u(rng)};
}

// ---- 1 ------------------------------------------------------------------------

json run_c1() {
    const double X = 1e5, s = 1.0 / std::log(X);
    const auto table = sieve_primes(100000);
    std::vector<double> deltas;
    for (int i = 0; i <= 1000; ++i) deltas.push_back(0.05 * i);
    const auto sums = prime_sum_cos_profile(deltas, X, table);
    double worst = 0.0, at = 0.0;
    json devs = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double lz = std::log(std::abs(zeta_one_line(deltas[i], s).value));
        const double d = std::abs(sums[i] - lz);
        devs.push_back(sums[i] - lz);
        if (d > worst) {
            worst = d;
            at = deltas[i];
        }
    }
    return {{"max_deviation", worst}, {"delta_at_max", at}, {"deviations", devs}};
}

void criterion1() {
    set_threads(1);
    const auto t0 = std::chrono::steady_clock::now();
    const json r = run_c1();
    const double secs = seconds_since(t0);
    set_threads(0);
    // spot check of the one-line evaluator against Euler-Maclaurin
    const double s = 1.0 / std::log(1e5);
    double ev = 0.0;
    for (double d : {0.0, 0.05, 13.7, 50.0}) ev = std::max(ev, std::abs(zeta_one_line(d, s).value - zeta_euler_maclaurin({1.0 + s, d})));
    const double worst = r["max_deviation"];
    verdict(1, worst <= 3.0 && secs < 120.0 && ev < 1e-9,
            fmt("max |sum cos(d log p)/p - log|zeta(1+1/log X+id)|| = %.6f", worst) +
                fmt(" at d = %.2f", r["delta_at_max"].get<double>()) + fmt(" (bound 3.0); %.2f s single-threaded", secs) +
                fmt("; one-line vs Euler-Maclaurin %.1e", ev));
}

// ---- 2 ------------------------------------------------------------------------

void criterion2() {
    std::mt19937_64 rng(2002);
    const double T = 1e6;
    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t size = 1 + rng() % 1000;
        std::map<std::uint64_t, cd> m;
        while (m.size() < size) m.emplace(1 + rng() % 10000, rand_cd(rng));
        std::vector<std::pair<std::uint64_t, cd>> pairs(m.begin(), m.end());
        const auto table = CoeffTable::from_pairs(pairs, PrimeInterval(1.0, 1e4), 13);
        // both sides of the inequality computed here
        long double diag = 0.0L, bound = 0.0L;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            diag += std::norm(pairs[i].second);
            for (std::size_t j = 0; j < pairs.size(); ++j)
                if (i != j)
                    bound += 2.0L * std::abs(pairs[i].second) * std::abs(pairs[j].second) /
                             std::abs(std::log(static_cast<long double>(pairs[i].first) / pairs[j].first));
        }
        diag *= T;
        const double dev = std::abs(exact_mv_integral(table, T) - static_cast<double>(diag));
        if (dev > static_cast<double>(bound) + 1e-12 * static_cast<double>(diag)) ++violations;
        worst = std::max(worst, dev / static_cast<double>(bound));
    }
    verdict(2, violations == 0,
            std::to_string(violations) + " violations in 100 trials" + fmt("; max deviation / bound = %.4f", worst));
}

// ---- 3 ------------------------------------------------------------------------

void criterion3() {
    std::mt19937_64 rng(3003);
    const double T = 1e6;
    const auto primes = sieve_primes(200);
    const auto big = primes.in_range(50.0, 200.0);
    int violations = 0;
    double worst = 0.0;
    std::uint64_t longest = 0;
    for (int trial = 0; trial < 50; ++trial) {
        // B: 1 and a random set of primes in (50, 200]; A: odd n <= 1000 / max B (all factors in (2, 50])
        std::map<std::uint64_t, cd> a, b;
        b[1] = rand_cd(rng);
        const std::uint64_t max_b = big[rng() % big.size()];
        for (auto q : big)
            if (q == max_b || (q < max_b && rng() % 2)) b[q] = rand_cd(rng);
        const std::uint64_t max_a = 1000 / max_b;
        a[1] = rand_cd(rng);
        for (std::uint64_t n = 3; n <= max_a; n += 2)
            if (rng() % 2) a[n] = rand_cd(rng);
        // the product by direct convolution
        std::map<std::uint64_t, cd> ab;
        for (auto [m, x] : a)
            for (auto [n, y] : b) ab[m * n] += x * y;
        const auto ta = CoeffTable::from_pairs({a.begin(), a.end()}, PrimeInterval(2.0, 50.0), 3);
        const auto tb = CoeffTable::from_pairs({b.begin(), b.end()}, PrimeInterval(50.0, 200.0), 1);
        const auto tab = CoeffTable::from_pairs({ab.begin(), ab.end()}, PrimeInterval(2.0, 200.0), 4);
        const double lhs = exact_mv_integral(tab, T);
        const double rhs = T * (exact_mv_integral(ta, T) / T) * (exact_mv_integral(tb, T) / T);
        const std::uint64_t N = ab.rbegin()->first;
        longest = std::max(longest, N);
        const double rel = std::abs(lhs - rhs) / rhs, tol = 10.0 * static_cast<double>(N) / T;
        if (rel > tol) ++violations;
        worst = std::max(worst, rel / tol);
        // the library's splitting check agrees with the direct computation
        const auto s = splitting_check(std::vector<CoeffTable>{ta, tb}, T);
        if (std::abs(s.lhs - lhs) > 1e-9 * lhs || std::abs(s.rhs - rhs) > 1e-9 * rhs) ++violations;
    }
    verdict(3, violations == 0,
            std::to_string(violations) + " violations in 50 trials" + fmt("; max (rel gap)/(10N/T) = %.4f", worst) +
                "; longest product N = " + std::to_string(longest));
}

// ---- 4 ------------------------------------------------------------------------

// log |sum_{k > cap} z^k/k!| - Re z, by direct long double summation (small |z| only)
double log_rho_oracle(cd z, int cap) {
    long double lt = (cap + 1) * std::log(std::abs(z)) - std::lgamma(static_cast<long double>(cap) + 2.0L);
    std::complex<long double> term = std::polar(1.0L, static_cast<long double>((cap + 1) * std::arg(z)));
    std::complex<long double> sum = term;
    const std::complex<long double> zl(z.real(), z.imag());
    for (int k = cap + 2; k < cap + 400; ++k) {
        term *= zl / static_cast<long double>(k);
        sum += term;
    }
    return static_cast<double>(lt + std::log(std::abs(sum)) - z.real());
}

void criterion4() {
    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double Ks[] = {5.0, 10.0, 19.18};
    int violations = 0, literal = 0, inconclusive = 0, oracle_checked = 0;
    double oracle_dev = 0.0, min_margin = 1e300;
    for (int trial = 0; trial < 10000; ++trial) {
        const double K = Ks[rng() % 3];
        const double bstar = 1.0 + 2.0 * u(rng);
        const double beta = bstar * u(rng);
        const cd P = std::polar(2.0 * K * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        const auto r = lemma22_check(P, beta, bstar, K);
        if (!r.applicable || !r.holds) ++violations;
        if (!r.literal_holds) ++literal;
        if (!r.conclusive) ++inconclusive;
        min_margin = std::min(min_margin, r.margin);
        if (std::abs(beta * P) > 1e-3 && std::isfinite(r.log_rho) && r.degree_cap < 200) {
            oracle_dev = std::max(oracle_dev, std::abs(r.log_rho - log_rho_oracle(beta * P, r.degree_cap)) /
                                                  std::max(1.0, std::abs(r.log_rho)));
            ++oracle_checked;
        }
    }
    // the printed statement carries (1 + eps)^{-1}; it is false at P = 0 (N = 1), so the
    // verdict follows it literally and the (1 + eps) form the proof yields is reported beside it
    verdict(4, literal == 0,
            std::to_string(literal) + " of 10^4 trials violate exp(2 beta Re P) <= (1 + e^{-10 K beta*})^{-1} |N|^2 as printed");
    info(4, std::to_string(violations) + " violations of the (1 + e^{-10 K beta*}) form in 10^4 trials" +
                fmt("; min scaled margin %.3g", min_margin) + "; " + std::to_string(inconclusive) +
                " inconclusive; log|rho| vs series oracle on " + std::to_string(oracle_checked) +
                fmt(" trials, max rel dev %.1e", oracle_dev));
}

// ---- 5 ------------------------------------------------------------------------

void criterion5() {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto table = sieve_primes(1000);
    const PrimeInterval I(2.0, 13.0);
    const double X = 100.0;
    int bound_violations = 0, formula_violations = 0, value_mismatch = 0;
    double max_dev = 0.0, max_ratio = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 3);
        std::vector<double> alpha(m), beta(m);
        for (int k = 0; k < m; ++k) {
            alpha[k] = -100.0 + 200.0 * u(rng);
            beta[k] = 3.0 * u(rng);
        }
        double bstar = 0.0;
        for (double b : beta) bstar += std::max(1.0, b);
        std::vector<ShiftFactor> f;
        for (int k = 0; k < m; ++k) f.push_back({TruncSpec{I, X, beta[k], 20, 4826809}, alpha[k]});
        const auto b = product_coeffs(f, table);
        for (std::uint64_t p : {3, 5, 7, 11, 13}) {
            const double lp = std::log(static_cast<double>(p)), a = std::log(X / p) / std::log(X);
            cd s = 0.0;
            for (int k = 0; k < m; ++k) s += beta[k] * std::polar(1.0, -alpha[k] * lp);
            const double dev = std::abs(b.at(p) - a * s);
            max_dev = std::max(max_dev, dev);
            if (dev > 1e-12) ++formula_violations;
            std::uint64_t pr = p;
            double fact = 1.0;
            cd power = 1.0;
            for (int r = 1; r <= 6; ++r, pr *= p) {
                fact *= r;
                power *= a * s;
                const double got = std::abs(b.at(pr));
                const double bound = std::pow(bstar * m, r) / fact;
                if (got > bound * (1.0 + 1e-12)) ++bound_violations;
                max_ratio = std::max(max_ratio, got / bound);
                // b(p^r) = (a_X(p) sum beta_k p^{-i alpha_k})^r / r!
                if (std::abs(b.at(pr) - power / fact) > 1e-10 * std::max(1.0, std::abs(power / fact))) ++value_mismatch;
            }
        }
    }
    verdict(5, formula_violations == 0 && bound_violations == 0 && value_mismatch == 0,
            fmt("max |b(p) - a_X(p) sum beta_k p^{-i alpha_k}| = %.2e", max_dev) + "; " +
                std::to_string(bound_violations) + " violations of |b(p^r)| <= beta*^r m^r / r!" +
                fmt(" (max ratio %.3f)", max_ratio) + "; " + std::to_string(value_mismatch) +
                " mismatches against the closed form");
}

// ---- 6 ------------------------------------------------------------------------

void criterion6() {
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto table = sieve_primes(1000);
    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 2);
        const double P = 10.0 + 30.0 * u(rng), X = 2.0 * P;
        std::vector<ShiftFactor> f;
        for (int k = 0; k < m; ++k) f.push_back({TruncSpec{PrimeInterval(2.0, P), X, 2.0 * u(rng), 12, 100000}, -20.0 + 40.0 * u(rng)});
        const auto b = product_coeffs(f, table);
        const double s0 = 0.5 + 1.0 / std::log(X);
        // c2 by brute force over the prime powers in the table
        double c2 = 0.0;
        for (auto p : table.in_range(2.0, P)) {
            double tail = 0.0;
            const double pd = static_cast<double>(p);
            std::uint64_t pr = p * p;
            for (int r = 2; pr <= b.index.back(); ++r, pr *= p) tail += std::norm(b.at(pr)) * std::pow(pd, -2.0 * r * s0);
            c2 = std::max(c2, pd * pd * tail);
        }
        double lhs = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) lhs += std::norm(b.coeff[i]) * std::pow(double(b.index[i]), -2.0 * s0);
        const double rhs = euler_bound(b, s0, c2, table);
        if (lhs > rhs * (1.0 + 1e-12)) ++violations;
        if (std::abs(diagonal_sum(b, s0) - lhs) > 1e-12 * lhs) ++violations;
        worst = std::max(worst, lhs / rhs);
    }
    verdict(6, violations == 0,
            std::to_string(violations) + " violations of diagonal_sum <= euler_bound in 50 instances" +
                fmt("; max lhs/rhs = %.6f", worst));
}

// ---- 7 ------------------------------------------------------------------------

void criterion7() {
    double worst = 0.0, at = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = 20.0 + (1e4 - 20.0) * i / 999.0;
        const double d = std::abs(std::abs(riemann_siegel_Z(t, kMaxRsTerms)) - std::abs(zeta_euler_maclaurin({0.5, t})));
        if (d > worst) {
            worst = d;
            at = t;
        }
    }
    const double z2 = std::abs(zeta_euler_maclaurin({2.0, 0.0}) - std::numbers::pi * std::numbers::pi / 6.0);
    const double z0 = std::abs(zeta_euler_maclaurin({0.0, 0.0}) + 0.5);
    verdict(7, worst <= 1e-6 && z2 <= 1e-10 && z0 <= 1e-10,
            fmt("max ||Z_RS| - |zeta_EM|| on 1000 points of [20, 1e4] = %.2e", worst) + fmt(" at t = %.1f", at) +
                " (" + std::to_string(kMaxRsTerms) + " correction terms)" + fmt("; |zeta(2) - pi^2/6| = %.1e", z2) +
                fmt(", |zeta(0) + 1/2| = %.1e", z0));
}

// ---- 8 ------------------------------------------------------------------------

void criterion8() {
    const double T = 1e5;
    const auto table = sieve_primes(200000);
    const Lemma21Surrogate rhs(T, T, table);
    const auto a = lemma21_audit(rhs, 1e5, 2e5, 10000);
    const auto b = lemma21_audit(rhs, 1e5, 2e5, 20000);
    const double drift = std::abs(b.C0 - a.C0) / std::abs(a.C0);
    verdict(8, a.C0 <= 10.0 && drift <= 0.2,
            fmt("C0 = %.4f", a.C0) + fmt(" at t = %.2f (10^4 points)", a.t_at_max) + fmt("; %.4f on 2*10^4 points", b.C0) +
                fmt(", relative change %.3f", drift) + " (tolerance 0.2)");
    const auto c = lemma21_audit(rhs, 1e5, 2e5, 40000);
    info(8, fmt("absolute change under doubling %.4f", std::abs(b.C0 - a.C0)) + fmt("; C0 = %.4f on 4*10^4 points", c.C0) +
                "; C0 sits near 0, so the relative test divides by a near-zero quantity");
}

// ---- 9 ------------------------------------------------------------------------

void criterion9() {
    const double T = 1e4;
    const ShiftSpec envelope{{0.0, 0.35}, {1.0, 1.0}, T};
    const auto g = sample_critical_line(moment_grid_request(envelope, 0.02, 2));
    const double m0 = shifted_moment(ShiftSpec{{0.0, 0.35}, {0.0, 0.0}, T}, g);
    const double n0 = std::abs(m0 - T) / T;
    double worst = 0.0;
    for (auto [a, b1, b2] : {std::tuple{0.0, 0.5, 0.5}, std::tuple{0.35, 1.0, 0.25}, std::tuple{0.0, 0.3, 1.7}}) {
        const double two = shifted_moment(ShiftSpec{{a, a}, {b1, b2}, T}, g);
        const double one = shifted_moment(ShiftSpec{{a}, {b1 + b2}, T}, g);
        worst = std::max(worst, std::abs(two - one) / one);
    }
    verdict(9, n0 <= 1e-12 && worst <= 1e-12,
            fmt("beta = 0: |M - T| / T = %.1e", n0) + fmt("; duplicate-shift collapse max rel dev %.1e", worst));
}

// ---- 10 -----------------------------------------------------------------------

json run_c10() {
    const double T = 1e5;
    const std::vector<double> deltas{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    const ShiftSpec envelope{{0.0, 10.0}, {1.0, 1.0}, T};
    const auto g = sample_critical_line(moment_grid_request(envelope, 0.01, 2));
    const auto rows = correlation_curve(T, 1.0, deltas, g);
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"delta", r.delta}, {"moment", r.moment}, {"prediction", r.prediction}, {"ratio", r.ratio},
                       {"nsw_F", r.nsw}, {"step_halving_delta", r.step_halving_delta}});
    // the 1/log T row of the correlation statement
    const auto near = correlation_curve(T, 1.0, std::vector<double>{0.0}, g);
    return {{"rows", out}, {"grid_samples", g.size()}, {"M0", near[0].moment}};
}

json c10_payload;

void criterion10() {
    set_threads(8);
    const auto t0 = std::chrono::steady_clock::now();
    c10_payload = run_c10();
    const double secs = seconds_since(t0);
    set_threads(0);
    const auto& rows = c10_payload["rows"];
    const double m0 = rows[0]["moment"], m10 = rows[6]["moment"];
    double rmin = 1e300, rmax = 0.0, shd = 0.0;
    std::string table;
    for (const auto& r : rows) {
        rmin = std::min(rmin, r["ratio"].get<double>());
        rmax = std::max(rmax, r["ratio"].get<double>());
        shd = std::max(shd, r["step_halving_delta"].get<double>());
        table += fmt(" [%g: ", r["delta"].get<double>()) + fmt("M=%.6e ", r["moment"].get<double>()) +
                 fmt("ratio=%.4f]", r["ratio"].get<double>());
    }
    verdict(10, m0 / m10 >= 2.0 && rmin >= 1e-2 && rmax <= 1e2 && shd <= 1e-3 && secs < 1800.0,
            fmt("M(0)/M(10) = %.3f", m0 / m10) + fmt("; ratio in [%.4f, ", rmin) + fmt("%.4f]", rmax) +
                fmt("; max step-halving delta %.1e", shd) + fmt("; %.1f s", secs));
    info(10, "rows" + table);
}

// ---- 11 -----------------------------------------------------------------------

json run_c11() {
    const double T = 1e5;
    const std::vector<double> beta{1.0, 1.0};
    const auto scheme = build_scheme(T, beta, 0.5, 8);
    const auto table = sieve_primes(10000);
    const Classifier cls(scheme, table);
    const auto classes = cls.classify_grid(T, 1.0, 100000);
    std::vector<std::size_t> sq(scheme.max_square_level + 1, 0), bad(scheme.L, 0);
    std::size_t good = 0, exhaustive_failures = 0;
    for (const auto& c : classes) {
        if ((c.good ? 1 : 0) + (c.bad_index ? 1 : 0) != 1) ++exhaustive_failures;
        if (c.good) ++good;
        if (c.bad_index) ++bad[*c.bad_index - 1];
        ++sq[c.square_index];
    }
    json sqf = json::array(), bf = json::array();
    for (auto n : sq) sqf.push_back(static_cast<double>(n) / classes.size());
    for (auto n : bad) bf.push_back(static_cast<double>(n) / classes.size());
    return {{"L", scheme.L}, {"points", classes.size()}, {"good_fraction", double(good) / classes.size()},
            {"bad_fractions", bf}, {"square_fractions", sqf}, {"exhaustive_failures", exhaustive_failures}};
}

json c11_payload;

void criterion11() {
    set_threads(8);
    c11_payload = run_c11();
    set_threads(0);
    const auto& f = c11_payload["square_fractions"];
    bool monotone = true, small = true;
    std::string list;
    for (std::size_t l = 0; l < f.size(); ++l) {
        list += fmt(" %.2e", f[l].get<double>());
        if (l >= 4 && f[l].get<double>() > f[l - 1].get<double>()) monotone = false;
        if (l >= 5 && f[l].get<double>() > 1e-2) small = false;
    }
    const bool exhaustive = c11_payload["exhaustive_failures"] == 0;
    verdict(11, monotone && small && exhaustive,
            "C_l fractions (l = 0.." + std::to_string(f.size() - 1) + "):" + list + "; non-increasing for l >= 3: " +
                (monotone ? "yes" : "no") + "; <= 1e-2 for l >= 5: " + (small ? "yes" : "no") +
                "; partition exhaustive at all " + std::to_string(c11_payload["points"].get<std::size_t>()) +
                " points: " + (exhaustive ? "yes" : "no"));
    info(11, "scheme L = " + std::to_string(c11_payload["L"].get<int>()) +
                 fmt(", good fraction %.6f", c11_payload["good_fraction"].get<double>()) +
                 "; |Q_l| <= sum_{e^l<p<=e^{l+1}} 1/(2p) < J_l for every l, so C_l (l >= 1) is empty at this height");
}

// ---- 12 -----------------------------------------------------------------------

void criterion12() {
    // criterion 10 and 11 already ran at 8 workers; rerun everything at 1, and 1 at 8
    set_threads(8);
    const std::string c1_8 = run_c1().dump();
    set_threads(1);
    const std::string c1_1 = run_c1().dump();
    const std::string c10_1 = run_c10().dump();
    const std::string c11_1 = run_c11().dump();
    set_threads(0);
    const bool same1 = c1_1 == c1_8, same10 = c10_1 == c10_payload.dump(), same11 = c11_1 == c11_payload.dump();
    verdict(12, same1 && same10 && same11,
            std::string("payloads at --threads 1 vs 8: criterion 1 ") + (same1 ? "identical" : "DIFFER") +
                ", criterion 10 " + (same10 ? "identical" : "DIFFER") + ", criterion 11 " +
                (same11 ? "identical" : "DIFFER") + " (" + std::to_string(c1_1.size() + c10_1.size() + c11_1.size()) +
                " bytes compared)");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    std::printf("%d of 12 criteria failed; total %.1f s\n", failures, seconds_since(t0));
    return failures;
}
