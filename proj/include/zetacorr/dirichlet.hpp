#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "zetacorr/primes.hpp"

namespace zetacorr {

inline constexpr std::size_t kMaxCoeffEntries = 4'000'000;
inline constexpr std::size_t kMaxMeanValueTerms = 10'000;
inline constexpr std::uint64_t kDefaultCoeffNmax = 1'000'000;

// Sparse Dirichlet polynomial sum_n c_n n^{-s}, entries ascending in n.
struct CoeffTable {
    std::vector<std::uint64_t> index;
    std::vector<std::complex<double>> coeff;
    PrimeInterval support = PrimeInterval::empty();  // every prime factor of every n lies here
    int max_omega = 0;

    std::size_t size() const { return index.size(); }
    bool empty() const { return index.empty(); }
    std::complex<double> at(std::uint64_t n) const;  // 0 when n is absent

    // Builds a table from unsorted (n, c) pairs, summing duplicates.
    static CoeffTable from_pairs(std::vector<std::pair<std::uint64_t, std::complex<double>>> pairs,
                                 PrimeInterval support, int max_omega);
};

// N_{I,X}(s; beta) = sum_{k <= degree_cap} beta^k P_{I,X}(s)^k / k!. Expanding the
// powers produces every n with Omega(n) <= degree_cap made of primes in I; n_max
// bounds the stored support (the full expansion is astronomically long once the
// cap exceeds a handful).
struct TruncSpec {
    PrimeInterval interval;
    double X = 0.0;
    double beta = 0.0;
    int degree_cap = 0;
    std::uint64_t n_max = kDefaultCoeffNmax;
};

// floor(20 beta_star K_j), the degree used for the truncated exponentials.
int degree_cap_for(double beta_star, double K_j);

// a_X(p) = log(X/p) / log X for a prime 2 <= p <= X.
double taper_weight(std::uint64_t p, double X);

// g_X(n) = prod_{p^r || n} a_X(p)^r / r!, by trial division.
double g_coeff(std::uint64_t n, double X);

// Omega(n) by trial division.
int big_omega(std::uint64_t n);

// Coefficients of N_{I,X}(s; beta) obtained by repeated sparse multiplication
// with the prime polynomial (term_k = term_{k-1} * beta P / k).
CoeffTable truncated_exp(const TruncSpec& spec, const PrimeTable& table);

// One factor N_{I,X}(s + i alpha; beta), i.e. coefficients twisted by n^{-i alpha}.
struct ShiftFactor {
    TruncSpec spec;
    double alpha = 0.0;
};

// b(n) of the product prod_k N_{I,X}(s + i alpha_k; beta_k). All factors must
// share interval and X.
CoeffTable product_coeffs(std::span<const ShiftFactor> factors, const PrimeTable& table);

// Sparse Dirichlet convolution restricted to n <= n_max. The parallel version
// splits the left operand into fixed chunks and merges contributions in
// (left index, right index) order, so it matches the serial one bit for bit.
CoeffTable sparse_multiply(const CoeffTable& a, const CoeffTable& b, std::uint64_t n_max);
CoeffTable sparse_multiply_reference(const CoeffTable& a, const CoeffTable& b, std::uint64_t n_max);

// Multiplies every c_n by n^{-i alpha}.
CoeffTable twist(const CoeffTable& table, double alpha);

// sum c_n n^{-s}, compensated, ascending n.
std::complex<double> evaluate(const CoeffTable& table, std::complex<double> s);

// int_T^{2T} |sum a_n n^{-it}|^2 dt in closed form. At most 1e4 entries.
double exact_mv_integral(const CoeffTable& table, double T);
double exact_mv_integral_reference(const CoeffTable& table, double T);

// The triangle-inequality envelope sum_{m != n} 2 |a_m a_n| / |log(m/n)| on the
// off-diagonal part of exact_mv_integral.
double mv_offdiagonal_bound(const CoeffTable& table);

// sum |b(n)|^2 n^{-2 sigma0}.
double diagonal_sum(const CoeffTable& table, double sigma0);

// prod_{p in support} (1 + |b(p)|^2 p^{-2 sigma0} + c2 / p^2).
double euler_bound(const CoeffTable& b_table, double sigma0, double c2, const PrimeTable& table);

// Smallest c2 making every local factor dominate: max_p p^2 sum_{r>=2} |b(p^r)|^2 p^{-2 r sigma0}
// over the prime powers present in the table.
double euler_tail_constant(const CoeffTable& b_table, double sigma0, const PrimeTable& table);

// Truncated exponential of a single complex number, sum_{k<=cap} z^k / k!.
std::complex<double> truncated_exp_value(std::complex<double> z, int cap);

// Lemma 2.2 at one point. With z = beta P and rho = (e^z - N) / e^z the tail of
// the truncated series relative to e^z, the inequality
//     exp(2 beta Re P) <= (1 + e^{-10 K beta_star}) |N|^2
// is (1 + eps)|1 - rho|^2 >= 1. Both rho and eps underflow any floating format
// for realistic K, so the comparison is made after dividing by eps, with rho / eps
// taken from logarithms. The printed form with (1 + eps)^{-1} is evaluated the
// same way in `literal_holds`.
struct Lemma22Result {
    bool applicable = false;   // |P| <= 2 K_j and beta <= beta_star
    bool holds = false;        // (1 + eps) factor
    bool literal_holds = false;  // (1 + eps)^{-1} factor
    bool conclusive = false;   // margin clears the rounding tolerance
    double log_eps = 0.0;      // -10 K beta_star
    double log_rho = 0.0;      // log |rho|, -inf when the tail is empty
    double margin = 0.0;       // scaled slack of the (1 + eps) form
    int degree_cap = 0;
};
Lemma22Result lemma22_check(std::complex<double> P, double beta, double beta_star, double K_j);

// Lemma 2.4: lhs = exact mean value of the product, rhs = T prod (mv_k / T).
struct SplittingResult {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t product_length = 0;  // largest n in the product
};
SplittingResult splitting_check(std::span<const CoeffTable> tables, double T);

void write_coeff_csv(const CoeffTable& table, const std::filesystem::path& path);

}  // namespace zetacorr
