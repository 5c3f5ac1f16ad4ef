#include "zetacorr/dirichlet.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "zetacorr/errors.hpp"
#include "zetacorr/parallel.hpp"
#include "zetacorr/phase.hpp"
#include "zetacorr/summation.hpp"

namespace zetacorr {

namespace {

using Pair = std::pair<std::uint64_t, std::complex<double>>;

// Rows of the left operand per parallel work item in sparse_multiply.
constexpr std::size_t kMultiplyChunk = 256;
// Rows per work item in the O(N^2) mean-value kernel.
constexpr std::size_t kMeanValueChunk = 64;
constexpr std::size_t kMaxProductPairs = 200'000'000;

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
    return __builtin_mul_overflow(a, b, &out);
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// (p, r) pairs of n by trial division.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> f;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int r = 0;
        while (n % d == 0) n /= d, ++r;
        f.emplace_back(d, r);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

double weight_unchecked(std::uint64_t p, double logX) {
    return (logX - std::log(static_cast<double>(p))) / logX;
}

PrimeInterval hull(const PrimeInterval& a, const PrimeInterval& b) {
    if (a == PrimeInterval::empty()) return b;
    if (b == PrimeInterval::empty()) return a;
    return PrimeInterval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

int add_omega(int a, int b) {
    return (a > INT_MAX - b) ? INT_MAX : a + b;
}

// Products of row i of `a` against all of `b`, appended in column order.
void multiply_row(const CoeffTable& a, std::size_t i, const CoeffTable& b, std::uint64_t n_max,
                  std::vector<Pair>& out) {
    const std::uint64_t ai = a.index[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
        std::uint64_t n;
        if (mul_overflows(ai, b.index[j], n) || n > n_max) break;  // b ascending
        out.emplace_back(n, a.coeff[i] * b.coeff[j]);
    }
}

CoeffTable finish_product(std::vector<Pair> pairs, const CoeffTable& a, const CoeffTable& b) {
    if (pairs.size() > kMaxProductPairs)
        throw ResourceError("sparse product needs " + std::to_string(pairs.size()) + " partial terms");
    auto out = CoeffTable::from_pairs(std::move(pairs), hull(a.support, b.support),
                                      add_omega(a.max_omega, b.max_omega));
    if (out.size() > kMaxCoeffEntries)
        throw ResourceError("coefficient table exceeds " + std::to_string(kMaxCoeffEntries) + " entries");
    return out;
}

// Off-diagonal pair (i < j) contribution 2 Re[a_i conj(a_j) ((x^{2iT} - x^{iT}) / (i log x))],
// x = n_j / n_i.
double pair_term(std::complex<double> ai, std::complex<double> aj, long double log_ratio, long double T) {
    const std::complex<double> e2 = unit_phasor(2.0L * T * log_ratio);
    const std::complex<double> e1 = unit_phasor(T * log_ratio);
    const std::complex<double> I = (e2 - e1) / std::complex<double>(0.0, static_cast<double>(log_ratio));
    return 2.0 * (ai * std::conj(aj) * I).real();
}

void check_mv_table(const CoeffTable& table, double T) {
    if (table.size() > kMaxMeanValueTerms)
        throw ResourceError("exact mean value is limited to 1e4 terms, got " + std::to_string(table.size()));
    if (!(T > 0.0)) throw DomainError("mean value requires T > 0");
}

}  // namespace

std::complex<double> CoeffTable::at(std::uint64_t n) const {
    auto it = std::lower_bound(index.begin(), index.end(), n);
    if (it == index.end() || *it != n) return {0.0, 0.0};
    return coeff[static_cast<std::size_t>(it - index.begin())];
}

CoeffTable CoeffTable::from_pairs(std::vector<Pair> pairs, PrimeInterval support, int max_omega) {
    // Stable, so duplicates are summed in the order they were produced.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& x, const Pair& y) { return x.first < y.first; });
    CoeffTable t;
    t.support = support;
    t.max_omega = max_omega;
    for (std::size_t i = 0; i < pairs.size();) {
        const std::uint64_t n = pairs[i].first;
        ComplexKahanSum acc;
        for (; i < pairs.size() && pairs[i].first == n; ++i) acc.add(pairs[i].second);
        t.index.push_back(n);
        t.coeff.push_back(acc.value());
    }
    return t;
}

int degree_cap_for(double beta_star, double K_j) {
    const double v = std::floor(20.0 * beta_star * K_j);
    if (!(v >= 0.0)) throw DomainError("degree cap needs beta_star, K_j >= 0");
    return v >= INT_MAX ? INT_MAX : static_cast<int>(v);
}

double taper_weight(std::uint64_t p, double X) {
    if (!(X >= 2.0)) throw DomainError("taper weight needs X >= 2");
    if (p < 2 || static_cast<double>(p) > X) throw DomainError("taper weight needs 2 <= p <= X");
    if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
    return weight_unchecked(p, std::log(X));
}

double g_coeff(std::uint64_t n, double X) {
    if (n == 0) throw DomainError("g_X(n) needs n >= 1");
    if (!(X >= 2.0)) throw DomainError("g_X(n) needs X >= 2");
    const double logX = std::log(X);
    double g = 1.0;
    for (auto [p, r] : factorize(n)) {
        if (static_cast<double>(p) > X)
            throw DomainError("prime factor " + std::to_string(p) + " exceeds X");
        const double a = weight_unchecked(p, logX);
        g *= std::pow(a, r) / std::tgamma(r + 1.0);
    }
    return g;
}

int big_omega(std::uint64_t n) {
    int w = 0;
    for (auto [p, r] : factorize(n)) w += r;
    return w;
}

CoeffTable sparse_multiply_reference(const CoeffTable& a, const CoeffTable& b, std::uint64_t n_max) {
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < a.size(); ++i) multiply_row(a, i, b, n_max, pairs);
    return finish_product(std::move(pairs), a, b);
}

CoeffTable sparse_multiply(const CoeffTable& a, const CoeffTable& b, std::uint64_t n_max) {
    const std::size_t nchunks = chunk_count(a.size(), kMultiplyChunk);
    std::vector<std::vector<Pair>> parts(nchunks);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t i1 = std::min(a.size(), (c + 1) * kMultiplyChunk);
        for (std::size_t i = c * kMultiplyChunk; i < i1; ++i) multiply_row(a, i, b, n_max, parts[c]);
    }
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    if (total > kMaxProductPairs)
        throw ResourceError("sparse product needs " + std::to_string(total) + " partial terms");
    std::vector<Pair> pairs;
    pairs.reserve(total);
    for (auto& p : parts) pairs.insert(pairs.end(), p.begin(), p.end());
    return finish_product(std::move(pairs), a, b);
}

CoeffTable truncated_exp(const TruncSpec& spec, const PrimeTable& table) {
    if (!(spec.beta >= 0.0)) throw DomainError("truncated exponential needs beta >= 0");
    if (spec.degree_cap < 0) throw DomainError("degree cap must be >= 0");
    if (!(spec.interval.hi <= spec.X)) throw DomainError("truncated exponential needs interval.hi <= X");
    if (!(spec.X >= 2.0)) throw DomainError("truncated exponential needs X >= 2");
    if (spec.n_max < 1) throw DomainError("n_max must be >= 1");
    table.require_covers(spec.interval.hi);

    CoeffTable result;
    result.support = spec.interval;
    result.max_omega = spec.degree_cap;
    result.index = {1};
    result.coeff = {{1.0, 0.0}};
    if (spec.degree_cap == 0 || spec.beta == 0.0) return result;

    // beta P as a table over the primes of the interval.
    const double logX = std::log(spec.X);
    CoeffTable P;
    P.support = spec.interval;
    P.max_omega = 1;
    for (std::uint64_t p : table.in_range(spec.interval.lo, spec.interval.hi)) {
        if (p > spec.n_max) break;
        const double w = weight_unchecked(p, logX);
        if (w == 0.0) continue;  // p = X
        P.index.push_back(p);
        P.coeff.emplace_back(spec.beta * w, 0.0);
    }

    std::vector<Pair> all = {{1, {1.0, 0.0}}};
    CoeffTable term = result;
    for (int k = 1; k <= spec.degree_cap; ++k) {
        term = sparse_multiply(term, P, spec.n_max);
        if (term.empty()) break;
        for (std::size_t i = 0; i < term.size(); ++i) {
            term.coeff[i] /= static_cast<double>(k);
            all.emplace_back(term.index[i], term.coeff[i]);
        }
        if (all.size() > kMaxCoeffEntries)
            throw ResourceError("truncated exponential exceeds " + std::to_string(kMaxCoeffEntries) + " entries");
    }
    // Different k give disjoint Omega, so no index repeats.
    return CoeffTable::from_pairs(std::move(all), spec.interval, spec.degree_cap);
}

CoeffTable twist(const CoeffTable& table, double alpha) {
    CoeffTable out = table;
    if (alpha == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const long double ln = std::log(static_cast<long double>(out.index[i]));
        out.coeff[i] *= unit_phasor(-static_cast<long double>(alpha) * ln);
    }
    return out;
}

CoeffTable product_coeffs(std::span<const ShiftFactor> factors, const PrimeTable& table) {
    if (factors.empty()) throw DomainError("product_coeffs needs at least one factor");
    const auto& first = factors.front().spec;
    std::uint64_t n_max = first.n_max;
    for (const auto& f : factors) {
        if (!(f.spec.interval == first.interval) || f.spec.X != first.X)
            throw DomainError("product_coeffs factors must share interval and X");
        n_max = std::min(n_max, f.spec.n_max);
    }
    CoeffTable acc;
    bool started = false;
    for (const auto& f : factors) {
        TruncSpec s = f.spec;
        s.n_max = n_max;
        CoeffTable t = twist(truncated_exp(s, table), f.alpha);
        acc = started ? sparse_multiply(acc, t, n_max) : std::move(t);
        started = true;
    }
    acc.support = first.interval;
    return acc;
}

std::complex<double> evaluate(const CoeffTable& table, std::complex<double> s) {
    ComplexKahanSum acc;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const long double ln = std::log(static_cast<long double>(table.index[i]));
        const double mag = std::exp(-s.real() * static_cast<double>(ln));
        acc.add(table.coeff[i] * mag * unit_phasor(-static_cast<long double>(s.imag()) * ln));
    }
    return acc.value();
}

double exact_mv_integral_reference(const CoeffTable& table, double T) {
    check_mv_table(table, T);
    const std::size_t n = table.size();
    std::vector<long double> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(static_cast<long double>(table.index[i]));
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(T * std::norm(table.coeff[i]));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            acc.add(pair_term(table.coeff[i], table.coeff[j], logs[j] - logs[i], T));
    return acc.value();
}

double exact_mv_integral(const CoeffTable& table, double T) {
    check_mv_table(table, T);
    const std::size_t n = table.size();
    std::vector<long double> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(static_cast<long double>(table.index[i]));

    const std::size_t nchunks = chunk_count(n, kMeanValueChunk);
    std::vector<KahanSum> partial(nchunks);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        KahanSum acc;
        const std::size_t i1 = std::min(n, (c + 1) * kMeanValueChunk);
        for (std::size_t i = c * kMeanValueChunk; i < i1; ++i) {
            acc.add(T * std::norm(table.coeff[i]));
            for (std::size_t j = i + 1; j < n; ++j)
                acc.add(pair_term(table.coeff[i], table.coeff[j], logs[j] - logs[i], T));
        }
        partial[c] = acc;
    }
    KahanSum total;
    for (const auto& p : partial) total.merge(p);
    return total.value();
}

double mv_offdiagonal_bound(const CoeffTable& table) {
    const std::size_t n = table.size();
    std::vector<long double> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(static_cast<long double>(table.index[i]));
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            // both orders (m, n) and (n, m) of the ordered-pair sum
            acc.add(4.0 * std::abs(table.coeff[i]) * std::abs(table.coeff[j]) /
                    static_cast<double>(logs[j] - logs[i]));
    return acc.value();
}

double diagonal_sum(const CoeffTable& table, double sigma0) {
    KahanSum acc;
    for (std::size_t i = 0; i < table.size(); ++i)
        acc.add(std::norm(table.coeff[i]) * std::pow(static_cast<double>(table.index[i]), -2.0 * sigma0));
    return acc.value();
}

double euler_bound(const CoeffTable& b_table, double sigma0, double c2, const PrimeTable& table) {
    if (!(c2 >= 0.0)) throw DomainError("euler_bound needs c2 >= 0");
    if (b_table.support == PrimeInterval::empty()) return 1.0;
    table.require_covers(b_table.support.hi);
    KahanSum log_prod;
    for (std::uint64_t p : table.in_range(b_table.support.lo, b_table.support.hi)) {
        const double pd = static_cast<double>(p);
        log_prod.add(std::log1p(std::norm(b_table.at(p)) * std::pow(pd, -2.0 * sigma0) + c2 / (pd * pd)));
    }
    return std::exp(log_prod.value());
}

double euler_tail_constant(const CoeffTable& b_table, double sigma0, const PrimeTable& table) {
    if (b_table.empty() || b_table.support == PrimeInterval::empty()) return 0.0;
    table.require_covers(b_table.support.hi);
    const std::uint64_t largest = b_table.index.back();
    double c2 = 0.0;
    for (std::uint64_t p : table.in_range(b_table.support.lo, b_table.support.hi)) {
        const double pd = static_cast<double>(p);
        std::uint64_t q = p;
        KahanSum tail;
        for (int r = 2;; ++r) {
            if (mul_overflows(q, p, q) || q > largest) break;
            tail.add(std::norm(b_table.at(q)) * std::pow(pd, -2.0 * r * sigma0));
        }
        c2 = std::max(c2, pd * pd * tail.value());
    }
    return c2;
}

std::complex<double> truncated_exp_value(std::complex<double> z, int cap) {
    ComplexKahanSum acc;
    std::complex<double> term(1.0, 0.0);
    acc.add(term);
    for (int k = 1; k <= cap; ++k) {
        term *= z / static_cast<double>(k);
        acc.add(term);
        if (term == std::complex<double>(0.0, 0.0)) break;
    }
    return acc.value();
}

Lemma22Result lemma22_check(std::complex<double> P, double beta, double beta_star, double K_j) {
    Lemma22Result r;
    r.applicable = std::abs(P) <= 2.0 * K_j && beta >= 0.0 && beta <= beta_star && K_j > 0.0;
    if (!r.applicable) return r;
    r.degree_cap = degree_cap_for(beta_star, K_j);
    r.log_eps = -10.0 * K_j * beta_star;
    const long double log_eps = r.log_eps;

    const std::complex<double> z = beta * P;
    long double log_rho = -std::numeric_limits<long double>::infinity();
    long double arg_rho = 0.0L;
    if (z != std::complex<double>(0.0, 0.0)) {
        // tail = z^{c+1}/(c+1)! * S, S = sum_k z^k (c+1)!/(c+1+k)!; every ratio is
        // |z|/(c+1+k) <= 1/10 here, so S converges in a few dozen terms.
        const long double c1 = static_cast<long double>(r.degree_cap) + 1.0L;
        std::complex<long double> S(1.0L, 0.0L), term(1.0L, 0.0L);
        const std::complex<long double> zl(z.real(), z.imag());
        for (int k = 1; k < 100000; ++k) {
            term *= zl / (c1 + k);
            S += term;
            if (std::abs(term) < 1e-21L * std::abs(S)) break;
        }
        log_rho = c1 * std::log(static_cast<long double>(std::abs(z))) - std::lgamma(c1 + 1.0L) -
                  zl.real() + std::log(std::abs(S));
        arg_rho = reduce_2pi(c1 * std::arg(zl) - zl.imag() + std::arg(S));
    }
    r.log_rho = static_cast<double>(log_rho);

    // Corrected form: |1 - rho|^2 - 2 Re x + |rho| |x| >= 0 with x = rho / eps.
    // Literal form:  -2 Re x + |rho| |x| - 1 >= 0.
    const long double log_x = log_rho - log_eps;
    const long double cphi = std::cos(arg_rho);
    long double margin, literal, scale;
    if (log_x > 11000.0L) {
        // |x| beyond long double range; only the sign of the leading term matters.
        const long double rho_mag = std::exp(log_rho);
        margin = -2.0L * cphi + rho_mag;
        literal = margin;
        scale = 2.0L + rho_mag;
    } else {
        const long double xm = std::exp(log_x);
        const long double rm = std::exp(log_rho);
        const std::complex<long double> rho = std::polar(rm, arg_rho);
        const long double one_minus = std::norm(std::complex<long double>(1.0L, 0.0L) - rho);
        margin = one_minus - 2.0L * xm * cphi + rm * xm;
        literal = -2.0L * xm * cphi + rm * xm - 1.0L;
        scale = 1.0L + xm * (2.0L + rm);
    }
    const long double tol = 1e-12L * scale;
    r.margin = static_cast<double>(margin);
    r.holds = margin >= 0.0L;
    r.literal_holds = literal >= 0.0L;
    r.conclusive = std::abs(margin) > tol;
    return r;
}

SplittingResult splitting_check(std::span<const CoeffTable> tables, double T) {
    if (tables.empty()) throw DomainError("splitting_check needs at least one table");
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = i + 1; j < tables.size(); ++j)
            if (!tables[i].support.disjoint(tables[j].support))
                throw DomainError("splitting_check needs pairwise disjoint supports");

    std::uint64_t n_max = 1;
    for (const auto& t : tables) {
        if (t.empty()) throw DomainError("splitting_check got an empty table");
        if (mul_overflows(n_max, t.index.back(), n_max)) n_max = std::numeric_limits<std::uint64_t>::max();
    }
    CoeffTable prod = tables.front();
    for (std::size_t i = 1; i < tables.size(); ++i) prod = sparse_multiply(prod, tables[i], n_max);

    SplittingResult out;
    out.product_length = prod.empty() ? 0 : prod.index.back();
    const double limit = std::min(1e4, std::sqrt(T));
    if (static_cast<double>(out.product_length) > limit)
        throw DomainError("product length " + std::to_string(out.product_length) + " exceeds min(1e4, sqrt T)");
    out.lhs = exact_mv_integral(prod, T);
    double rhs = T;
    for (const auto& t : tables) rhs *= exact_mv_integral(t, T) / T;
    out.rhs = rhs;
    return out;
}

void write_coeff_csv(const CoeffTable& table, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw CacheError("cannot open " + path.string() + " for writing");
    os << "n,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < table.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                      static_cast<unsigned long long>(table.index[i]), table.coeff[i].real(),
                      table.coeff[i].imag());
        os << buf;
    }
    if (!os) throw CacheError("write failed for " + path.string());
}

}  // namespace zetacorr
