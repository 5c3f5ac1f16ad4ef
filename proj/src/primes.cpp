#include "zetacorr/primes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "zetacorr/binary_io.hpp"
#include "zetacorr/errors.hpp"
#include "zetacorr/parallel.hpp"
#include "zetacorr/summation.hpp"

namespace zetacorr {

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes,
                       std::uint64_t segment_size)
    : limit_(limit), segment_size_(segment_size), primes_(std::move(primes)) {}

std::span<const std::uint64_t> PrimeTable::in_range(double lo, double hi) const {
    // p > lo and p <= hi decided on doubles; every prime <= 1e9 is exact in double.
    auto first = std::upper_bound(primes_.begin(), primes_.end(), lo,
                                  [](double v, std::uint64_t p) { return v < static_cast<double>(p); });
    auto last = std::upper_bound(primes_.begin(), primes_.end(), hi,
                                 [](double v, std::uint64_t p) { return v < static_cast<double>(p); });
    if (last < first) last = first;
    return {first, last};
}

void PrimeTable::require_covers(double x) const {
    if (!(std::floor(x) <= static_cast<double>(limit_)))
        throw InsufficientSieveError("prime table limit " + std::to_string(limit_) +
                                     " does not cover " + std::to_string(x));
}

PrimeInterval::PrimeInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw DomainError("prime interval requires lo < hi");
}

PrimeInterval PrimeInterval::empty() {
    // (0.25, 0.75] holds no integer.
    return PrimeInterval(0.25, 0.75);
}

namespace {

void check_limit(std::uint64_t limit) {
    if (limit < 2 || limit > kMaxSieveLimit)
        throw ConfigError("sieve limit must lie in [2, 1e9], got " + std::to_string(limit));
}

std::vector<std::uint64_t> small_primes(std::uint64_t n) {
    std::vector<char> composite(n + 1, 0);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = 1;
    }
    return out;
}

}  // namespace

PrimeTable sieve_primes_reference(std::uint64_t limit) {
    check_limit(limit);
    return PrimeTable(limit, small_primes(limit), limit + 1);
}

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t segment_size) {
    check_limit(limit);
    if (segment_size < 64) throw ConfigError("segment size must be at least 64");

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const std::vector<std::uint64_t> base = small_primes(root);

    const std::uint64_t span = limit - 1;  // integers 2..limit
    const std::size_t nseg = chunk_count(span, segment_size);
    std::vector<std::vector<std::uint64_t>> found(nseg);

#pragma omp parallel
    {
        std::vector<char> composite(segment_size);
#pragma omp for schedule(dynamic)
        for (std::size_t s = 0; s < nseg; ++s) {
            const std::uint64_t lo = 2 + s * segment_size;
            const std::uint64_t hi = std::min(limit + 1, lo + segment_size);  // exclusive
            std::fill(composite.begin(), composite.end(), 0);
            for (std::uint64_t p : base) {
                if (p * p >= hi) break;
                std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
                for (std::uint64_t j = start; j < hi; j += p) composite[j - lo] = 1;
            }
            auto& out = found[s];
            for (std::uint64_t n = lo; n < hi; ++n)
                if (!composite[n - lo]) out.push_back(n);
        }
    }

    std::size_t total = 0;
    for (const auto& f : found) total += f.size();
    std::vector<std::uint64_t> primes;
    primes.reserve(total);
    for (auto& f : found) {
        primes.insert(primes.end(), f.begin(), f.end());
        std::vector<std::uint64_t>().swap(f);
    }
    return PrimeTable(limit, std::move(primes), segment_size);
}

double prime_sum_cos(double delta, double X, const PrimeTable& table) {
    if (!(X >= 2)) throw DomainError("prime_sum_cos requires X >= 2");
    table.require_covers(X);
    KahanSum acc;
    for (std::uint64_t p : table.in_range(0.0, X)) {
        const double pd = static_cast<double>(p);
        acc.add(std::cos(delta * std::log(pd)) / pd);
    }
    return acc.value();
}

std::vector<double> prime_sum_cos_profile_reference(std::span<const double> deltas, double X,
                                                    const PrimeTable& table) {
    std::vector<double> out;
    out.reserve(deltas.size());
    for (double d : deltas) out.push_back(prime_sum_cos(d, X, table));
    return out;
}

std::vector<double> prime_sum_cos_profile(std::span<const double> deltas, double X,
                                          const PrimeTable& table) {
    if (!(X >= 2)) throw DomainError("prime_sum_cos requires X >= 2");
    table.require_covers(X);
    const auto ps = table.in_range(0.0, X);
    // same operations as prime_sum_cos, so every entry agrees bit for bit
    std::vector<double> logs(ps.size()), pd(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        pd[i] = static_cast<double>(ps[i]);
        logs[i] = std::log(pd[i]);
    }
    std::vector<double> out(deltas.size());
    const auto n = static_cast<std::ptrdiff_t>(deltas.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        KahanSum acc;
        for (std::size_t i = 0; i < logs.size(); ++i) acc.add(std::cos(deltas[k] * logs[i]) / pd[i]);
        out[k] = acc.value();
    }
    return out;
}

std::complex<double> prime_block_sum(const PrimeInterval& interval, double X,
                                     std::complex<double> s, const PrimeTable& table) {
    if (!(interval.hi <= X)) throw DomainError("prime_block_sum requires interval.hi <= X");
    table.require_covers(interval.hi);
    const double logX = std::log(X);
    ComplexKahanSum acc;
    for (std::uint64_t p : table.in_range(interval.lo, interval.hi)) {
        const double lp = std::log(static_cast<double>(p));
        acc.add(std::exp(-s * lp) * ((logX - lp) / logX));
    }
    return acc.value();
}

std::complex<double> prime_square_poly(const PrimeInterval& interval, std::complex<double> s,
                                       const PrimeTable& table) {
    table.require_covers(interval.hi);
    ComplexKahanSum acc;
    for (std::uint64_t p : table.in_range(interval.lo, interval.hi)) {
        const double lp = std::log(static_cast<double>(p));
        acc.add(0.5 * std::exp(-2.0 * s * lp));
    }
    return acc.value();
}

std::complex<double> prime_square_poly(int l, std::complex<double> s, const PrimeTable& table) {
    if (l < 1) throw DomainError("prime_square_poly requires l >= 1");
    return prime_square_poly(PrimeInterval(std::exp(double(l)), std::exp(double(l + 1))), s, table);
}

void write_prime_table(const PrimeTable& table, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw CacheError("cannot open " + path.string() + " for writing");
    binary::put_magic(os, "ZPRM");
    binary::put<std::uint32_t>(os, kPrimeFileVersion);
    binary::put<std::uint64_t>(os, table.limit());
    binary::put<std::uint64_t>(os, table.size());
    for (std::uint64_t p : table.primes()) binary::put<std::uint64_t>(os, p);
    if (!os) throw CacheError("write failed for " + path.string());
}

PrimeTable read_prime_table(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CacheError("cannot open " + path.string());
    binary::expect_magic(is, "ZPRM");
    const auto version = binary::get<std::uint32_t>(is, "version");
    if (version != kPrimeFileVersion)
        throw CacheVersionError("prime table version " + std::to_string(version) + ", expected " +
                                std::to_string(kPrimeFileVersion));
    const auto limit = binary::get<std::uint64_t>(is, "limit");
    const auto count = binary::get<std::uint64_t>(is, "count");
    std::error_code ec;
    const auto fsize = std::filesystem::file_size(path, ec);
    if (ec || fsize != 24 + 8 * count) throw CacheError("prime table size does not match its count");
    std::vector<std::uint64_t> primes(count);
    for (auto& p : primes) p = binary::get<std::uint64_t>(is, "primes");
    return PrimeTable(limit, std::move(primes), kDefaultSegmentSize);
}

}  // namespace zetacorr
