#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace zetacorr {

inline constexpr std::uint64_t kMaxSieveLimit = 1'000'000'000ULL;
inline constexpr std::uint64_t kDefaultSegmentSize = 1ULL << 20;

// Immutable after construction; safe to share across threads.
class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes, std::uint64_t segment_size);

    std::uint64_t limit() const { return limit_; }
    std::uint64_t segment_size() const { return segment_size_; }
    std::span<const std::uint64_t> primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }

    // Primes p with lo < p <= hi (real endpoints, exact integer membership).
    std::span<const std::uint64_t> in_range(double lo, double hi) const;

    // Throws InsufficientSieveError unless every integer <= x is covered.
    void require_covers(double x) const;

    // Segment size is a construction detail and not part of the value.
    bool operator==(const PrimeTable& o) const { return limit_ == o.limit_ && primes_ == o.primes_; }

private:
    std::uint64_t limit_ = 0;
    std::uint64_t segment_size_ = kDefaultSegmentSize;
    std::vector<std::uint64_t> primes_;
};

// Half-open real interval (lo, hi]. Endpoints may be irrational, e.g. (e^l, e^{l+1}].
struct PrimeInterval {
    double lo = 0.0;
    double hi = 0.0;

    PrimeInterval() = default;
    PrimeInterval(double lo_, double hi_);

    bool contains(std::uint64_t n) const {
        const double x = static_cast<double>(n);
        return x > lo && x <= hi;
    }
    bool disjoint(const PrimeInterval& o) const { return hi <= o.lo || o.hi <= lo; }
    bool operator==(const PrimeInterval&) const = default;

    // An interval that no integer can lie in.
    static PrimeInterval empty();
};

// Segmented sieve of Eratosthenes; segments are sieved in parallel and
// concatenated in index order. 2 <= limit <= 1e9.
PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t segment_size = kDefaultSegmentSize);

// Serial single-array sieve kept as the reference for sieve_primes.
PrimeTable sieve_primes_reference(std::uint64_t limit);

// sum_{p <= X} cos(delta log p) / p, compensated.
double prime_sum_cos(double delta, double X, const PrimeTable& table);

// prime_sum_cos over many deltas. The parallel version splits the delta list
// into fixed chunks; every value is computed exactly as prime_sum_cos would.
std::vector<double> prime_sum_cos_profile(std::span<const double> deltas, double X,
                                          const PrimeTable& table);
std::vector<double> prime_sum_cos_profile_reference(std::span<const double> deltas, double X,
                                                    const PrimeTable& table);

// P_{I,X}(s) = sum_{p in I} p^{-s} log(X/p)/log X. Requires I.hi <= X.
std::complex<double> prime_block_sum(const PrimeInterval& interval, double X,
                                     std::complex<double> s, const PrimeTable& table);

// Q_l(s) = sum_{e^l < p <= e^{l+1}} 1/(2 p^{2s}), l >= 1.
std::complex<double> prime_square_poly(int l, std::complex<double> s, const PrimeTable& table);

// Same sum over an arbitrary interval; used for synthetic (e.g. empty) ranges.
std::complex<double> prime_square_poly(const PrimeInterval& interval, std::complex<double> s,
                                       const PrimeTable& table);

// ZPRM prime table file: "ZPRM", u32 version, u64 limit, u64 count, count x u64.
inline constexpr std::uint32_t kPrimeFileVersion = 1;
void write_prime_table(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable read_prime_table(const std::filesystem::path& path);

}  // namespace zetacorr
