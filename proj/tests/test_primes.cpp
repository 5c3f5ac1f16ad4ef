#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "zetacorr/binary_io.hpp"
#include "zetacorr/errors.hpp"
#include "zetacorr/primes.hpp"

using namespace zetacorr;

namespace {

// independent oracle: trial division by 2 and odd d <= sqrt(n)
bool is_prime_td(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::filesystem::path tmp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "zetacorr_test_primes";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("small sieves") {
    const auto t10 = sieve_primes(10);
    CHECK(std::vector<std::uint64_t>(t10.primes().begin(), t10.primes().end()) == std::vector<std::uint64_t>{2, 3, 5, 7});
    const auto t2 = sieve_primes(2);
    REQUIRE(t2.size() == 1);
    CHECK(t2.primes()[0] == 2);
    CHECK_THROWS_AS(sieve_primes(1), ConfigError);
}

TEST_CASE("pi(1e6) against trial division") {
    std::size_t count = 0;
    for (std::uint64_t n = 2; n <= 1000000; ++n) count += is_prime_td(n);
    CHECK(count == 78498);
    const auto t = sieve_primes(1000000);
    CHECK(t.size() == count);
    // every listed value is prime, ascending
    for (std::size_t i = 0; i < t.size(); i += 97) CHECK(is_prime_td(t.primes()[i]));
}

TEST_CASE("segment size does not change the table") {
    const auto ref = sieve_primes_reference(300000);
    for (std::uint64_t seg : std::vector<std::uint64_t>{64, 1000, 65536, kDefaultSegmentSize}) CHECK(sieve_primes(300000, seg) == ref);
}

TEST_CASE("prime sums") {
    const auto t = sieve_primes(200000);
    CHECK(prime_sum_cos(0.0, 10.0, t) == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-15));
    CHECK(prime_sum_cos(0.0, 10.0, t) == doctest::Approx(1.176190476190476).epsilon(1e-14));
    for (double d : {0.0, 0.7, 13.25}) CHECK(prime_sum_cos(d, 2.0, t) == doctest::Approx(std::cos(d * std::log(2.0)) / 2));

    // direct long double oracle over trial-division primes
    long double s = 0.0L;
    for (std::uint64_t n = 2; n <= 100000; ++n)
        if (is_prime_td(n)) s += 1.0L / static_cast<long double>(n);
    const double v = prime_sum_cos(0.0, 1e5, t);
    CHECK(v == doctest::Approx(static_cast<double>(s)).epsilon(1e-13));
    CHECK(std::abs(v - (std::log(std::log(1e5)) + 0.2615)) < 0.01);
    std::printf("sum_{p<=1e5} 1/p = %.12f\n", v);
}

TEST_CASE("prime block sums") {
    const auto t = sieve_primes(1000);
    const auto v = prime_block_sum(PrimeInterval(2.0, 3.0), 9.0, {1.0, 0.0}, t);
    CHECK(v.real() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(std::abs(v.imag()) < 1e-16);
    CHECK(std::abs(prime_block_sum(PrimeInterval(7.0, 10.0), 10.0, {0.5, 3.0}, t)) == 0.0);

    // (2, 5] at X = 25, s = 1/2, summed in both orders
    auto w = [](double p) { return std::log(25.0 / p) / std::log(25.0); };
    const double fwd = w(3) / std::sqrt(3.0) + w(5) / std::sqrt(5.0);
    const double bwd = w(5) / std::sqrt(5.0) + w(3) / std::sqrt(3.0);
    const auto b = prime_block_sum(PrimeInterval(2.0, 5.0), 25.0, {0.5, 0.0}, t);
    CHECK(b.real() == doctest::Approx(fwd).epsilon(1e-15));
    CHECK(b.real() == doctest::Approx(bwd).epsilon(1e-15));
    CHECK_THROWS_AS(prime_block_sum(PrimeInterval(2.0, 30.0), 25.0, {0.5, 0.0}, t), DomainError);
}

TEST_CASE("square polynomials Q_l") {
    const auto t = sieve_primes(1000);
    const auto q = prime_square_poly(1, {0.5, 0.0}, t);
    CHECK(q.real() == doctest::Approx(0.5 * (1.0 / 3 + 1.0 / 5 + 1.0 / 7)).epsilon(1e-15));
    CHECK(q.real() == doctest::Approx(0.338095238095238).epsilon(1e-13));
    CHECK(std::abs(prime_square_poly(1, {40.0, 0.0}, t)) < 1e-30);
    CHECK(std::abs(prime_square_poly(PrimeInterval::empty(), {0.5, 2.0}, t)) == 0.0);
    CHECK_THROWS_AS(prime_square_poly(0, {0.5, 0.0}, t), DomainError);
}

TEST_CASE("coverage is enforced") {
    const auto t = sieve_primes(100);
    CHECK_NOTHROW(t.require_covers(100.0));
    CHECK_THROWS_AS(t.require_covers(101.0), InsufficientSieveError);
    CHECK_THROWS_AS(prime_sum_cos(0.0, 1000.0, t), InsufficientSieveError);
}

TEST_CASE("profile kernel matches the per-delta reference") {
    const auto t = sieve_primes(100000);
    std::vector<double> deltas;
    for (int i = 0; i <= 1000; ++i) deltas.push_back(0.05 * i);
    const auto a = prime_sum_cos_profile(deltas, 1e5, t);
    const auto b = prime_sum_cos_profile_reference(deltas, 1e5, t);
    CHECK(a == b);
    CHECK(a[17] == prime_sum_cos(deltas[17], 1e5, t));
}

TEST_CASE("prime table files") {
    const auto t = sieve_primes(5000);
    const auto path = tmp_file("p.bin");
    write_prime_table(t, path);
    CHECK(read_prime_table(path) == t);
    CHECK(std::filesystem::file_size(path) == 24 + 8 * t.size());

    // truncated
    std::filesystem::resize_file(path, 24 + 8 * (t.size() - 1));
    CHECK_THROWS_AS(read_prime_table(path), CacheError);

    // wrong version
    write_prime_table(t, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        const unsigned char v[4] = {9, 0, 0, 0};
        f.write(reinterpret_cast<const char*>(v), 4);
    }
    CHECK_THROWS_AS(read_prime_table(path), CacheVersionError);
    CHECK_THROWS_AS(read_prime_table(tmp_file("missing.bin")), CacheError);
}
