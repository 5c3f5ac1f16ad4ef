#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "zetacorr/errors.hpp"
#include "zetacorr/zeta.hpp"

using namespace zetacorr;

namespace {

// Z(t) from the Euler-Maclaurin evaluator: Re(e^{i theta} zeta(1/2 + it)).
double Z_em(double t) {
    return (std::polar(1.0, riemann_siegel_theta(t)) * zeta_euler_maclaurin({0.5, t})).real();
}

double bisect(double (*f)(double), double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 80; ++i) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double Z_rs4(double t) { return riemann_siegel_Z(t, 4); }

std::filesystem::path tmp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "zetacorr_test_zeta";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("classical values") {
    CHECK(std::abs(zeta_euler_maclaurin({2.0, 0.0}) - std::numbers::pi * std::numbers::pi / 6) < 1e-12);
    CHECK(std::abs(zeta_euler_maclaurin({0.0, 0.0}) - (-0.5)) < 1e-12);
    CHECK(std::abs(zeta_euler_maclaurin({-1.0, 0.0}) - (-1.0 / 12)) < 1e-12);
    CHECK_THROWS_AS(zeta_euler_maclaurin({1.0, 0.0}), PoleError);
    CHECK_THROWS_AS(zeta_euler_maclaurin({0.5, 2e5}), RangeError);
}

TEST_CASE("first zero by bisection") {
    const double t0 = bisect(Z_rs4, 14.0, 14.3);
    CHECK(std::abs(t0 - 14.134725) < 1e-5);
    CHECK(std::abs(riemann_siegel_Z(t0, 4)) <= 1e-4);
    CHECK(std::abs(zeta_euler_maclaurin({0.5, t0})) <= 1e-4);
    CHECK(std::abs(riemann_siegel_Z(14.134725, 4)) <= 1e-4);
}

TEST_CASE("no sign change of Z on [15, 20]") {
    // census on a 0.01 grid, both evaluators
    int rs_changes = 0, em_changes = 0;
    double prev_rs = riemann_siegel_Z(15.0, 4), prev_em = Z_em(15.0);
    for (int i = 1; i <= 500; ++i) {
        const double t = 15.0 + 0.01 * i;
        const double a = riemann_siegel_Z(t, 4), b = Z_em(t);
        rs_changes += (a < 0) != (prev_rs < 0);
        em_changes += (b < 0) != (prev_em < 0);
        prev_rs = a;
        prev_em = b;
    }
    CHECK(rs_changes == em_changes);
    CHECK(rs_changes == 0);
    CHECK(std::abs(riemann_siegel_Z(17.8456, 4) - Z_em(17.8456)) < 1e-5);
}

TEST_CASE("Riemann-Siegel at t = 100 with one correction term (literal example)" * doctest::may_fail()) {
    // The remainder after C_1 is O(t^{-5/4}); at t = 100 it is ~4e-5, not 1e-6.
    CHECK(std::abs(std::abs(riemann_siegel_Z(100.0, 1)) - std::abs(zeta_euler_maclaurin({0.5, 100.0}))) <= 1e-6);
}

TEST_CASE("Riemann-Siegel at t = 100 against Euler-Maclaurin") {
    const double em = std::abs(zeta_euler_maclaurin({0.5, 100.0}));
    for (int k = 0; k <= kMaxRsTerms; ++k)
        CHECK(std::abs(std::abs(riemann_siegel_Z(100.0, k)) - em) <= riemann_siegel_error_bound(100.0, k));
    for (int k = 3; k <= kMaxRsTerms; ++k) CHECK(std::abs(std::abs(riemann_siegel_Z(100.0, k)) - em) <= 1e-6);
}

TEST_CASE("documented error envelope holds on [10, 1e4]") {
    for (int i = 0; i < 60; ++i) {
        const double t = 10.0 * std::pow(1000.0, i / 59.0) + 0.37 * i;
        const double em = std::abs(zeta_euler_maclaurin({0.5, t}));
        for (int k = 0; k <= kMaxRsTerms; ++k) {
            CAPTURE(t);
            CAPTURE(k);
            CHECK(std::abs(std::abs(riemann_siegel_Z(t, k)) - em) <= riemann_siegel_error_bound(t, k));
        }
    }
    CHECK_THROWS_AS(riemann_siegel_Z(9.0, 2), RangeError);
    CHECK_THROWS_AS(riemann_siegel_Z(100.0, kMaxRsTerms + 1), DomainError);
}

TEST_CASE("theta makes e^{i theta} zeta(1/2 + it) real") {
    for (double t : {30.0, 200.0, 3000.0}) {
        const auto z = std::polar(1.0, riemann_siegel_theta(t)) * zeta_euler_maclaurin({0.5, t});
        CHECK(std::abs(z.imag()) < 1e-9);
    }
}

TEST_CASE("one-line values") {
    CHECK(zeta_one_line(0.0, 0.1).value.real() == doctest::Approx(10.584448464950809).epsilon(1e-12));
    CHECK(std::abs(zeta_one_line(0.0, 0.1).value - (1.0 / 0.1 + 0.5772156649015329)) < 0.01);
    CHECK(std::abs(zeta_one_line(0.0, 1.0).value - std::numbers::pi * std::numbers::pi / 6) < 1e-12);
    const auto far = zeta_one_line(100.0, 0.05).value;
    CHECK(std::abs(far) >= 0.1);
    CHECK(std::abs(far) <= 10.0);
    CHECK(std::abs(far - zeta_euler_maclaurin({1.05, 100.0})) < 1e-10);
    CHECK_THROWS_AS(zeta_one_line(0.0, 0.0), DomainError);
}

TEST_CASE("grids") {
    GridRequest r{100.0, 100.1, 0.05, 2, false};
    CHECK(grid_sample_count(r) == 3);
    const auto g = sample_critical_line(r);
    REQUIRE(g.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(std::abs(g.values[k]) - std::abs(riemann_siegel_Z(g.t(k), 2))) < 1e-11);

    CHECK(grid_sample_count({1e5, 2e5, 0.01, 2, true}) == 10000001);
    CHECK(grid_sample_count({50.0, 50.0, 0.1, 2, false}) == 1);
    CHECK(sample_critical_line({50.0, 50.0, 0.1, 2, false}).size() == 1);
}

TEST_CASE("grid spot check at height 1e5") {
    // 1e5 samples from t = 1e5 (the first hundredth of the 1e7-sample range),
    // 100 pseudo-random indices re-evaluated directly
    const GridRequest r{1e5, 1e5 + 1000.0, 0.01, 2, false};
    const auto g = sample_critical_line(r);
    REQUIRE(g.size() == 100001);
    double worst = 0.0;
    std::uint64_t x = 12345;
    for (int i = 0; i < 100; ++i) {
        x = x * 6364136223846793005ULL + 1442695040888963407ULL;
        const std::size_t k = (x >> 11) % g.size();
        const double direct = std::abs(riemann_siegel_Z(g.t(k), 2));
        worst = std::max(worst, std::abs(std::abs(g.values[k]) - direct));
    }
    CHECK(worst <= 1e-8);
    // complex values carry the right phase: e^{i theta} zeta is real
    const auto z = std::polar(1.0, riemann_siegel_theta(g.t(777))) * g.values[777];
    CHECK(std::abs(z.imag()) < 1e-8);
}

TEST_CASE("grid cache files") {
    const auto path = tmp_file("g.bin");
    for (bool mod : {false, true}) {
        const auto g = sample_critical_line({1000.0, 1010.0, 0.05, 3, mod});
        cache_write(g, path);
        CHECK(cache_read(path) == g);
        const auto expected = 4 + 4 + 4 + 8 + 8 + 8 + g.size() * (mod ? 8 : 16);
        CHECK(std::filesystem::file_size(path) == expected);
    }
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
    CHECK_THROWS_AS(cache_read(path), CacheError);

    cache_write(sample_critical_line({1000.0, 1001.0, 0.05, 2, false}), path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        const unsigned char v[4] = {2, 0, 0, 0};
        f.write(reinterpret_cast<const char*>(v), 4);
    }
    CHECK_THROWS_AS(cache_read(path), CacheVersionError);
}
