#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "zetacorr/primes.hpp"
#include "zetacorr/shift_spec.hpp"

namespace zetacorr {

// beta_* = sum_k max(1, beta_k).
double beta_star(std::span<const double> beta);

// The block apparatus: T_0 = 2, T_j = T^{e^{j-1}/(log_2 T)^2}, L the largest j with
// T_j <= T^c, K_j = (log_2 T)^{3/2} e^{-j/2}, J_l = e^{-l/10}. Here log_2 is the
// iterated logarithm log log. Everything is stored through log T so that schemes
// for astronomically large T (log_2 T = 10, say) can still be built and inspected.
struct BlockScheme {
    double log_T = 0.0;
    double log2_T = 0.0;           // log log T
    std::vector<double> beta;
    double beta_star = 0.0;
    double exponent_scale = 0.0;   // c
    bool scale_overridden = false;
    int L = 0;
    bool degenerate = true;        // L = 0
    std::vector<double> log_T_seq; // log T_0 .. log T_L
    std::vector<double> K_seq;     // K_1 .. K_L at [0 .. L-1]
    int max_square_level = 0;      // levels l = 1..max_square_level are tested

    double T() const;                        // may be +inf
    double T_at(int j) const;                // T_j, may be +inf
    double K(int j) const;                   // any j >= 1, also beyond L
    static double J(int l);
    int ell_cap() const;                     // floor(2 log_3 T), clamped at 0
};

// Default c = 1 / (200 beta_*^2). max_square_level defaults to floor(log_2 T)
// (at least 1). Requires T >= 16.
BlockScheme build_scheme(double T, std::span<const double> beta,
                         std::optional<double> exponent_scale_override = std::nullopt,
                         std::optional<int> max_square_level = std::nullopt);
BlockScheme build_scheme_from_log(double log_T, std::span<const double> beta,
                                  std::optional<double> exponent_scale_override = std::nullopt,
                                  std::optional<int> max_square_level = std::nullopt);

enum class Abscissa { half, one };  // sigma_0 = 1/2 + 1/log T_s, or 1 + 1/log T_s

// Raw magnitudes at one point. P_abs[j-1][s-j] = |P_{j,T_s}(sigma_s + i t)| for
// j <= s <= L; Q_abs[l-1] = |Q_l(1/2 + i t)|.
struct PointValues {
    std::vector<std::vector<double>> P_abs;
    std::vector<double> Q_abs;
};

struct PointClass {
    double t = 0.0;
    bool good = true;
    std::optional<int> bad_index;
    int square_index = 0;
    bool degenerate = false;  // the G/B part was vacuous

    bool operator==(const PointClass&) const = default;
};

// Classification from raw values. bad_index is the smallest j for which some
// |P_{j,T_s}| exceeds K_j; square_index the largest l with |Q_l| > J_l.
PointClass classify_values(double t, const PointValues& v, const BlockScheme& scheme);

// Precomputes prime lists, weights and abscissae for one scheme. Immutable and
// shareable across threads.
class Classifier {
public:
    Classifier(BlockScheme scheme, const PrimeTable& table, Abscissa abscissa = Abscissa::half);

    const BlockScheme& scheme() const { return scheme_; }
    Abscissa abscissa() const { return abscissa_; }

    PointValues values(double t) const;
    PointClass classify(double t) const;

    // Samples t_k = t0 + k step, k < count. Parallel over fixed chunks.
    std::vector<PointClass> classify_grid(double t0, double step, std::size_t count) const;
    std::vector<PointClass> classify_grid_reference(double t0, double step, std::size_t count) const;

private:
    struct Block {
        int j = 0, s = 0;
        double sigma = 0.0;
        std::vector<double> logs, amps;  // amps = a_{T_s}(p) p^{-sigma}
    };
    BlockScheme scheme_;
    Abscissa abscissa_;
    std::vector<Block> blocks_;                 // ordered by (j, s)
    std::vector<std::vector<double>> sq_logs_;  // per level l = 1..max_square_level
    std::vector<std::vector<double>> sq_amps_;  // 1 / (2p)
};

struct ShiftPartitionLabel {
    std::vector<int> A;                    // good shift indices, 1-based, ascending
    std::vector<std::pair<int, int>> f;    // (k, j): t + alpha_k in B_j, sorted by (j, k)
    std::vector<int> ell;                  // square index of t + alpha_k, uncapped
    int ell_inf = 0;
    int k_star = 0;                        // first k with ell(k) = ell_inf, 1-based
    bool within_ell_cap = true;            // ell_inf <= floor(2 log_3 T)

    bool operator==(const ShiftPartitionLabel&) const = default;
};

ShiftPartitionLabel label_from_classes(std::span<const PointClass> shifted, const BlockScheme& scheme);
ShiftPartitionLabel classify_shift_tuple(double t, const ShiftSpec& spec, const Classifier& classifier);

enum class BadSetKind { B, C };

struct BadMeasure {
    BadSetKind kind = BadSetKind::B;
    int index = 0;
    std::size_t points = 0;
    std::size_t hits = 0;
    double fraction = 0.0;
    double bound = 0.0;  // bad_set_bound(kind, index)
};

// B_1 bound from the measure lemma; for j > 1 we report the analogous tail
// e^{-(log_2 T)^3 e^{-j}/3} from the K_j moment estimate.
double bad_set_bound(const BlockScheme& scheme, BadSetKind kind, int index);

// Requires the grid to be nonempty and inside [T/2, 5T/2].
BadMeasure estimate_bad_measure(const Classifier& classifier, double t0, double step, std::size_t count,
                                BadSetKind kind, int index);
BadMeasure measure_from_classes(std::span<const PointClass> classes, const BlockScheme& scheme,
                                BadSetKind kind, int index);

}  // namespace zetacorr
