#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "zetacorr/primes.hpp"
#include "zetacorr/shift_spec.hpp"
#include "zetacorr/zeta.hpp"

namespace zetacorr {

enum class QuadratureRule { simpson, trapezoid };

// alpha_k rounded to the nearest multiple of the grid step.
struct SnappedShift {
    double alpha = 0.0;     // requested
    double snapped = 0.0;   // used
    long long offset = 0;   // snapped / step, in samples
    double residual() const { return alpha - snapped; }
};

std::vector<SnappedShift> snap_shifts(std::span<const double> alpha, double step);

// M_{alpha,beta}(T) = int_T^{2T} prod_k |zeta(1/2 + i(t + alpha_k))|^{2 beta_k} dt on the
// samples of `grid` taken every `stride` points. [T, 2T] must start on a sample and
// T / (stride step) must be an integer (to 1e-6). Composite Simpson; an odd
// interval count closes with the 3/8 rule on the last three intervals.
// The parallel version sums fixed chunks of sample indices and merges them in order.
double shifted_moment(const ShiftSpec& spec, const ZetaGrid& grid, QuadratureRule rule = QuadratureRule::simpson,
                      std::size_t stride = 1);
double shifted_moment_reference(const ShiftSpec& spec, const ZetaGrid& grid,
                                QuadratureRule rule = QuadratureRule::simpson, std::size_t stride = 1);

// Evaluator for zeta(1 + i delta + sigma_offset); zeta_one_line by default.
using OneLineFn = std::function<std::complex<double>(double delta, double sigma_offset)>;
OneLineFn default_one_line();

// T (log T)^{sum beta^2} prod_{j<k} |zeta(1 + i(alpha_j - alpha_k) + 1/log T)|^{2 beta_j beta_k}.
double predict_bound(const ShiftSpec& spec, const OneLineFn& one_line = default_one_line());

// min(1/|d|, log T) for |d| <= 1/100, log(2 + |d|) otherwise, d = alpha1 - alpha2.
double nsw_F(double alpha1, double alpha2, double T);

struct MomentReport {
    double moment = 0.0;               // at quadrature_step
    double prediction = 0.0;
    double ratio = 0.0;
    double quadrature_step = 0.0;
    double step_halving_delta = 0.0;   // |M(step/2) - M(step)| / M(step)
    double trapezoid = 0.0;            // cross-check at quadrature_step
    std::optional<double> nsw_value;   // m = 2 only
    std::vector<SnappedShift> shifts;
};

// `grid` must be sampled at step/2; the moment is reported at step and refined
// once for the step-halving delta.
MomentReport moment_report(const ShiftSpec& spec, const ZetaGrid& fine_grid,
                           const OneLineFn& one_line = default_one_line());

// Lemma 2.1 surrogate:
//   Re sum_{p<=X} a_X(p) p^{-(1/2 + 1/log X + i(t+alpha))}
//   + sum_{p <= min(sqrt X, log T)} Re p^{-(1 + 2i(t+alpha))} / 2 + log T / log X.
// Requires 2 <= X <= T^2 and a table covering X.
class Lemma21Surrogate {
public:
    Lemma21Surrogate(double X, double T, const PrimeTable& table);
    double operator()(double t, double alpha = 0.0) const;
    double X() const { return X_; }
    double T() const { return T_; }

private:
    double X_, T_;
    std::vector<double> logs_, amps_;        // a_X(p) p^{-sigma}
    std::vector<double> sq_logs_, sq_amps_;  // 1 / (2p)
    double tail_ = 0.0;                      // log T / log X
};

double lemma21_rhs(double t, double alpha, double X, double T, const PrimeTable& table);

struct Lemma21Audit {
    std::size_t points = 0;
    double C0 = 0.0;        // max of log|zeta(1/2+it)| - rhs
    double t_at_max = 0.0;
};

// Audit at t_i = t0 + (i + 1/2)(t1 - t0)/n. Parallel over fixed chunks.
Lemma21Audit lemma21_audit(const Lemma21Surrogate& rhs, double t0, double t1, std::size_t n,
                           int rs_terms = 4);

struct CurveRow {
    double delta = 0.0;
    double moment = 0.0;
    double prediction = 0.0;
    double ratio = 0.0;
    double nsw = 0.0;
    double step_halving_delta = 0.0;
};

// m = 2, alpha = (0, delta), beta = (b, b) for each delta; fine_grid at step/2.
std::vector<CurveRow> correlation_curve(double T, double b, std::span<const double> deltas,
                                        const ZetaGrid& fine_grid, const OneLineFn& one_line = default_one_line());

// Grid request that covers every shift of `spec` at step/2, starting exactly at T + min alpha.
GridRequest moment_grid_request(const ShiftSpec& spec, double step, int rs_terms);

}  // namespace zetacorr
