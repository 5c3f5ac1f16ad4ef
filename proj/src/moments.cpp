#include "zetacorr/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zetacorr/errors.hpp"
#include "zetacorr/parallel.hpp"
#include "zetacorr/summation.hpp"

namespace zetacorr {

namespace {

struct QuadPlan {
    std::size_t base = 0;          // grid index of t = T
    std::size_t stride = 1;
    std::size_t intervals = 0;     // n, nodes 0..n
    double h = 0.0;                // node spacing
    std::vector<long long> offsets;
    std::vector<double> exps;      // 2 beta_k
    QuadratureRule rule = QuadratureRule::simpson;
};

QuadPlan plan(const ShiftSpec& spec, const ZetaGrid& grid, QuadratureRule rule, std::size_t stride) {
    spec.validate();
    if (grid.size() == 0 || !(grid.step > 0.0)) throw CoverageError("empty zeta grid");
    if (stride < 1) throw DomainError("stride must be >= 1");
    QuadPlan q;
    q.stride = stride;
    q.rule = rule;
    q.h = grid.step * static_cast<double>(stride);

    const double pos = (spec.T - grid.t0) / grid.step;
    const double base = std::round(pos);
    if (std::abs(pos - base) > 1e-6) throw CoverageError("T does not fall on a grid sample");
    const double n = spec.T / q.h;
    const double nr = std::round(n);
    if (std::abs(n - nr) > 1e-6 * std::max(1.0, n) || nr < 1) throw CoverageError("T is not a whole number of quadrature steps");
    q.intervals = static_cast<std::size_t>(nr);

    for (const auto& s : snap_shifts(spec.alpha, grid.step)) q.offsets.push_back(s.offset);
    for (double b : spec.beta) q.exps.push_back(2.0 * b);

    const long long lo = static_cast<long long>(base) + *std::min_element(q.offsets.begin(), q.offsets.end());
    const long long hi = static_cast<long long>(base) + static_cast<long long>(q.intervals * stride) +
                         *std::max_element(q.offsets.begin(), q.offsets.end());
    if (lo < 0 || hi >= static_cast<long long>(grid.size()))
        throw CoverageError("zeta grid does not cover [T + min alpha, 2T + max alpha]");
    q.base = static_cast<std::size_t>(base);
    return q;
}

double node_weight(const QuadPlan& q, std::size_t i) {
    const std::size_t n = q.intervals;
    if (q.rule == QuadratureRule::trapezoid || n == 1) return (i == 0 || i == n) ? 0.5 : 1.0;
    if (n == 3) {
        // pure 3/8 rule, weights 3/8 (1, 3, 3, 1) scaled to units of h
        return (i == 0 || i == 3) ? 0.375 : 1.125;
    }
    // Simpson on [0, m], m even; 3/8 on [m, n] when n is odd.
    const std::size_t m = (n % 2 == 0) ? n : n - 3;
    double w = 0.0;
    if (i <= m) {
        if (i == 0 || i == m)
            w += 1.0 / 3.0;
        else
            w += (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    if (m != n && i >= m) w += (i == m || i == n) ? 0.375 : 1.125;
    return w;
}

double integrand(const QuadPlan& q, const ZetaGrid& grid, std::size_t i) {
    double f = 1.0;
    const long long at = static_cast<long long>(q.base + i * q.stride);
    for (std::size_t k = 0; k < q.offsets.size(); ++k) {
        if (q.exps[k] == 0.0) continue;  // |zeta|^0 = 1, also at zeros
        f *= std::pow(grid.modulus(static_cast<std::size_t>(at + q.offsets[k])), q.exps[k]);
    }
    return f;
}

}  // namespace

std::vector<SnappedShift> snap_shifts(std::span<const double> alpha, double step) {
    if (!(step > 0.0)) throw DomainError("snap step must be > 0");
    std::vector<SnappedShift> out;
    for (double a : alpha) {
        SnappedShift s;
        s.alpha = a;
        s.offset = std::llround(a / step);
        s.snapped = static_cast<double>(s.offset) * step;
        out.push_back(s);
    }
    return out;
}

double shifted_moment_reference(const ShiftSpec& spec, const ZetaGrid& grid, QuadratureRule rule,
                                std::size_t stride) {
    const QuadPlan q = plan(spec, grid, rule, stride);
    KahanSum acc;
    for (std::size_t i = 0; i <= q.intervals; ++i) acc.add(node_weight(q, i) * integrand(q, grid, i));
    return q.h * acc.value();
}

double shifted_moment(const ShiftSpec& spec, const ZetaGrid& grid, QuadratureRule rule, std::size_t stride) {
    const QuadPlan q = plan(spec, grid, rule, stride);
    const std::size_t nodes = q.intervals + 1;
    const std::size_t nchunks = chunk_count(nodes, kDefaultChunk);
    std::vector<KahanSum> partial(nchunks);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < nchunks; ++c) {
        KahanSum acc;
        const std::size_t i1 = std::min(nodes, (c + 1) * kDefaultChunk);
        for (std::size_t i = c * kDefaultChunk; i < i1; ++i) acc.add(node_weight(q, i) * integrand(q, grid, i));
        partial[c] = acc;
    }
    KahanSum total;
    for (const auto& p : partial) total.merge(p);
    return q.h * total.value();
}

OneLineFn default_one_line() {
    return [](double delta, double sigma_offset) { return zeta_one_line(delta, sigma_offset).value; };
}

double predict_bound(const ShiftSpec& spec, const OneLineFn& one_line) {
    spec.validate();
    if (!(spec.T > 1.0)) throw DomainError("prediction needs T > 1");
    const double logT = std::log(spec.T);
    double sum_b2 = 0.0;
    for (double b : spec.beta) sum_b2 += b * b;
    // assembled in logs
    double log_pred = std::log(spec.T) + sum_b2 * std::log(logT);
    for (std::size_t j = 0; j < spec.m(); ++j)
        for (std::size_t k = j + 1; k < spec.m(); ++k) {
            const double e = 2.0 * spec.beta[j] * spec.beta[k];
            if (e == 0.0) continue;
            const double z = std::abs(one_line(spec.alpha[j] - spec.alpha[k], 1.0 / logT));
            log_pred += e * std::log(z);
        }
    return std::exp(log_pred);
}

double nsw_F(double alpha1, double alpha2, double T) {
    if (!(T >= 16.0)) throw DomainError("nsw_F needs T >= 16");
    const double d = std::abs(alpha1 - alpha2);
    if (d <= 0.01) return d == 0.0 ? std::log(T) : std::min(1.0 / d, std::log(T));
    return std::log(2.0 + d);
}

MomentReport moment_report(const ShiftSpec& spec, const ZetaGrid& fine_grid, const OneLineFn& one_line) {
    MomentReport r;
    r.quadrature_step = 2.0 * fine_grid.step;
    r.moment = shifted_moment(spec, fine_grid, QuadratureRule::simpson, 2);
    const double fine = shifted_moment(spec, fine_grid, QuadratureRule::simpson, 1);
    r.trapezoid = shifted_moment(spec, fine_grid, QuadratureRule::trapezoid, 2);
    r.step_halving_delta = r.moment > 0.0 ? std::abs(fine - r.moment) / r.moment : 0.0;
    r.prediction = predict_bound(spec, one_line);
    r.ratio = r.moment / r.prediction;
    if (spec.m() == 2) r.nsw_value = nsw_F(spec.alpha[0], spec.alpha[1], spec.T);
    r.shifts = snap_shifts(spec.alpha, fine_grid.step);
    return r;
}

Lemma21Surrogate::Lemma21Surrogate(double X, double T, const PrimeTable& table) : X_(X), T_(T) {
    if (!(T > 1.0)) throw DomainError("lemma 2.1 surrogate needs T > 1");
    if (!(X >= 2.0 && X <= T * T)) throw DomainError("lemma 2.1 surrogate needs 2 <= X <= T^2");
    table.require_covers(X);
    const double logX = std::log(X);
    const double sigma = 0.5 + 1.0 / logX;
    for (std::uint64_t p : table.in_range(0.0, X)) {
        const double lp = std::log(static_cast<double>(p));
        logs_.push_back(lp);
        amps_.push_back((logX - lp) / logX * std::exp(-sigma * lp));
    }
    const double sq_cap = std::min(std::sqrt(X), std::log(T));
    for (std::uint64_t p : table.in_range(0.0, sq_cap)) {
        sq_logs_.push_back(2.0 * std::log(static_cast<double>(p)));
        sq_amps_.push_back(0.5 / static_cast<double>(p));
    }
    tail_ = std::log(T) / logX;
}

double Lemma21Surrogate::operator()(double t, double alpha) const {
    const double u = t + alpha;
    KahanSum acc;
    for (std::size_t i = 0; i < logs_.size(); ++i) acc.add(amps_[i] * std::cos(u * logs_[i]));
    for (std::size_t i = 0; i < sq_logs_.size(); ++i) acc.add(sq_amps_[i] * std::cos(u * sq_logs_[i]));
    acc.add(tail_);
    return acc.value();
}

double lemma21_rhs(double t, double alpha, double X, double T, const PrimeTable& table) {
    return Lemma21Surrogate(X, T, table)(t, alpha);
}

Lemma21Audit lemma21_audit(const Lemma21Surrogate& rhs, double t0, double t1, std::size_t n, int rs_terms) {
    if (n == 0 || !(t1 > t0)) throw DomainError("lemma 2.1 audit needs n >= 1 and t1 > t0");
    std::vector<double> diff(n);
    const double h = (t1 - t0) / static_cast<double>(n);
    const std::size_t nchunks = chunk_count(n, 256);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t i1 = std::min(n, (c + 1) * 256);
        for (std::size_t i = c * 256; i < i1; ++i) {
            const double t = t0 + (static_cast<double>(i) + 0.5) * h;
            diff[i] = std::log(std::abs(riemann_siegel_Z(t, rs_terms))) - rhs(t);
        }
    }
    Lemma21Audit a;
    a.points = n;
    a.C0 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (diff[i] > a.C0) {
            a.C0 = diff[i];
            a.t_at_max = t0 + (static_cast<double>(i) + 0.5) * h;
        }
    return a;
}

std::vector<CurveRow> correlation_curve(double T, double b, std::span<const double> deltas, const ZetaGrid& fine_grid,
                                        const OneLineFn& one_line) {
    std::vector<CurveRow> rows;
    for (double d : deltas) {
        ShiftSpec spec{{0.0, d}, {b, b}, T};
        const MomentReport r = moment_report(spec, fine_grid, one_line);
        rows.push_back({d, r.moment, r.prediction, r.ratio, nsw_F(0.0, d, T), r.step_halving_delta});
    }
    return rows;
}

GridRequest moment_grid_request(const ShiftSpec& spec, double step, int rs_terms) {
    spec.validate();
    if (!(step > 0.0)) throw DomainError("quadrature step must be > 0");
    const double fine = step / 2.0;
    const auto snapped = snap_shifts(spec.alpha, fine);
    long long lo = 0, hi = 0;
    for (const auto& s : snapped) {
        lo = std::min(lo, s.offset);
        hi = std::max(hi, s.offset);
    }
    // lo <= 0 <= hi, so T itself is a sample and t0 <= T
    GridRequest req;
    req.t0 = spec.T + static_cast<double>(lo) * fine;
    const auto n_intervals = static_cast<long long>(std::llround(spec.T / fine));
    req.t1 = req.t0 + static_cast<double>(n_intervals + (hi - lo)) * fine;
    req.step = fine;
    req.correction_terms = rs_terms;
    req.modulus_only = true;
    return req;
}

}  // namespace zetacorr
