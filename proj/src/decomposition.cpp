#include "zetacorr/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zetacorr/errors.hpp"
#include "zetacorr/parallel.hpp"

namespace zetacorr {

namespace {

const double kLog16 = std::log(16.0);

// |sum amp_i e^{-i t log p_i}|, plain double phases (t log p <= ~1e7 rad here).
double modulus_at(const std::vector<double>& logs, const std::vector<double>& amps, double t) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double ph = t * logs[i];
        re += amps[i] * std::cos(ph);
        im -= amps[i] * std::sin(ph);
    }
    return std::hypot(re, im);
}

}  // namespace

double beta_star(std::span<const double> beta) {
    double s = 0.0;
    for (double b : beta) {
        if (!(b >= 0.0)) throw DomainError("beta_k must be >= 0");
        s += std::max(1.0, b);
    }
    return s;
}

double BlockScheme::T() const { return std::exp(log_T); }

double BlockScheme::T_at(int j) const {
    if (j < 0 || j > L) throw DomainError("T_j index out of range");
    return std::exp(log_T_seq[j]);
}

double BlockScheme::K(int j) const {
    if (j < 1) throw DomainError("K_j needs j >= 1");
    return std::pow(log2_T, 1.5) * std::exp(-0.5 * j);
}

double BlockScheme::J(int l) { return std::exp(-0.1 * l); }

int BlockScheme::ell_cap() const {
    if (log2_T <= 1.0) return 0;
    return std::max(0, static_cast<int>(std::floor(2.0 * std::log(log2_T))));
}

BlockScheme build_scheme_from_log(double log_T, std::span<const double> beta,
                                  std::optional<double> exponent_scale_override,
                                  std::optional<int> max_square_level) {
    if (!(log_T >= kLog16) || !std::isfinite(log_T)) throw DomainError("block scheme needs T >= 16");
    if (beta.empty()) throw DomainError("block scheme needs at least one beta");

    BlockScheme s;
    s.log_T = log_T;
    s.log2_T = std::log(log_T);
    s.beta.assign(beta.begin(), beta.end());
    s.beta_star = beta_star(beta);
    if (exponent_scale_override) {
        if (!(*exponent_scale_override > 0.0)) throw DomainError("exponent scale must be > 0");
        s.exponent_scale = *exponent_scale_override;
        s.scale_overridden = true;
    } else {
        s.exponent_scale = 1.0 / (200.0 * s.beta_star * s.beta_star);
    }

    // T_j <= T^c  <=>  e^{j-1} / (log_2 T)^2 <= c; a relative slack of 1e-12 keeps
    // exact boundary cases (c chosen to hit T_j) on the inclusive side.
    const double l2sq = s.log2_T * s.log2_T;
    s.log_T_seq = {std::log(2.0)};
    for (int j = 1;; ++j) {
        const double ratio = std::exp(static_cast<double>(j - 1)) / l2sq;
        if (ratio > s.exponent_scale * (1.0 + 1e-12)) break;
        const double lt = log_T * ratio;
        if (!(lt > s.log_T_seq.back())) break;  // T_j must exceed T_{j-1}
        s.log_T_seq.push_back(lt);
        s.L = j;
    }
    s.degenerate = (s.L == 0);
    for (int j = 1; j <= s.L; ++j) s.K_seq.push_back(s.K(j));

    if (max_square_level) {
        if (*max_square_level < 1) throw DomainError("max square level must be >= 1");
        s.max_square_level = *max_square_level;
    } else {
        s.max_square_level = std::max(1, static_cast<int>(std::floor(s.log2_T)));
    }
    return s;
}

BlockScheme build_scheme(double T, std::span<const double> beta, std::optional<double> exponent_scale_override,
                         std::optional<int> max_square_level) {
    if (!(T >= 16.0)) throw DomainError("block scheme needs T >= 16");
    return build_scheme_from_log(std::log(T), beta, exponent_scale_override, max_square_level);
}

PointClass classify_values(double t, const PointValues& v, const BlockScheme& scheme) {
    PointClass c;
    c.t = t;
    if (scheme.degenerate) {
        c.degenerate = true;
    } else {
        if (v.P_abs.size() != static_cast<std::size_t>(scheme.L))
            throw DomainError("point values do not match the scheme's L");
        for (int j = 1; j <= scheme.L && c.good; ++j) {
            const auto& row = v.P_abs[j - 1];
            if (row.size() != static_cast<std::size_t>(scheme.L - j + 1))
                throw DomainError("point values row has the wrong length");
            const double K = scheme.K_seq[j - 1];
            for (double p : row)
                if (p > K) {
                    c.good = false;
                    c.bad_index = j;
                    break;
                }
        }
    }
    if (v.Q_abs.size() != static_cast<std::size_t>(scheme.max_square_level))
        throw DomainError("point values do not match the square levels");
    for (int l = scheme.max_square_level; l >= 1; --l)
        if (v.Q_abs[l - 1] > BlockScheme::J(l)) {
            c.square_index = l;
            break;
        }
    return c;
}

Classifier::Classifier(BlockScheme scheme, const PrimeTable& table, Abscissa abscissa)
    : scheme_(std::move(scheme)), abscissa_(abscissa) {
    const double sq_top = std::exp(static_cast<double>(scheme_.max_square_level + 1));
    table.require_covers(sq_top);
    if (!scheme_.degenerate) table.require_covers(scheme_.T_at(scheme_.L));

    for (int j = 1; j <= scheme_.L; ++j) {
        const auto ps = table.in_range(scheme_.T_at(j - 1), scheme_.T_at(j));
        for (int s = j; s <= scheme_.L; ++s) {
            Block b;
            b.j = j;
            b.s = s;
            const double logX = scheme_.log_T_seq[s];
            b.sigma = (abscissa_ == Abscissa::half ? 0.5 : 1.0) + 1.0 / logX;
            for (std::uint64_t p : ps) {
                const double lp = std::log(static_cast<double>(p));
                b.logs.push_back(lp);
                b.amps.push_back((logX - lp) / logX * std::exp(-b.sigma * lp));
            }
            blocks_.push_back(std::move(b));
        }
    }
    for (int l = 1; l <= scheme_.max_square_level; ++l) {
        std::vector<double> logs, amps;
        for (std::uint64_t p : table.in_range(std::exp(double(l)), std::exp(double(l + 1)))) {
            const double pd = static_cast<double>(p);
            logs.push_back(2.0 * std::log(pd));  // p^{-2it}
            amps.push_back(0.5 / pd);            // p^{-1}/2 at s = 1/2
        }
        sq_logs_.push_back(std::move(logs));
        sq_amps_.push_back(std::move(amps));
    }
}

PointValues Classifier::values(double t) const {
    PointValues v;
    v.P_abs.resize(scheme_.L);
    for (const auto& b : blocks_) v.P_abs[b.j - 1].push_back(modulus_at(b.logs, b.amps, t));
    v.Q_abs.reserve(sq_logs_.size());
    for (std::size_t l = 0; l < sq_logs_.size(); ++l) v.Q_abs.push_back(modulus_at(sq_logs_[l], sq_amps_[l], t));
    return v;
}

PointClass Classifier::classify(double t) const { return classify_values(t, values(t), scheme_); }

std::vector<PointClass> Classifier::classify_grid_reference(double t0, double step, std::size_t count) const {
    std::vector<PointClass> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(classify(static_cast<double>(static_cast<long double>(t0) + static_cast<long double>(k) * step)));
    return out;
}

std::vector<PointClass> Classifier::classify_grid(double t0, double step, std::size_t count) const {
    std::vector<PointClass> out(count);
    const std::size_t nchunks = chunk_count(count, kDefaultChunk);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t k1 = std::min(count, (c + 1) * kDefaultChunk);
        for (std::size_t k = c * kDefaultChunk; k < k1; ++k)
            out[k] = classify(static_cast<double>(static_cast<long double>(t0) + static_cast<long double>(k) * step));
    }
    return out;
}

ShiftPartitionLabel label_from_classes(std::span<const PointClass> shifted, const BlockScheme& scheme) {
    ShiftPartitionLabel lab;
    for (std::size_t k = 0; k < shifted.size(); ++k) {
        const int idx = static_cast<int>(k) + 1;
        if (shifted[k].good)
            lab.A.push_back(idx);
        else
            lab.f.emplace_back(idx, *shifted[k].bad_index);
        lab.ell.push_back(shifted[k].square_index);
    }
    // Order the bad shifts by block index so f is non-decreasing along its domain.
    std::stable_sort(lab.f.begin(), lab.f.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    lab.ell_inf = lab.ell.empty() ? 0 : *std::max_element(lab.ell.begin(), lab.ell.end());
    for (std::size_t k = 0; k < lab.ell.size(); ++k)
        if (lab.ell[k] == lab.ell_inf) {
            lab.k_star = static_cast<int>(k) + 1;
            break;
        }
    lab.within_ell_cap = lab.ell_inf <= scheme.ell_cap();
    return lab;
}

ShiftPartitionLabel classify_shift_tuple(double t, const ShiftSpec& spec, const Classifier& classifier) {
    spec.validate();
    std::vector<PointClass> cls;
    cls.reserve(spec.m());
    for (double a : spec.alpha) cls.push_back(classifier.classify(t + a));
    return label_from_classes(cls, classifier.scheme());
}

double bad_set_bound(const BlockScheme& scheme, BadSetKind kind, int index) {
    if (kind == BadSetKind::B) {
        if (index < 1) throw DomainError("B_j needs j >= 1");
        const double l2 = scheme.log2_T;
        if (index == 1) return std::exp(-l2 * l2 / 5.0);
        return std::exp(-l2 * l2 * l2 * std::exp(-double(index)) / 3.0);
    }
    if (index < 0) throw DomainError("C_l needs l >= 0");
    if (index == 0) return 1.0;
    return std::exp(-index * std::exp(0.75 * index));
}

BadMeasure measure_from_classes(std::span<const PointClass> classes, const BlockScheme& scheme, BadSetKind kind,
                                int index) {
    if (classes.empty()) throw DomainError("bad-set measure needs a nonempty grid");
    BadMeasure m;
    m.kind = kind;
    m.index = index;
    m.points = classes.size();
    for (const auto& c : classes) {
        const bool hit = kind == BadSetKind::B ? (c.bad_index && *c.bad_index == index) : c.square_index == index;
        if (hit) ++m.hits;
    }
    m.fraction = static_cast<double>(m.hits) / static_cast<double>(m.points);
    m.bound = bad_set_bound(scheme, kind, index);
    return m;
}

BadMeasure estimate_bad_measure(const Classifier& classifier, double t0, double step, std::size_t count,
                                BadSetKind kind, int index) {
    if (count == 0) throw DomainError("bad-set measure needs a nonempty grid");
    if (!(step > 0.0)) throw DomainError("grid step must be > 0");
    const double T = classifier.scheme().T();
    const double t_last = static_cast<double>(static_cast<long double>(t0) + static_cast<long double>(count - 1) * step);
    if (!(t0 >= T / 2 && t_last <= 2.5 * T)) throw DomainError("grid must lie inside [T/2, 5T/2]");
    const auto classes = classifier.classify_grid(t0, step, count);
    return measure_from_classes(classes, classifier.scheme(), kind, index);
}

}  // namespace zetacorr
