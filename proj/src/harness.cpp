#include "zetacorr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "zetacorr/decomposition.hpp"
#include "zetacorr/dirichlet.hpp"
#include "zetacorr/errors.hpp"
#include "zetacorr/expr.hpp"
#include "zetacorr/primes.hpp"
#include "zetacorr/zeta.hpp"

namespace zetacorr {

namespace fs = std::filesystem;

namespace {

// ---- parameter access -------------------------------------------------------

const json& need(const json& p, const char* key) {
    if (!p.is_object() || !p.contains(key)) throw ConfigError(std::string("missing parameter \"") + key + "\"");
    return p.at(key);
}

double num(const json& p, const char* key) {
    const json& v = need(p, key);
    if (!v.is_number()) throw ConfigError(std::string("parameter \"") + key + "\" must be a number");
    return v.get<double>();
}

double num_or(const json& p, const char* key, double fallback) { return p.contains(key) ? num(p, key) : fallback; }

long long integer(const json& p, const char* key) {
    const double v = num(p, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15)
        throw ConfigError(std::string("parameter \"") + key + "\" must be an integer");
    return static_cast<long long>(v);
}

long long integer_or(const json& p, const char* key, long long fallback) {
    return p.contains(key) ? integer(p, key) : fallback;
}

std::string str(const json& p, const char* key) {
    const json& v = need(p, key);
    if (!v.is_string()) throw ConfigError(std::string("parameter \"") + key + "\" must be a string");
    return v.get<std::string>();
}

std::optional<fs::path> path_opt(const json& p, const char* key) {
    if (!p.contains(key) || p.at(key).is_null()) return std::nullopt;
    return fs::path(str(p, key));
}

std::vector<double> num_array(const json& p, const char* key) {
    const json& v = need(p, key);
    if (!v.is_array() || v.empty()) throw ConfigError(std::string("parameter \"") + key + "\" must be a nonempty array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(std::string("parameter \"") + key + "\" must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void check_alpha_shape(const json& a) {
    if (a.is_array()) {
        if (a.empty()) throw ConfigError("alpha must be nonempty");
        for (const auto& e : a)
            if (!e.is_number() && !e.is_string()) throw ConfigError("alpha entries must be numbers or formulas");
        return;
    }
    if (a.is_object() && a.contains("formula")) {
        const json& f = a.at("formula");
        if (f.is_string()) return;
        if (f.is_array() && !f.empty() && std::all_of(f.begin(), f.end(), [](const json& e) { return e.is_string(); }))
            return;
    }
    throw ConfigError("alpha must be an array or {\"formula\": ...}");
}

int rs_terms_of(const json& p) {
    const long long k = integer_or(p, "rs_terms", kDefaultRsTerms);
    if (k < 0 || k > kMaxRsTerms) throw ConfigError("rs_terms must lie in [0, " + std::to_string(kMaxRsTerms) + "]");
    return static_cast<int>(k);
}

ShiftSpec spec_from(const json& p) {
    ShiftSpec s;
    s.T = num(p, "T");
    s.alpha = resolve_alpha(need(p, "alpha"), s.T);
    s.beta = num_array(p, "beta");
    if (s.alpha.size() != s.beta.size()) throw ConfigError("alpha and beta lengths differ");
    return s;
}

std::string hexfloat(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

// ---- sieve sizing -----------------------------------------------------------

PrimeTable sieve_for(double x, RunReport& rep) {
    const double need_limit = std::max(100.0, std::ceil(x) + 1.0);
    if (need_limit > static_cast<double>(kMaxSieveLimit)) {
        rep.warn("insufficient sieve: " + std::to_string(need_limit) + " exceeds the sieve cap");
        throw InsufficientSieveError("required prime range exceeds the sieve cap of 1e9");
    }
    return sieve_primes(static_cast<std::uint64_t>(need_limit));
}

// ---- grid caches ------------------------------------------------------------

std::string default_cache_name(const GridRequest& req) {
    return "zgrid_" + hexfloat(req.t0) + "_" + hexfloat(req.t1) + "_" + hexfloat(req.step) + "_rs" +
           std::to_string(req.correction_terms) + (req.modulus_only ? "_mod" : "_cplx") + ".bin";
}

ZetaGrid obtain_grid(const GridRequest& req, const json& params, const ExperimentConfig& cfg, RunReport& rep) {
    std::optional<fs::path> path = path_opt(params, "cache");
    if (!path && cfg.cache_dir) path = *cfg.cache_dir / default_cache_name(req);

    if (path && fs::exists(*path)) {
        ZetaGrid g = cache_read(*path);
        if (g.step != req.step) throw CacheError("cached grid " + path->string() + " has a different step");
        const double off = (req.t0 - g.t0) / g.step;
        const std::size_t need_count = grid_sample_count(req);
        if (off < -1e-9 || std::abs(off - std::round(off)) > 1e-6 ||
            static_cast<std::size_t>(std::llround(off)) + need_count > g.size())
            throw CacheError("cached grid " + path->string() + " does not cover the requested range");
        rep.caches.push_back({path->string(), kGridFileVersion, g.size(), false});
        return g;
    }
    ZetaGrid g = sample_critical_line(req);
    if (path) {
        if (path->has_parent_path()) fs::create_directories(path->parent_path());
        cache_write(g, *path);
        rep.caches.push_back({path->string(), kGridFileVersion, g.size(), true});
    }
    return g;
}

void note_snapping(const std::vector<SnappedShift>& shifts, double step, RunReport& rep) {
    for (std::size_t k = 0; k < shifts.size(); ++k) {
        const double r = shifts[k].residual();
        if (std::abs(r) > 1e-9 * step) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "alpha_%zu snapped to the grid: residual %.3e", k + 1, r);
            rep.warn(buf);
        }
    }
}

json shifts_json(const std::vector<SnappedShift>& shifts) {
    json a = json::array();
    for (const auto& s : shifts) a.push_back({{"alpha", s.alpha}, {"snapped", s.snapped}, {"residual", s.residual()}});
    return a;
}

// ---- kinds ------------------------------------------------------------------

void run_sieve(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    const long long limit = integer(p, "limit");
    if (limit < 2) throw DomainError("sieve limit must be >= 2");
    const auto seg = static_cast<std::uint64_t>(integer_or(p, "segment_size", static_cast<long long>(kDefaultSegmentSize)));
    const PrimeTable t = sieve_primes(static_cast<std::uint64_t>(limit), seg);
    if (auto out = path_opt(p, "out")) write_prime_table(t, *out);
    rep.results["limit"] = t.limit();
    rep.results["count"] = t.size();
    rep.results["largest"] = t.size() ? t.primes().back() : 0;
    rep.results["file_version"] = kPrimeFileVersion;
}

void run_sample(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    GridRequest req;
    req.t0 = num(p, "t0");
    req.t1 = num(p, "t1");
    req.step = num_or(p, "step", req.step);
    req.correction_terms = rs_terms_of(p);
    req.modulus_only = p.value("modulus_only", false);
    const ZetaGrid g = sample_critical_line(req);
    if (auto out = path_opt(p, "out")) cache_write(g, *out);
    double max_mod = 0.0, t_max = g.t0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.modulus(k) > max_mod) {
            max_mod = g.modulus(k);
            t_max = g.t(k);
        }
    rep.results["samples"] = g.size();
    rep.results["t0"] = g.t0;
    rep.results["step"] = g.step;
    rep.results["max_modulus"] = max_mod;
    rep.results["t_at_max"] = t_max;
    rep.results["error_bound"] = riemann_siegel_error_bound(g.t0, req.correction_terms);
    rep.results["file_version"] = kGridFileVersion;
}

void run_classify(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    const double T = num(p, "T");
    const std::vector<double> beta = num_array(p, "beta");
    std::optional<double> scale;
    if (p.contains("exponent_scale")) scale = num(p, "exponent_scale");
    std::optional<int> max_sq;
    if (p.contains("max_square_level")) max_sq = static_cast<int>(integer(p, "max_square_level"));
    const std::string absc = p.contains("abscissa") ? str(p, "abscissa") : "half";
    if (absc != "half" && absc != "one") throw ConfigError("abscissa must be \"half\" or \"one\"");

    const BlockScheme scheme = build_scheme(T, beta, scale, max_sq);
    if (scheme.degenerate) rep.warn("degenerate block scheme: L = 0, every point is classified good");

    const double t0 = num_or(p, "t0", T);
    const double t1 = num_or(p, "t1", 2.0 * T);
    const double step = num_or(p, "step", (t1 - t0) / 1e5);
    if (!(step > 0.0) || !(t1 >= t0)) throw DomainError("classify grid needs t1 >= t0 and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / step)) + 1;

    double cover = std::exp(static_cast<double>(scheme.max_square_level + 1));
    if (!scheme.degenerate) cover = std::max(cover, scheme.T_at(scheme.L));
    const PrimeTable table = sieve_for(cover, rep);
    const Classifier cls(scheme, table, absc == "half" ? Abscissa::half : Abscissa::one);
    const auto classes = cls.classify_grid(t0, step, count);

    std::size_t good = 0;
    std::vector<std::size_t> bad(scheme.L, 0);
    std::vector<std::size_t> sq(scheme.max_square_level + 1, 0);
    bool exhaustive = true;
    for (const auto& c : classes) {
        const int memberships = (c.good ? 1 : 0) + (c.bad_index ? 1 : 0);
        if (memberships != 1) exhaustive = false;
        if (c.good) ++good;
        if (c.bad_index) ++bad[*c.bad_index - 1];
        ++sq[c.square_index];
    }
    const double n = static_cast<double>(count);
    json bad_f = json::array(), sq_f = json::array(), bounds = json::array();
    for (int j = 1; j <= scheme.L; ++j) {
        bad_f.push_back(static_cast<double>(bad[j - 1]) / n);
        bounds.push_back({{"set", "B"}, {"index", j}, {"bound", bad_set_bound(scheme, BadSetKind::B, j)}});
    }
    for (int l = 0; l <= scheme.max_square_level; ++l) {
        sq_f.push_back(static_cast<double>(sq[l]) / n);
        bounds.push_back({{"set", "C"}, {"index", l}, {"bound", bad_set_bound(scheme, BadSetKind::C, l)}});
    }
    json K = json::array(), Tj = json::array();
    for (double k : scheme.K_seq) K.push_back(k);
    for (double lt : scheme.log_T_seq) Tj.push_back(std::exp(lt));

    rep.results["points"] = count;
    rep.results["good_fraction"] = static_cast<double>(good) / n;
    rep.results["bad_fractions"] = bad_f;
    rep.results["square_fractions"] = sq_f;
    rep.results["bounds"] = bounds;
    rep.results["partition_exhaustive"] = exhaustive;
    rep.results["L"] = scheme.L;
    rep.results["exponent_scale"] = scheme.exponent_scale;
    rep.results["beta_star"] = scheme.beta_star;
    rep.results["T_seq"] = Tj;
    rep.results["K"] = K;
    rep.results["ell_cap"] = scheme.ell_cap();
    rep.results["max_square_level"] = scheme.max_square_level;

    if (p.contains("alpha")) {
        ShiftSpec spec{resolve_alpha(p.at("alpha"), T), beta, T};
        if (spec.alpha.size() != beta.size()) throw ConfigError("alpha and beta lengths differ");
        spec.validate();
        std::size_t all_good = 0, capped = 0;
        // shifted points reuse the grid only when the shifts are grid multiples, so
        // the tuple labels are computed directly
        for (std::size_t k = 0; k < count; ++k) {
            const auto lab = classify_shift_tuple(classes[k].t, spec, cls);
            if (lab.A.size() == spec.m()) ++all_good;
            if (lab.within_ell_cap) ++capped;
        }
        rep.results["tuple_all_good_fraction"] = static_cast<double>(all_good) / n;
        rep.results["tuple_within_ell_cap_fraction"] = static_cast<double>(capped) / n;
    }
}

void run_predict(const ExperimentConfig& cfg, RunReport& rep) {
    const ShiftSpec spec = spec_from(cfg.params);
    rep.results["prediction"] = predict_bound(spec);
    json a = json::array();
    for (double x : spec.alpha) a.push_back(x);
    rep.results["alpha"] = a;
    if (spec.m() == 2) rep.results["nsw_F"] = nsw_F(spec.alpha[0], spec.alpha[1], spec.T);
}

void run_moment(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    const ShiftSpec spec = spec_from(p);
    const double step = num_or(p, "step", 0.05);
    const GridRequest req = moment_grid_request(spec, step, rs_terms_of(p));
    const ZetaGrid grid = obtain_grid(req, p, cfg, rep);
    const MomentReport r = moment_report(spec, grid);
    note_snapping(r.shifts, grid.step, rep);
    rep.results["moment"] = r.moment;
    rep.results["prediction"] = r.prediction;
    rep.results["ratio"] = r.ratio;
    rep.results["quadrature_step"] = r.quadrature_step;
    rep.results["step_halving_delta"] = r.step_halving_delta;
    rep.results["trapezoid"] = r.trapezoid;
    if (r.nsw_value) rep.results["nsw_F"] = *r.nsw_value;
    rep.results["shifts"] = shifts_json(r.shifts);
}

void run_curve(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    const double T = num(p, "T");
    double b = 0.0;
    if (need(p, "beta").is_array()) {
        const auto bv = num_array(p, "beta");
        if (bv.size() != 2 || bv[0] != bv[1]) throw ConfigError("curve needs beta = [b, b]");
        b = bv[0];
    } else {
        b = num(p, "beta");
    }
    // same grammar as alpha: numbers or formulas in T, e.g. "1/log(T)"
    const std::vector<double> deltas = resolve_alpha(need(p, "deltas"), T);
    const double step = num_or(p, "step", 0.05);

    // one grid covering every delta
    const double lo = std::min(0.0, *std::min_element(deltas.begin(), deltas.end()));
    const double hi = std::max(0.0, *std::max_element(deltas.begin(), deltas.end()));
    const ShiftSpec envelope{{0.0, lo, hi}, {b, b, b}, T};
    const GridRequest req = moment_grid_request(envelope, step, rs_terms_of(p));
    const ZetaGrid grid = obtain_grid(req, p, cfg, rep);
    const auto rows = correlation_curve(T, b, deltas, grid);
    note_snapping(snap_shifts(deltas, grid.step), grid.step, rep);

    json table = json::array();
    for (const auto& r : rows)
        table.push_back({{"delta", r.delta}, {"moment", r.moment}, {"prediction", r.prediction}, {"ratio", r.ratio},
                         {"nsw_F", r.nsw}, {"step_halving_delta", r.step_halving_delta}});
    rep.results["rows"] = table;
    rep.results["quadrature_step"] = step;
    if (auto out = path_opt(p, "out")) write_text(*out, curve_csv(rows));
    if (auto svg = path_opt(p, "plot")) emit_plot(rows, *svg);
}

void run_verify(const ExperimentConfig& cfg, RunReport& rep) {
    const json& p = cfg.params;
    const std::string suite = str(p, "suite");
    const long long trials = integer(p, "trials");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    rep.results = verify_suite(suite, static_cast<std::size_t>(trials), cfg.seed);
    if (auto csv = path_opt(p, "coeff_csv")) {
        // the b(n) table of one representative instance
        const PrimeTable table = sieve_primes(1000);
        TruncSpec s{PrimeInterval(2.0, 13.0), 100.0, 1.0, 20, 100000};
        const std::vector<ShiftFactor> f{{s, 0.0}, {s, 1.0}};
        write_coeff_csv(product_coeffs(f, table), *csv);
    }
}

// ---- verify suites ----------------------------------------------------------

std::complex<double> random_coeff(SplitMix64& rng) { return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}; }

json suite_lemma22(std::size_t trials, SplitMix64& rng) {
    std::size_t violations = 0, literal_violations = 0, inconclusive = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trials; ++i) {
        static constexpr double kK[] = {5.0, 10.0, 19.18};
        const double K = kK[rng.below(3)];
        const double bstar = rng.uniform(1.0, 3.0);
        const double beta = rng.uniform(0.0, bstar);
        const double r = 2.0 * K * std::sqrt(rng.uniform());
        const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const auto res = lemma22_check(std::polar(r, th), beta, bstar, K);
        if (!res.holds) ++violations;
        if (!res.literal_holds) ++literal_violations;
        if (!res.conclusive) ++inconclusive;
        min_margin = std::min(min_margin, res.margin);
    }
    return {{"violations", violations}, {"literal_violations", literal_violations},
            {"inconclusive", inconclusive}, {"min_margin", min_margin}};
}

json suite_lemma23(std::size_t trials, SplitMix64& rng) {
    const double T = 1e6;
    std::size_t violations = 0;
    double worst = 0.0;  // max |exact - diag| / bound
    for (std::size_t i = 0; i < trials; ++i) {
        const std::size_t size = 1 + rng.below(1000);
        std::vector<std::pair<std::uint64_t, std::complex<double>>> pairs;
        std::vector<char> used(10001, 0);
        while (pairs.size() < size) {
            const std::uint64_t n = 1 + rng.below(10000);
            if (used[n]) continue;
            used[n] = 1;
            pairs.emplace_back(n, random_coeff(rng));
        }
        const auto t = CoeffTable::from_pairs(std::move(pairs), PrimeInterval(1.0, 1e4), 13);
        double diag = 0.0;
        for (const auto& c : t.coeff) diag += std::norm(c);
        diag *= T;
        const double dev = std::abs(exact_mv_integral(t, T) - diag);
        const double bound = mv_offdiagonal_bound(t);
        if (dev > bound + 1e-12 * diag) ++violations;
        if (bound > 0.0) worst = std::max(worst, dev / bound);
    }
    return {{"violations", violations}, {"T", T}, {"max_deviation_over_bound", worst}};
}

json suite_lemma24(std::size_t trials, SplitMix64& rng) {
    const double T = 1e6;
    const PrimeTable table = sieve_primes(200);
    const auto big = table.in_range(50.0, 200.0);
    std::size_t violations = 0;
    double worst = 0.0;  // max (|lhs - rhs| / rhs) / (10 N / T)
    for (std::size_t i = 0; i < trials; ++i) {
        // B: 1 and primes in (50, 200]; A: odd numbers (all 50-smooth) up to 1000 / max B
        std::vector<std::pair<std::uint64_t, std::complex<double>>> a, b;
        b.emplace_back(1, random_coeff(rng));
        std::uint64_t max_b = 1;
        for (std::uint64_t q : big)
            if (rng.uniform() < 0.5) {
                b.emplace_back(q, random_coeff(rng));
                max_b = q;
            }
        if (max_b == 1) {
            max_b = big[rng.below(big.size())];
            b.emplace_back(max_b, random_coeff(rng));
        }
        const std::uint64_t max_a = 1000 / max_b;
        a.emplace_back(1, random_coeff(rng));
        for (std::uint64_t n = 3; n <= max_a; n += 2)
            if (rng.uniform() < 0.5) a.emplace_back(n, random_coeff(rng));
        const std::vector<CoeffTable> tabs{CoeffTable::from_pairs(std::move(a), PrimeInterval(2.0, 50.0), 3),
                                           CoeffTable::from_pairs(std::move(b), PrimeInterval(50.0, 200.0), 1)};
        const auto s = splitting_check(tabs, T);
        const double rel = std::abs(s.lhs - s.rhs) / s.rhs;
        const double tol = 10.0 * static_cast<double>(s.product_length) / T;
        if (rel > tol) ++violations;
        worst = std::max(worst, rel / tol);
    }
    return {{"violations", violations}, {"T", T}, {"max_relative_over_tolerance", worst}};
}

json suite_lemma33(std::size_t trials, SplitMix64& rng) {
    const PrimeTable table = sieve_primes(1000);
    const PrimeInterval I(2.0, 13.0);
    const double X = 100.0;
    const std::uint64_t n_max = 4826809;  // 13^6
    std::size_t violations = 0, bp_violations = 0;
    double max_bp_dev = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const std::size_t m = 1 + rng.below(3);
        std::vector<double> alpha(m), beta(m);
        for (std::size_t k = 0; k < m; ++k) {
            alpha[k] = rng.uniform(-100.0, 100.0);
            beta[k] = rng.uniform(0.0, 3.0);
        }
        const double bstar = beta_star(beta);
        std::vector<ShiftFactor> f;
        for (std::size_t k = 0; k < m; ++k) f.push_back({TruncSpec{I, X, beta[k], 20, n_max}, alpha[k]});
        const CoeffTable b = product_coeffs(f, table);
        for (std::uint64_t p : table.in_range(I.lo, I.hi)) {
            std::complex<double> expect = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                expect += beta[k] * std::polar(1.0, -alpha[k] * std::log(static_cast<double>(p)));
            expect *= taper_weight(p, X);
            const double dev = std::abs(b.at(p) - expect);
            max_bp_dev = std::max(max_bp_dev, dev);
            if (dev > 1e-12) ++bp_violations;
            std::uint64_t pr = p;
            double fact = 1.0;
            for (int r = 1; r <= 6; ++r, pr *= p) {
                fact *= r;
                const double bound = std::pow(bstar * static_cast<double>(m), r) / fact;
                if (std::abs(b.at(pr)) > bound * (1.0 + 1e-12)) ++violations;
            }
        }
    }
    return {{"violations", violations}, {"b_p_violations", bp_violations}, {"max_b_p_deviation", max_bp_dev}};
}

json suite_prop34(std::size_t trials, SplitMix64& rng) {
    const PrimeTable table = sieve_primes(1000);
    std::size_t violations = 0;
    double worst = 0.0;  // max lhs / rhs
    for (std::size_t i = 0; i < trials; ++i) {
        const std::size_t m = 1 + rng.below(2);
        const double P = rng.uniform(10.0, 40.0);
        const double X = 2.0 * P;
        const PrimeInterval I(2.0, P);
        std::vector<ShiftFactor> f;
        for (std::size_t k = 0; k < m; ++k)
            f.push_back({TruncSpec{I, X, rng.uniform(0.0, 2.0), 12, 100000}, rng.uniform(-20.0, 20.0)});
        const CoeffTable b = product_coeffs(f, table);
        const double sigma0 = 0.5 + 1.0 / std::log(X);
        const double c2 = euler_tail_constant(b, sigma0, table);
        const double lhs = diagonal_sum(b, sigma0);
        const double rhs = euler_bound(b, sigma0, c2, table);
        if (lhs > rhs * (1.0 + 1e-12)) ++violations;
        worst = std::max(worst, lhs / rhs);
    }
    return {{"violations", violations}, {"max_lhs_over_rhs", worst}};
}

}  // namespace

// ---- public -----------------------------------------------------------------

RunKind parse_kind(const std::string& name) {
    static const std::pair<const char*, RunKind> kinds[] = {
        {"sieve", RunKind::sieve},     {"sample", RunKind::sample}, {"classify", RunKind::classify},
        {"moment", RunKind::moment},   {"predict", RunKind::predict}, {"curve", RunKind::curve},
        {"verify", RunKind::verify}};
    for (const auto& [n, k] : kinds)
        if (name == n) return k;
    throw ConfigError("unknown experiment kind \"" + name + "\"");
}

std::string kind_name(RunKind kind) {
    switch (kind) {
    case RunKind::sieve: return "sieve";
    case RunKind::sample: return "sample";
    case RunKind::classify: return "classify";
    case RunKind::moment: return "moment";
    case RunKind::predict: return "predict";
    case RunKind::curve: return "curve";
    case RunKind::verify: return "verify";
    }
    return "unknown";
}

json load_config_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config " + path.string());
    try {
        json j = json::parse(is);
        if (!j.is_object()) throw ConfigError("config " + path.string() + " is not a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
}

std::vector<double> resolve_alpha(const json& alpha, double T) {
    check_alpha_shape(alpha);
    std::vector<double> out;
    auto one = [&](const json& e) {
        out.push_back(e.is_number() ? e.get<double>() : evaluate_formula(e.get<std::string>(), T));
    };
    if (alpha.is_array()) {
        for (const auto& e : alpha) one(e);
    } else {
        const json& f = alpha.at("formula");
        if (f.is_string())
            one(f);
        else
            for (const auto& e : f) one(e);
    }
    return out;
}

void validate(const ExperimentConfig& cfg) {
    const json& p = cfg.params;
    if (!p.is_object()) throw ConfigError("parameters must be a JSON object");
    switch (cfg.kind) {
    case RunKind::sieve:
        integer(p, "limit");
        integer_or(p, "segment_size", 1);
        break;
    case RunKind::sample:
        num(p, "t0");
        num(p, "t1");
        num_or(p, "step", 1.0);
        rs_terms_of(p);
        break;
    case RunKind::classify:
        num(p, "T");
        num_array(p, "beta");
        for (const char* k : {"t0", "t1", "step", "exponent_scale"}) num_or(p, k, 1.0);
        integer_or(p, "max_square_level", 1);
        if (p.contains("alpha")) check_alpha_shape(p.at("alpha"));
        break;
    case RunKind::predict:
    case RunKind::moment:
        num(p, "T");
        check_alpha_shape(need(p, "alpha"));
        num_array(p, "beta");
        num_or(p, "step", 1.0);
        rs_terms_of(p);
        break;
    case RunKind::curve:
        num(p, "T");
        if (!need(p, "beta").is_array()) num(p, "beta");
        check_alpha_shape(need(p, "deltas"));
        num_or(p, "step", 1.0);
        rs_terms_of(p);
        break;
    case RunKind::verify:
        str(p, "suite");
        integer(p, "trials");
        break;
    }
    for (const char* k : {"out", "plot", "cache", "coeff_csv"})
        if (p.contains(k) && !p.at(k).is_string()) throw ConfigError(std::string("\"") + k + "\" must be a path string");
}

void RunReport::warn(const std::string& w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
}

RunReport run(const ExperimentConfig& cfg) {
    validate(cfg);
    RunReport rep;
    rep.config = {{"kind", kind_name(cfg.kind)}, {"seed", cfg.seed}, {"parameters", cfg.params}};
    json outs = json::array();
    for (const auto& o : cfg.output_paths) outs.push_back(o.string());
    rep.config["output_paths"] = outs;

    const auto start = std::chrono::steady_clock::now();
    switch (cfg.kind) {
    case RunKind::sieve: run_sieve(cfg, rep); break;
    case RunKind::sample: run_sample(cfg, rep); break;
    case RunKind::classify: run_classify(cfg, rep); break;
    case RunKind::moment: run_moment(cfg, rep); break;
    case RunKind::predict: run_predict(cfg, rep); break;
    case RunKind::curve: run_curve(cfg, rep); break;
    case RunKind::verify: run_verify(cfg, rep); break;
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string report_payload(const RunReport& rep) {
    json caches = json::array();
    for (const auto& c : rep.caches) caches.push_back({{"path", c.path}, {"version", c.version}, {"samples", c.samples}});
    const json j = {{"config", rep.config}, {"results", rep.results}, {"warnings", rep.warnings}, {"caches", caches}};
    return j.dump(2) + "\n";
}

std::string report_sidecar(const RunReport& rep) {
    json built = json::array();
    for (const auto& c : rep.caches) built.push_back({{"path", c.path}, {"built", c.built}});
    return json{{"wall_seconds", rep.wall_seconds}, {"caches", built}}.dump(2) + "\n";
}

void write_report(const RunReport& rep, const fs::path& path) {
    write_text(path, report_payload(rep));
    write_text(fs::path(path.string() + ".timing.json"), report_sidecar(rep));
}

json verify_suite(const std::string& suite, std::size_t trials, std::uint64_t seed) {
    SplitMix64 rng(seed);
    json r;
    if (suite == "lemma22")
        r = suite_lemma22(trials, rng);
    else if (suite == "lemma23")
        r = suite_lemma23(trials, rng);
    else if (suite == "lemma24")
        r = suite_lemma24(trials, rng);
    else if (suite == "lemma33")
        r = suite_lemma33(trials, rng);
    else if (suite == "prop34")
        r = suite_prop34(trials, rng);
    else
        throw ConfigError("unknown verify suite \"" + suite + "\"");
    r["suite"] = suite;
    r["trials"] = trials;
    r["seed"] = seed;
    return r;
}

}  // namespace zetacorr
