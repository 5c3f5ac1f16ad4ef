// zetacorr: command-line front end for the experiment harness.
//
//   zetacorr sieve --limit N --out primes.bin
//   zetacorr sample --t0 A --t1 B --step H --rs-terms K --out grid.bin
//   zetacorr classify --config cls.json [--t0 --t1 --step] --out report.json
//   zetacorr moment --config exp.json [--cache grid.bin] [--report r.json]
//   zetacorr predict --config exp.json
//   zetacorr curve --config family.json --out curve.csv [--plot curve.svg]
//   zetacorr verify lemma22|lemma23|lemma24|lemma33|prop34 --trials N --seed S --report out.json
//
// Reports go to stdout unless a report path is given. Exit codes: 2 config,
// 3 cache, 4 domain, 5 resource.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <new>
#include <optional>

#include "CLI11.hpp"

#include "zetacorr/errors.hpp"
#include "zetacorr/harness.hpp"
#include "zetacorr/parallel.hpp"

using namespace zetacorr;

namespace {

struct Flags {
    int threads = 0;
    std::uint64_t seed = 1;
    std::string config, report, out, plot, cache, coeff_csv, suite;
    std::optional<double> t0, t1, step;
    std::optional<long long> limit, segment, rs_terms, trials;
    bool modulus_only = false;
};

long long default_trials(const std::string& suite) {
    if (suite == "lemma22") return 10000;
    if (suite == "lemma33") return 1000;
    if (suite == "lemma24" || suite == "prop34") return 50;
    return 100;
}

int execute(RunKind kind, const Flags& f) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.seed = f.seed;
    if (!f.config.empty()) cfg.params = load_config_file(f.config);
    json& p = cfg.params;
    if (f.t0) p["t0"] = *f.t0;
    if (f.t1) p["t1"] = *f.t1;
    if (f.step) p["step"] = *f.step;
    if (f.limit) p["limit"] = *f.limit;
    if (f.segment) p["segment_size"] = *f.segment;
    if (f.rs_terms) p["rs_terms"] = *f.rs_terms;
    if (f.modulus_only) p["modulus_only"] = true;
    if (!f.cache.empty()) p["cache"] = f.cache;
    if (!f.plot.empty()) p["plot"] = f.plot;
    if (!f.coeff_csv.empty()) p["coeff_csv"] = f.coeff_csv;
    if (kind == RunKind::verify) {
        p["suite"] = f.suite;
        p["trials"] = f.trials ? *f.trials : default_trials(f.suite);
    }

    // classify writes its report to --out; the other kinds use --out for artifacts
    std::string report = f.report;
    if (kind == RunKind::classify) {
        if (!f.out.empty()) report = f.out;
    } else if (!f.out.empty()) {
        p["out"] = f.out;
    }
    if (!report.empty()) cfg.output_paths.push_back(report);
    if (p.contains("out")) cfg.output_paths.push_back(p["out"].get<std::string>());
    if (p.contains("plot")) cfg.output_paths.push_back(p["plot"].get<std::string>());
    if (const char* dir = std::getenv("ZETACORR_CACHE_DIR"); dir && *dir) cfg.cache_dir = dir;

    const RunReport rep = run(cfg);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (report.empty())
        std::cout << report_payload(rep);
    else
        write_report(rep, report);
    std::fprintf(stderr, "%s finished in %.2f s\n", kind_name(kind).c_str(), rep.wall_seconds);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shifted moments of zeta: experiments and lemma checks"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--threads", f.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", f.seed, "seed recorded in every report");

    auto* sieve = app.add_subcommand("sieve", "segmented prime sieve");
    sieve->add_option("--limit", f.limit)->required();
    sieve->add_option("--segment-size", f.segment);
    sieve->add_option("--out", f.out, "ZPRM prime table");
    sieve->add_option("--report", f.report);

    auto* sample = app.add_subcommand("sample", "zeta(1/2 + it) on a uniform grid");
    sample->add_option("--t0", f.t0)->required();
    sample->add_option("--t1", f.t1)->required();
    sample->add_option("--step", f.step);
    sample->add_option("--rs-terms", f.rs_terms);
    sample->add_flag("--modulus-only", f.modulus_only);
    sample->add_option("--out", f.out, "ZGRD grid file");
    sample->add_option("--report", f.report);

    auto* classify = app.add_subcommand("classify", "good / bad / square classification on a grid");
    classify->add_option("--config", f.config)->required();
    classify->add_option("--t0", f.t0);
    classify->add_option("--t1", f.t1);
    classify->add_option("--step", f.step);
    classify->add_option("--out", f.out, "report JSON");

    auto* moment = app.add_subcommand("moment", "shifted moment against the prediction");
    moment->add_option("--config", f.config)->required();
    moment->add_option("--cache", f.cache, "ZGRD grid, built if missing");
    moment->add_option("--report", f.report);

    auto* predict = app.add_subcommand("predict", "predicted moment size");
    predict->add_option("--config", f.config)->required();
    predict->add_option("--report", f.report);

    auto* curve = app.add_subcommand("curve", "moment and ratio as functions of the shift difference");
    curve->add_option("--config", f.config)->required();
    curve->add_option("--out", f.out, "curve CSV");
    curve->add_option("--plot", f.plot, "curve SVG");
    curve->add_option("--cache", f.cache);
    curve->add_option("--report", f.report);

    auto* verify = app.add_subcommand("verify", "randomised lemma checks");
    verify->add_option("suite", f.suite)->required()->check(
        CLI::IsMember({"lemma22", "lemma23", "lemma24", "lemma33", "prop34"}));
    verify->add_option("--trials", f.trials);
    verify->add_option("--seed", f.seed);
    verify->add_option("--report", f.report);
    verify->add_option("--coeff-csv", f.coeff_csv, "b(n) table of a sample instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorClass::config);
    }

    try {
        set_threads(f.threads);
        RunKind kind = RunKind::predict;
        for (auto* sub : app.get_subcommands()) kind = parse_kind(sub->get_name());
        return execute(kind, f);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "error: out of memory\n");
        return static_cast<int>(ErrorClass::resource);
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(ErrorClass::resource);
    }
}
