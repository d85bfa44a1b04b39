// benchprio: microbenchmark suite prioritization toolkit.
//
// Subcommands wire ingestion, the greedy and search strategies, bootstrap
// change detection, and the evaluation harness into reproducible pipelines.
// Every file-producing command also writes a .manifest.json sidecar with
// input digests, the seed, and wall-clock timings; data outputs themselves
// are byte-stable for a fixed seed.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "benchprio/change_detection.hpp"
#include "benchprio/core.hpp"
#include "benchprio/evaluation.hpp"
#include "benchprio/greedy.hpp"
#include "benchprio/ingest.hpp"
#include "benchprio/objectives.hpp"
#include "benchprio/search.hpp"
#include "benchprio/sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace benchprio;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_atomically(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string digest_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for digest");
    Sha256 hash;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        hash.update(buf, static_cast<std::size_t>(in.gcount()));
    return hash.hex_digest();
}

std::size_t worker_count() {
    if (const char* env = std::getenv("BENCHPRIO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs `body(i)` for i in [0,n) on up to worker_count() threads. Results
// must be written to pre-sized slots so ordering stays deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Manifest {
    std::vector<std::string> command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_digests;
    std::vector<std::string> outputs;
    double prioritization_s = 0.0;
    double analysis_s = 0.0;
    json extra;

    void add_input(const fs::path& path) {
        input_digests[path.string()] = "sha256:" + digest_file(path);
    }

    void write(const fs::path& path) const {
        json doc;
        doc["tool"] = "benchprio";
        doc["version"] = kToolVersion;
        doc["command"] = command;
        doc["seed"] = seed;
        doc["inputs"] = input_digests;
        doc["outputs"] = outputs;
        doc["timings"] = {{"prioritization_s", prioritization_s},
                          {"analysis_s", analysis_s}};
        if (!extra.is_null()) doc["details"] = extra;
        write_atomically(path, doc.dump(2) + "\n");
    }
};

json ranking_to_json(const Ranking& ranking, const ObjectiveVector& objectives) {
    json doc;
    doc["strategy"] = ranking.provenance.strategy;
    doc["seed"] = ranking.provenance.seed;
    doc["order"] = json::array();
    for (const auto& id : ranking.order)
        doc["order"].push_back({{"method", id.method}, {"params", id.params_string()}});
    doc["objectives"] = {{"coverage", objectives.coverage()},
                         {"overlap", objectives.overlap()},
                         {"hist_change", objectives.hist_change()}};
    return doc;
}

Ranking ranking_from_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("malformed ranking JSON in " + path.string() + ": " + e.what());
    }
    Ranking ranking;
    ranking.provenance.strategy = doc.value("strategy", std::string{"unknown"});
    ranking.provenance.seed = doc.value("seed", std::uint64_t{0});
    if (!doc.contains("order") || !doc["order"].is_array())
        throw ParseError("ranking JSON without order array: " + path.string());
    for (const auto& entry : doc["order"])
        ranking.order.push_back(BenchmarkId::from_parts(
                entry.at("method").get<std::string>(), entry.value("params", std::string{})));
    return ranking;
}

// ------------------------------------------------------------ prioritize

struct StrategyFlags {
    std::string algo = "ibea";
    std::string mode = "nca";
    std::string overlap = "jaccard";
    std::string hist_agg = "mean";
    std::uint64_t seed = 42;
    std::size_t population = 250;
    std::size_t archive = 500;
    std::size_t max_evaluations = 25000;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // <0: default 1/n
    double kappa = 0.05;
};

bool is_moea(const std::string& algo) {
    return algo == "ibea" || algo == "nsga2" || algo == "spea2";
}

SearchConfig to_search_config(const StrategyFlags& flags, std::uint64_t seed) {
    SearchConfig cfg;
    cfg.algorithm = parse_algorithm(flags.algo);
    cfg.population = flags.population;
    cfg.archive = flags.archive;
    cfg.max_evaluations = flags.max_evaluations;
    cfg.crossover_prob = flags.crossover_prob;
    if (flags.mutation_prob >= 0.0) cfg.mutation_prob = flags.mutation_prob;
    cfg.seed = seed;
    cfg.ibea_kappa = flags.kappa;
    return cfg;
}

ObjectiveOptions to_objective_options(const StrategyFlags& flags) {
    ObjectiveOptions opts;
    if (flags.overlap == "containment")
        opts.overlap = OverlapMeasure::containment;
    else if (flags.overlap != "jaccard")
        throw UsageError("--overlap must be jaccard or containment");
    if (flags.hist_agg == "median")
        opts.hist_agg = HistAgg::median;
    else if (flags.hist_agg != "mean")
        throw UsageError("--hist-agg must be mean or median");
    return opts;
}

struct PrioritizeArgs {
    std::string coverage;
    std::string history;
    std::string diff;
    std::string truth;
    std::string select = "ideal";
    std::string out = "ranking.json";
    bool abs_changes = false;
    StrategyFlags strategy;
};

// One strategy run against a prepared context. Returns the final ranking
// (car already applied) and the seconds spent prioritizing.
std::pair<Ranking, double> run_strategy(const std::string& algo, const CoverageMatrix& cov,
                                        const ObjectiveContext& ctx, Mode mode,
                                        const DiffSet* diff, const StrategyFlags& flags,
                                        std::uint64_t seed, const std::string& select,
                                        const GroundTruthChanges* truth) {
    const auto start = Clock::now();
    Ranking ranking;
    if (algo == "total") {
        ranking = prioritize_total(cov);
    } else if (algo == "additional") {
        ranking = prioritize_additional(cov);
    } else if (algo == "random") {
        ranking = prioritize_random(cov, seed);
    } else if (is_moea(algo)) {
        const auto front = run_search(ctx, to_search_config(flags, seed));
        if (select == "median") {
            if (truth == nullptr) throw UsageError("--select median requires --truth");
            ranking = select_solution(front, ctx, SelectMedianEffectiveness{truth});
        } else if (select == "ideal") {
            ranking = select_solution(front, ctx, SelectIdeal{});
        } else {
            throw UsageError("--select must be ideal or median");
        }
    } else {
        throw UsageError("unknown algorithm '" + algo + "'");
    }
    if (mode == Mode::car) ranking = apply_car(ranking, cov, *diff);
    return {ranking, seconds_since(start)};
}

int cmd_prioritize(const PrioritizeArgs& args, const std::vector<std::string>& argv) {
    const Mode mode = parse_mode(args.strategy.mode);
    if ((mode == Mode::cac || mode == Mode::car) && args.diff.empty())
        throw UsageError("--mode " + args.strategy.mode + " requires --diff");
    if (is_moea(args.strategy.algo) && args.history.empty())
        throw UsageError("--algo " + args.strategy.algo + " requires --history");
    if (args.select == "median" && args.truth.empty())
        throw UsageError("--select median requires --truth");

    Manifest manifest;
    manifest.command = argv;
    manifest.seed = args.strategy.seed;
    const auto analysis_start = Clock::now();

    const auto cov = load_coverage(args.coverage);
    manifest.add_input(args.coverage);
    ChangeHistory hist;
    if (!args.history.empty()) {
        hist = load_history(args.history, args.abs_changes);
        manifest.add_input(args.history);
    }
    std::optional<DiffSet> diff;
    if (!args.diff.empty()) {
        diff = load_diff(args.diff);
        manifest.add_input(args.diff);
    }
    std::optional<GroundTruthChanges> truth;
    if (!args.truth.empty()) {
        truth = load_truth(args.truth);
        manifest.add_input(args.truth);
    }

    const auto report = validate_suite(cov, hist);
    if (!report.ok) {
        for (const auto& note : report.notes) std::cerr << "error: " << note << "\n";
        throw Error("suite validation failed");
    }

    const auto ctx = build_context(cov, hist, diff ? &*diff : nullptr, mode,
                                   to_objective_options(args.strategy));
    auto [ranking, prioritization_s] =
            run_strategy(args.strategy.algo, cov, ctx, mode, diff ? &*diff : nullptr,
                         args.strategy, args.strategy.seed, args.select,
                         truth ? &*truth : nullptr);
    manifest.prioritization_s = prioritization_s;
    manifest.analysis_s = seconds_since(analysis_start);

    const auto objectives = evaluate(ranking, ctx);
    write_atomically(args.out, ranking_to_json(ranking, objectives).dump(2) + "\n");
    manifest.outputs.push_back(args.out);
    manifest.extra = {{"mode", args.strategy.mode},
                      {"selection", ranking.provenance.note}};
    manifest.write(args.out + ".manifest.json");
    return 0;
}

// ------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::vector<std::string> rankings;
    std::string truth;
    std::string metrics = "apfdp,topn";
    std::size_t n = 3;
    std::string out;
};

int cmd_evaluate(const EvaluateArgs& args, const std::vector<std::string>& argv) {
    const bool want_apfdp = args.metrics.find("apfdp") != std::string::npos;
    const bool want_topn = args.metrics.find("topn") != std::string::npos;
    if (!want_apfdp && !want_topn)
        throw UsageError("--metrics must name apfdp and/or topn");

    Manifest manifest;
    manifest.command = argv;
    const auto analysis_start = Clock::now();

    const auto truth = load_truth(args.truth);
    manifest.add_input(args.truth);

    std::string csv = "strategy,seed,apfdp,top" + std::to_string(args.n) + "\n";
    for (const auto& path : args.rankings) {
        const auto ranking = ranking_from_json(path);
        manifest.add_input(path);
        csv += ranking.provenance.strategy + ',' + std::to_string(ranking.provenance.seed);
        csv += ',';
        if (want_apfdp) csv += fmt_metric(apfd_p(ranking, truth));
        csv += ',';
        if (want_topn) csv += fmt_metric(top_n(ranking, truth, args.n));
        csv += '\n';
    }
    manifest.analysis_s = seconds_since(analysis_start);

    if (args.out.empty()) {
        std::cout << csv;
    } else {
        write_atomically(args.out, csv);
        manifest.outputs.push_back(args.out);
        manifest.write(args.out + ".manifest.json");
    }
    return 0;
}

// -------------------------------------------------------- detect-changes

struct DetectArgs {
    std::string old_path;
    std::string new_path;
    std::size_t iterations = 10000;
    double confidence = 0.99;
    std::uint64_t seed = 42;
    std::string version_label = "new";
    std::string out;
};

int cmd_detect_changes(const DetectArgs& args, const std::vector<std::string>& argv) {
    Manifest manifest;
    manifest.command = argv;
    manifest.seed = args.seed;
    const auto analysis_start = Clock::now();

    const auto old_sets = load_measurements(args.old_path);
    const auto new_sets = load_measurements(args.new_path);
    manifest.add_input(args.old_path);
    manifest.add_input(args.new_path);

    std::vector<std::pair<BenchmarkId, std::pair<const MeasurementSet*, const MeasurementSet*>>>
            matched;
    for (const auto& new_entry : new_sets) {
        const MeasurementSet* old_match = nullptr;
        for (const auto& old_entry : old_sets)
            if (old_entry.benchmark == new_entry.benchmark) old_match = &old_entry.measurements;
        if (old_match == nullptr) {
            std::cerr << "note: " << new_entry.benchmark.to_string()
                      << " has no old-version measurements; skipped\n";
            continue;
        }
        matched.push_back({new_entry.benchmark, {old_match, &new_entry.measurements}});
    }
    std::sort(matched.begin(), matched.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::string csv = "version,method,params,change_percent,ratio_ci_low,ratio_ci_high,significant\n";
    for (std::size_t i = 0; i < matched.size(); ++i) {
        const auto& [id, sets] = matched[i];
        // one derived stream per benchmark keeps rows independent of order
        const auto ci = bootstrap_ratio_ci(
                *sets.first, *sets.second,
                {.iterations = args.iterations, .confidence = args.confidence,
                 .seed = args.seed + i});
        const auto result = change_size(ci);
        csv += args.version_label + ',' + id.method + ',' + id.params_string() + ',' +
               fmt_double(result.change_percent) + ',' + fmt_double(result.ratio_ci_low) +
               ',' + fmt_double(result.ratio_ci_high) + ',' +
               (result.significant ? "true" : "false") + '\n';
    }
    manifest.analysis_s = seconds_since(analysis_start);

    if (args.out.empty()) {
        std::cout << csv;
    } else {
        write_atomically(args.out, csv);
        manifest.outputs.push_back(args.out);
        manifest.write(args.out + ".manifest.json");
    }
    return 0;
}

// ------------------------------------------------------------ experiment

struct ExperimentArgs {
    std::string coverage;
    std::string history;
    std::string truth;
    std::string diff;
    std::string algos = "ibea,total,additional,random";
    std::size_t repetitions = 30;
    std::uint64_t seed_base = 42;
    double suite_runtime = 0.0;  // seconds; 0: overhead fractions omitted
    std::string out_dir = "experiment-out";
    std::string select = "median";
    bool abs_changes = false;
    StrategyFlags strategy;
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

json comparison_to_json(const ComparisonReport& report) {
    json doc;
    doc["alpha"] = report.alpha;
    doc["kw_performed"] = report.kw_performed;
    if (report.kw_performed) {
        doc["kw_h"] = report.kw_h;
        doc["kw_p"] = report.kw_p;
    }
    doc["medians"] = report.medians;
    doc["pairwise"] = json::array();
    for (const auto& p : report.pairwise) {
        doc["pairwise"].push_back({{"first", p.first},
                                   {"second", p.second},
                                   {"dunn_p_adjusted", p.dunn_p_adjusted},
                                   {"a12", p.a12},
                                   {"magnitude", magnitude_name(p.magnitude)},
                                   {"median_difference", p.median_difference},
                                   {"significant", p.significant}});
    }
    return doc;
}

void print_comparison(const std::string& metric, const ComparisonReport& report) {
    std::printf("\n%s medians:\n", metric.c_str());
    for (const auto& [name, value] : report.medians)
        std::printf("  %-12s %.4f\n", name.c_str(), value);
    if (!report.kw_performed) {
        std::printf("  (single samples: statistical tests skipped)\n");
        return;
    }
    std::printf("Kruskal-Wallis H=%.4f p=%.3g (alpha=%.2g)\n", report.kw_h, report.kw_p,
                report.alpha);
    if (report.pairwise.empty()) {
        std::printf("  no pairwise differences to report\n");
        return;
    }
    std::printf("  %-12s %-12s %-10s %-8s %-10s %s\n", "first", "second", "dunn_p", "a12",
                "magnitude", "significant");
    for (const auto& p : report.pairwise)
        std::printf("  %-12s %-12s %-10.3g %-8.3f %-10s %s\n", p.first.c_str(),
                    p.second.c_str(), p.dunn_p_adjusted, p.a12, magnitude_name(p.magnitude),
                    p.significant ? "yes" : "no");
}

int cmd_experiment(const ExperimentArgs& args, const std::vector<std::string>& argv) {
    const Mode mode = parse_mode(args.strategy.mode);
    if ((mode == Mode::cac || mode == Mode::car) && args.diff.empty())
        throw UsageError("--mode " + args.strategy.mode + " requires --diff");
    const auto algos = split_list(args.algos);
    if (algos.empty()) throw UsageError("--algos must name at least one strategy");
    if (args.repetitions < 1) throw UsageError("--repetitions must be >= 1");

    Manifest manifest;
    manifest.command = argv;
    manifest.seed = args.seed_base;
    const auto analysis_start = Clock::now();

    const auto cov = load_coverage(args.coverage);
    const auto hist = load_history(args.history, args.abs_changes);
    const auto truth = load_truth(args.truth);
    manifest.add_input(args.coverage);
    manifest.add_input(args.history);
    manifest.add_input(args.truth);
    std::optional<DiffSet> diff;
    if (!args.diff.empty()) {
        diff = load_diff(args.diff);
        manifest.add_input(args.diff);
    }

    const auto ctx = build_context(cov, hist, diff ? &*diff : nullptr, mode,
                                   to_objective_options(args.strategy));

    struct Run {
        std::string algo;
        std::uint64_t seed;
        double apfdp = 0.0;
        double top3 = 0.0;
        double prioritization_s = 0.0;
    };
    std::vector<Run> runs;
    for (const auto& algo : algos) {
        const bool stochastic = is_moea(algo) || algo == "random";
        const std::size_t reps = stochastic ? args.repetitions : 1;
        for (std::size_t r = 0; r < reps; ++r)
            runs.push_back({algo, stochastic ? args.seed_base + r : 0});
    }

    parallel_for(runs.size(), [&](std::size_t i) {
        auto& run = runs[i];
        StrategyFlags flags = args.strategy;
        flags.algo = run.algo;
        auto [ranking, prio_s] =
                run_strategy(run.algo, cov, ctx, mode, diff ? &*diff : nullptr, flags,
                             run.seed, args.select, &truth);
        run.prioritization_s = prio_s;
        run.apfdp = apfd_p(ranking, truth);
        run.top3 = top_n(ranking, truth, 3);
    });

    fs::create_directories(args.out_dir);
    const fs::path out_dir = args.out_dir;

    std::string csv = "strategy,seed,apfdp,top3\n";
    for (const auto& run : runs)
        csv += run.algo + ',' + std::to_string(run.seed) + ',' + fmt_metric(run.apfdp) +
               ',' + fmt_metric(run.top3) + '\n';
    write_atomically(out_dir / "runs.csv", csv);

    std::map<std::string, std::vector<double>> apfdp_groups, top3_groups;
    for (const auto& run : runs) {
        apfdp_groups[run.algo].push_back(run.apfdp);
        top3_groups[run.algo].push_back(run.top3);
    }

    json report_doc;
    if (apfdp_groups.size() >= 2) {
        const auto apfdp_report = compare_strategies(apfdp_groups);
        const auto top3_report = compare_strategies(top3_groups);
        report_doc["apfdp"] = comparison_to_json(apfdp_report);
        report_doc["top3"] = comparison_to_json(top3_report);
        print_comparison("APFD-P", apfdp_report);
        print_comparison("Top-3", top3_report);
    } else {
        json medians;
        for (const auto& [name, values] : apfdp_groups)
            medians[name] = median(values);
        report_doc["apfdp"] = {{"medians", medians}};
        report_doc["top3"] = {{"medians", {{algos[0], median(top3_groups[algos[0]])}}}};
        std::printf("single strategy: medians only\n");
    }
    write_atomically(out_dir / "report.json", report_doc.dump(2) + "\n");

    // timing summary lives beside the manifest; wall-clock data is the one
    // output that legitimately differs between reruns
    double total_prio = 0.0;
    json timing;
    for (const auto& algo : algos) {
        std::vector<double> times;
        for (const auto& run : runs)
            if (run.algo == algo) times.push_back(run.prioritization_s);
        double sum = 0.0;
        for (double t : times) sum += t;
        total_prio += sum;
        json entry = {{"runs", times.size()},
                      {"median_prioritization_s", median(times)},
                      {"total_prioritization_s", sum}};
        if (args.suite_runtime > 0.0)
            entry["median_overhead_fraction"] = median(times) / args.suite_runtime;
        timing[algo] = std::move(entry);
    }
    manifest.prioritization_s = total_prio;
    manifest.analysis_s = seconds_since(analysis_start);
    if (args.suite_runtime > 0.0) {
        timing["suite_runtime_s"] = args.suite_runtime;
        timing["analysis_overhead_fraction"] = manifest.analysis_s / args.suite_runtime;
    }
    write_atomically(out_dir / "timings.json", timing.dump(2) + "\n");

    manifest.outputs = {(out_dir / "runs.csv").string(), (out_dir / "report.json").string(),
                        (out_dir / "timings.json").string()};
    manifest.extra = {{"mode", args.strategy.mode},
                      {"repetitions", args.repetitions},
                      {"algos", algos}};
    manifest.write(out_dir / "experiment.manifest.json");
    return 0;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
    SyntheticSpec spec;
    std::string out_dir = "synthetic-out";
};

int cmd_synth(const SynthArgs& args, const std::vector<std::string>& argv) {
    SyntheticInstance instance = [&] {
        try {
            return generate_synthetic(args.spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    Manifest manifest;
    manifest.command = argv;
    manifest.seed = args.spec.seed;
    const auto analysis_start = Clock::now();

    fs::create_directories(args.out_dir);
    const fs::path dir = args.out_dir;
    save_coverage(instance.coverage, dir / "coverage.json");
    save_history(instance.history, dir / "history.csv");
    save_diff(instance.diff, dir / "diff.txt");
    save_truth(instance.truth, dir / "truth.csv");

    manifest.analysis_s = seconds_since(analysis_start);
    manifest.outputs = {(dir / "coverage.json").string(), (dir / "history.csv").string(),
                        (dir / "diff.txt").string(), (dir / "truth.csv").string()};
    manifest.write(dir / "synth.manifest.json");
    return 0;
}

void add_strategy_flags(CLI::App* app, StrategyFlags& flags, bool with_algo) {
    if (with_algo)
        app->add_option("--algo", flags.algo,
                        "Strategy: total|additional|random|ibea|nsga2|spea2");
    app->add_option("--mode", flags.mode, "Change awareness: nca|cac|car");
    app->add_option("--overlap", flags.overlap, "Overlap measure: jaccard|containment");
    app->add_option("--hist-agg", flags.hist_agg, "History aggregation: mean|median");
    app->add_option("--population", flags.population, "MOEA population size");
    app->add_option("--archive", flags.archive, "IBEA archive size");
    app->add_option("--max-evaluations", flags.max_evaluations, "Fitness evaluation budget");
    app->add_option("--crossover-prob", flags.crossover_prob, "PMX crossover probability");
    app->add_option("--mutation-prob", flags.mutation_prob,
                    "Swap mutation probability (default 1/n)");
    app->add_option("--kappa", flags.kappa, "IBEA fitness scaling factor");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microbenchmark suite prioritization toolkit"};
    app.require_subcommand(1);
    std::vector<std::string> raw_args(argv + 1, argv + argc);

    PrioritizeArgs prio;
    auto* prioritize = app.add_subcommand("prioritize", "Compute one prioritized ranking");
    prioritize->add_option("--coverage", prio.coverage, "Coverage JSON")->required();
    prioritize->add_option("--history", prio.history, "Change history CSV");
    prioritize->add_option("--diff", prio.diff, "Changed-method list");
    prioritize->add_option("--truth", prio.truth, "Ground-truth CSV (median selection)");
    prioritize->add_option("--select", prio.select, "Front selection: ideal|median");
    prioritize->add_option("--seed", prio.strategy.seed, "Random seed");
    prioritize->add_option("--out", prio.out, "Output ranking JSON path");
    prioritize->add_flag("--abs", prio.abs_changes, "Take |change| when ingesting history");
    add_strategy_flags(prioritize, prio.strategy, true);

    EvaluateArgs eval;
    auto* evaluate = app.add_subcommand("evaluate", "Score rankings against ground truth");
    evaluate->add_option("--ranking", eval.rankings, "Ranking JSON file(s)")->required();
    evaluate->add_option("--truth", eval.truth, "Ground-truth CSV")->required();
    evaluate->add_option("--metrics", eval.metrics, "Comma list: apfdp,topn");
    evaluate->add_option("--n", eval.n, "Top-N size");
    evaluate->add_option("--out", eval.out, "Output CSV (stdout if omitted)");

    DetectArgs detect;
    auto* detect_changes =
            app.add_subcommand("detect-changes", "Bootstrap change detection between versions");
    detect_changes->add_option("--old", detect.old_path, "Old-version measurements JSON")
            ->required();
    detect_changes->add_option("--new", detect.new_path, "New-version measurements JSON")
            ->required();
    detect_changes->add_option("--iterations", detect.iterations, "Bootstrap iterations");
    detect_changes->add_option("--confidence", detect.confidence, "Confidence level");
    detect_changes->add_option("--seed", detect.seed, "Random seed");
    detect_changes->add_option("--version-label", detect.version_label,
                               "Version label for emitted rows");
    detect_changes->add_option("--out", detect.out, "Output CSV (stdout if omitted)");

    ExperimentArgs exp;
    auto* experiment =
            app.add_subcommand("experiment", "Repeated prioritization with statistics");
    experiment->add_option("--coverage", exp.coverage, "Coverage JSON")->required();
    experiment->add_option("--history", exp.history, "Change history CSV")->required();
    experiment->add_option("--truth", exp.truth, "Ground-truth CSV")->required();
    experiment->add_option("--diff", exp.diff, "Changed-method list");
    experiment->add_option("--algos", exp.algos, "Comma list of strategies");
    experiment->add_option("--repetitions", exp.repetitions, "Seeded repetitions per MOEA");
    experiment->add_option("--seed-base", exp.seed_base, "First seed");
    experiment->add_option("--suite-runtime", exp.suite_runtime,
                           "Benchmark suite runtime in seconds, for overhead fractions");
    experiment->add_option("--out-dir", exp.out_dir, "Output directory");
    experiment->add_option("--select", exp.select, "Front selection: ideal|median");
    experiment->add_flag("--abs", exp.abs_changes, "Take |change| when ingesting history");
    add_strategy_flags(experiment, exp.strategy, false);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic instance");
    synth_cmd->add_option("--n-benchmarks", synth.spec.n_benchmarks, "Suite size");
    synth_cmd->add_option("--n-methods", synth.spec.n_methods, "Universe size");
    synth_cmd->add_option("--coverage-density", synth.spec.coverage_density,
                          "Per-cell coverage probability");
    synth_cmd->add_option("--change-correlation", synth.spec.change_correlation,
                          "corr(coverage size, change)");
    synth_cmd->add_option("--n-versions", synth.spec.n_versions, "History versions");
    synth_cmd->add_option("--seed", synth.spec.seed, "Random seed");
    synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (prioritize->parsed()) return cmd_prioritize(prio, raw_args);
        if (evaluate->parsed()) return cmd_evaluate(eval, raw_args);
        if (detect_changes->parsed()) return cmd_detect_changes(detect, raw_args);
        if (experiment->parsed()) return cmd_experiment(exp, raw_args);
        if (synth_cmd->parsed()) return cmd_synth(synth, raw_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
