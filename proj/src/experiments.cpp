#include "osc/experiments.hpp"

#include "osc/error.hpp"
#include "osc/factor_model.hpp"
#include "osc/io.hpp"
#include "osc/parallel.hpp"
#include "osc/report.hpp"
#include "osc/rng.hpp"
#include "osc/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#ifndef OSC_BUILD_ID
#define OSC_BUILD_ID "dev"
#endif

namespace osc::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string theta_label(double theta)
{
    std::ostringstream out;
    out << "theta=" << theta;
    return out.str();
}

const Labels& require_labels(const DataMatrix& data)
{
    if (!data.labels())
        throw Error(Errc::InvalidArgument, "experiment needs ground-truth labels");
    return *data.labels();
}

int distinct_count(const Labels& labels)
{
    return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

int resolve_k(const DataMatrix& data, const ExperimentConfig& cfg)
{
    if (cfg.k > 0)
        return cfg.k;
    if (!data.labels())
        throw Error(Errc::InvalidArgument, "k not given and no labels to infer it from");
    return distinct_count(*data.labels());
}

KMeansConfig run_kmeans(const ExperimentConfig& cfg, int k, std::uint64_t seed)
{
    KMeansConfig km = cfg.kmeans;
    km.k = k;
    km.seed = seed;
    return km;
}

RunRecord record_from(const OscReport& report, std::string setting, std::string method)
{
    RunRecord rec;
    rec.setting = std::move(setting);
    rec.method = std::move(method);
    rec.theta0 = report.theta0;
    rec.m = report.m;
    rec.seed = report.seed;
    rec.metrics = report.metrics;
    rec.timings = report.timings;
    rec.objective_trace = report.clusters.objective_trace;
    rec.iterations = report.clusters.iterations;
    return rec;
}

void number_runs(std::vector<RunRecord>& runs)
{
    for (std::size_t i = 0; i < runs.size(); ++i)
        runs[i].run_index = static_cast<int>(i);
}

ExperimentReport finish(std::string kind, const DataMatrix& data, const ExperimentConfig& cfg,
                        std::vector<RunRecord> runs)
{
    number_runs(runs);
    ExperimentReport report;
    report.kind = std::move(kind);
    report.dataset = data.name();
    report.config = cfg;
    report.cells = aggregate(runs);
    report.runs = std::move(runs);
    report.env = environment();
    return report;
}

}  // namespace

void check_config(const ExperimentConfig& cfg)
{
    if (cfg.repeats < 1)
        throw Error(Errc::InvalidArgument, "repeats must be >= 1");
    for (double theta : cfg.theta_grid)
        if (!(theta > 0.0 && theta <= 1.0))
            throw Error(Errc::InvalidArgument, "theta grid values must lie in (0, 1]");
    if (!(cfg.theta0 > 0.0 && cfg.theta0 <= 1.0))
        throw Error(Errc::InvalidArgument, "theta0 must lie in (0, 1]");
}

Summary summarize(const std::vector<double>& values)
{
    Summary s;
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values)
            sq += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

Environment environment()
{
    return {max_threads(), OSC_BUILD_ID, std::string(Rng::name())};
}

std::vector<Cell> aggregate(const std::vector<RunRecord>& runs)
{
    std::vector<const RunRecord*> sorted;
    for (const auto& r : runs)
        sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RunRecord* a, const RunRecord* b) { return a->run_index < b->run_index; });

    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto* r : sorted) {
        const std::pair key{r->setting, r->method};
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            keys.push_back(key);
    }

    std::vector<Cell> cells;
    for (const auto& [setting, method] : keys) {
        std::vector<double> acc, nmi, ari, m, std_ms, eig_ms, km_ms, total_ms;
        for (const auto* r : sorted) {
            if (r->setting != setting || r->method != method)
                continue;
            if (r->metrics) {
                acc.push_back(r->metrics->acc);
                nmi.push_back(r->metrics->nmi);
                ari.push_back(r->metrics->ari);
            }
            m.push_back(static_cast<double>(r->m));
            std_ms.push_back(r->timings.standardize);
            eig_ms.push_back(r->timings.eigen);
            km_ms.push_back(r->timings.kmeans);
            total_ms.push_back(r->timings.total);
        }
        Cell cell;
        cell.setting = setting;
        cell.method = method;
        cell.runs = static_cast<int>(m.size());
        cell.m_mean = summarize(m).mean;
        if (!acc.empty()) {
            cell.acc = summarize(acc);
            cell.nmi = summarize(nmi);
            cell.ari = summarize(ari);
        }
        cell.standardize_ms = summarize(std_ms);
        cell.eigen_ms = summarize(eig_ms);
        cell.kmeans_ms = summarize(km_ms);
        cell.total_ms = summarize(total_ms);
        cells.push_back(std::move(cell));
    }
    return cells;
}

ExperimentReport sweep_theta(const DataMatrix& data, const ExperimentConfig& cfg)
{
    check_config(cfg);
    require_labels(data);
    const int k = resolve_k(data, cfg);
    if (k < 2 || k > data.samples())
        throw Error(Errc::InvalidArgument, "k must lie in [2, N]");

    // The decomposition does not depend on theta0; compute it once.
    auto stage = Clock::now();
    const StandardizedView view = standardize(data);
    const double standardize_ms = elapsed_ms(stage);
    stage = Clock::now();
    const SpectralDecomposition spectral = eigendecompose_symmetric(view.r_samples);
    const double decompose_ms = elapsed_ms(stage);

    std::vector<RunRecord> runs;
    for (double theta : cfg.theta_grid) {
        stage = Clock::now();
        const FactorModel model = fit(view, spectral, theta);
        const double fit_ms = elapsed_ms(stage);

        std::vector<std::vector<RunRecord>> per_repeat(static_cast<std::size_t>(cfg.repeats));
        parallel_for(per_repeat.size(), [&](std::size_t r) {
            const auto km = run_kmeans(cfg, k, derive_seed(cfg.seed, r));
            OscReport report;
            report.dataset = data.name();
            report.theta0 = theta;
            report.m = model.m;
            report.theta_of_m = model.theta_of_m();
            report.seed = km.seed;
            report.timings.standardize = standardize_ms;
            report.timings.eigen = decompose_ms + fit_ms;
            const auto start = Clock::now();
            report.clusters = kmeans(model.embedding, km);
            report.timings.kmeans = elapsed_ms(start);
            report.timings.total = report.timings.standardize + report.timings.eigen + report.timings.kmeans;
            report.metrics = evaluate(*data.labels(), report.clusters.assignments);
            per_repeat[r].push_back(record_from(report, theta_label(theta), "osc"));
            for (Baseline b : cfg.baselines) {
                auto base = run_baseline(data, b, model.m, km);
                base.theta0 = theta;
                per_repeat[r].push_back(record_from(base, theta_label(theta), std::string(baseline_name(b))));
            }
        });
        for (auto& group : per_repeat)
            for (auto& rec : group)
                runs.push_back(std::move(rec));
    }
    return finish("sweep", data, cfg, std::move(runs));
}

ExperimentReport subset_robustness(const DataMatrix& data, const ExperimentConfig& cfg)
{
    check_config(cfg);
    const Labels& labels = require_labels(data);
    const std::set<int> unique(labels.begin(), labels.end());
    const std::vector<int> categories(unique.begin(), unique.end());
    for (int count : cfg.subset_counts) {
        if (count < 2 || count > static_cast<int>(categories.size()))
            throw Error(Errc::NotEnoughCategories, "requested " + std::to_string(count) + " categories, data has " +
                                                       std::to_string(categories.size()));
    }

    std::vector<RunRecord> runs;
    for (int count : cfg.subset_counts) {
        const std::string setting = "n=" + std::to_string(count);
        std::vector<std::vector<RunRecord>> per_repeat(static_cast<std::size_t>(cfg.repeats));
        parallel_for(per_repeat.size(), [&](std::size_t r) {
            Rng rng(derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(count)), r));
            std::vector<int> pool = categories;
            for (int i = 0; i < count; ++i) {
                const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
                std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            }
            std::vector<int> chosen(pool.begin(), pool.begin() + count);
            std::sort(chosen.begin(), chosen.end());

            std::vector<Eigen::Index> rows;
            for (std::size_t s = 0; s < labels.size(); ++s)
                if (std::binary_search(chosen.begin(), chosen.end(), labels[s]))
                    rows.push_back(static_cast<Eigen::Index>(s));
            const DataMatrix subset = data.select_rows(rows);

            const auto km = run_kmeans(cfg, count, derive_seed(cfg.seed, r));
            const auto osc = run_osc(subset, cfg.theta0, km);
            per_repeat[r].push_back(record_from(osc, setting, "osc"));
            for (Baseline b : cfg.baselines)
                per_repeat[r].push_back(
                    record_from(run_baseline(subset, b, osc.m, km), setting, std::string(baseline_name(b))));
            for (auto& rec : per_repeat[r])
                rec.categories = chosen;
        });
        for (auto& group : per_repeat)
            for (auto& rec : group)
                runs.push_back(std::move(rec));
    }
    return finish("subset", data, cfg, std::move(runs));
}

ExperimentReport bench_runtime(const DataMatrix& data, const ExperimentConfig& cfg)
{
    check_config(cfg);
    const int k = resolve_k(data, cfg);

    // Sequential on purpose: concurrent runs would contend and skew timings.
    std::vector<RunRecord> runs;
    for (int r = 0; r < cfg.repeats; ++r) {
        const auto km = run_kmeans(cfg, k, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        const auto osc = run_osc(data, cfg.theta0, km);
        runs.push_back(record_from(osc, "all", "osc"));
        for (Baseline b : cfg.baselines)
            runs.push_back(record_from(run_baseline(data, b, osc.m, km), "all", std::string(baseline_name(b))));
    }
    return finish("bench", data, cfg, std::move(runs));
}

void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    auto open = [&](const std::string& name) {
        std::ofstream out(out_dir / name, std::ios::binary);
        if (!out)
            throw Error(Errc::Io, "cannot write " + (out_dir / name).string());
        return out;
    };

    open("report.json") << to_json(report).dump(2) << '\n';

    auto lines = open("per-run.jsonl");
    for (const auto& run : report.runs) {
        lines << to_json(run).dump() << '\n';
        io::write_trace_csv(out_dir / ("trace-" + std::to_string(run.run_index) + ".csv"), run.objective_trace);
    }

    // Rows are settings, columns method x metric, in the layout of a results table.
    std::vector<std::string> settings, methods;
    for (const auto& cell : report.cells) {
        if (std::find(settings.begin(), settings.end(), cell.setting) == settings.end())
            settings.push_back(cell.setting);
        if (std::find(methods.begin(), methods.end(), cell.method) == methods.end())
            methods.push_back(cell.method);
    }
    auto table = open("table.csv");
    table << "setting";
    for (const auto& method : methods)
        table << ',' << method << "_m," << method << "_acc_mean," << method << "_acc_sd," << method << "_nmi_mean,"
              << method << "_nmi_sd," << method << "_ari_mean," << method << "_ari_sd," << method << "_total_ms";
    table << '\n' << std::setprecision(6);
    for (const auto& setting : settings) {
        table << setting;
        for (const auto& method : methods) {
            const auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const Cell& c) {
                return c.setting == setting && c.method == method;
            });
            if (it == report.cells.end()) {
                table << ",,,,,,,,";
                continue;
            }
            table << ',' << it->m_mean;
            for (const auto& s : {it->acc, it->nmi, it->ari}) {
                if (s)
                    table << ',' << s->mean << ',' << s->sd;
                else
                    table << ",,";
            }
            table << ',' << it->total_ms.mean;
        }
        table << '\n';
    }
}

}  // namespace osc::experiments
