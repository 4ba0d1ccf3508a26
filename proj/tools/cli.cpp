#include "cli.hpp"

#include "osc/error.hpp"
#include "osc/experiments.hpp"
#include "osc/io.hpp"
#include "osc/metrics.hpp"
#include "osc/parallel.hpp"
#include "osc/pipeline.hpp"
#include "osc/report.hpp"
#include "osc/theorem_lab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace osc::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ties one CLI flag to a JSON config key so values can come from either.
struct Binding {
    CLI::Option* option = nullptr;
    std::string key;
    bool embed = true;
    std::function<void(const Json&)> load;
    std::function<Json()> save;
};

struct Options {
    // shared
    std::string out_dir = "osc-out";
    std::string config;
    std::uint64_t seed = 0;
    int threads = 1;
    bool verbose = false;

    // data
    std::string input;
    std::string labels;
    int k = 0;
    double theta = kDefaultTheta0;
    int restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;

    // experiments
    std::vector<double> theta_grid{0.70, 0.75, 0.80, 0.85, 0.90};
    int repeats = 20;
    std::vector<int> subset_counts{2, 4, 7, 15, 30};
    std::vector<std::string> baselines;

    // theorem lab
    int p = 100;
    std::vector<int> dims{3, 3, 3};
    std::vector<int> sizes{100, 100, 100};
    std::vector<double> sigmas{0.05, 0.10, 0.15};
    std::vector<double> signal_min_eig;
    double signal_mean = 0.0;
    double overlap = 0.0;
    int trials = 50;
    int m = 0;
    std::vector<int> decay_grid;
    bool emit_data = false;

    // metrics
    std::string true_path;
    std::string pred_path;
};

class Command {
public:
    Command(CLI::App& root, const std::string& name, const std::string& help)
        : app_(root.add_subcommand(name, help)), name_(name)
    {
    }

    template <class T>
    CLI::Option* bind(const std::string& flag, T& value, const std::string& help, bool embed = true)
    {
        Binding b;
        b.option = app_->add_option("--" + flag, value, help);
        b.key = flag;
        std::replace(b.key.begin(), b.key.end(), '-', '_');
        b.embed = embed;
        b.load = [&value](const Json& j) { value = j.get<T>(); };
        b.save = [&value] { return Json(value); };
        if constexpr (requires { value.begin(); } && !std::is_same_v<T, std::string>)
            b.option->delimiter(',');
        else
            b.option->capture_default_str();
        bindings_.push_back(std::move(b));
        return bindings_.back().option;
    }

    CLI::App* app() const { return app_; }
    const std::string& name() const { return name_; }

    void require(std::initializer_list<std::string> flags, const Options& opts) const
    {
        for (const auto& flag : flags) {
            for (const auto& b : bindings_) {
                if (b.option->get_name() != "--" + flag)
                    continue;
                const bool from_flag = b.option->count() > 0;
                if (!from_flag && !loaded_.contains(b.key))
                    throw UsageError("missing required option --" + flag);
            }
        }
        (void)opts;
    }

    /// Fills every option not given on the command line from the config file.
    void apply_config(const std::string& path)
    {
        if (path.empty())
            return;
        std::ifstream in(path);
        if (!in)
            throw Error(Errc::Io, "cannot open config " + path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception& e) {
            throw Error(Errc::Parse, "config " + path + ": " + e.what());
        }
        if (j.contains("invocation"))
            j = j["invocation"];
        for (auto& b : bindings_) {
            if (b.option->count() > 0 || !j.contains(b.key))
                continue;
            try {
                b.load(j[b.key]);
            } catch (const Json::exception& e) {
                throw Error(Errc::Parse, "config key " + b.key + ": " + e.what());
            }
            loaded_.insert(b.key);
        }
    }

    Json resolved() const
    {
        Json j{{"subcommand", name_}};
        for (const auto& b : bindings_)
            if (b.embed)
                j[b.key] = b.save();
        return j;
    }

private:
    CLI::App* app_;
    std::string name_;
    std::vector<Binding> bindings_;
    std::set<std::string> loaded_;
};

void add_common(Command& cmd, Options& o)
{
    cmd.bind("out-dir", o.out_dir, "Output directory", false);
    cmd.bind("config", o.config, "JSON config file or a previous report.json", false);
    cmd.bind("seed", o.seed, "Base random seed");
    cmd.bind("threads", o.threads, "Worker thread cap");
    cmd.app()->add_flag("-v,--verbose", o.verbose, "Print stage timings");
}

void add_kmeans(Command& cmd, Options& o)
{
    cmd.bind("restarts", o.restarts, "k-means++ restarts");
    cmd.bind("max-iter", o.max_iter, "Lloyd iteration cap");
    cmd.bind("tol", o.tol, "Relative objective change for convergence");
}

std::string absolute_or_empty(const std::string& path)
{
    return path.empty() ? path : fs::absolute(path).lexically_normal().string();
}

KMeansConfig kmeans_config(const Options& o)
{
    KMeansConfig km;
    km.k = o.k;
    km.restarts = o.restarts;
    km.max_iter = o.max_iter;
    km.tol = o.tol;
    km.seed = o.seed;
    return km;
}

DataMatrix load(const Options& o)
{
    std::optional<fs::path> labels;
    if (!o.labels.empty())
        labels = o.labels;
    return io::load_dataset(o.input, labels);
}

void write_json(const fs::path& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::ostream& six(std::ostream& out)
{
    return out << std::setprecision(6);
}

std::vector<Baseline> parse_baselines(const std::vector<std::string>& names)
{
    std::vector<Baseline> out;
    for (const auto& name : names) {
        const auto b = parse_baseline(name);
        if (!b)
            throw UsageError("unknown baseline '" + name + "' (expected raw-kmeans or pca-kmeans)");
        out.push_back(*b);
    }
    return out;
}

int cmd_cluster(const Options& o, const Json& invocation)
{
    const DataMatrix data = load(o);
    const OscReport report = run_osc(data, o.theta, kmeans_config(o));

    fs::create_directories(o.out_dir);
    Json j = to_json(report);
    j["invocation"] = invocation;
    const auto env = experiments::environment();
    j["environment"] = {{"threads", env.threads}, {"build_id", env.build_id}, {"rng", env.rng}};
    write_json(fs::path(o.out_dir) / "report.json", j);
    io::write_labels(fs::path(o.out_dir) / "assignments.txt", report.clusters.assignments);
    io::write_trace_csv(fs::path(o.out_dir) / "trace.csv", report.clusters.objective_trace);

    six(std::cout) << "dataset " << report.dataset << "  N=" << report.n << " p=" << report.p << "\n"
                   << "theta0 " << report.theta0 << "  m=" << report.m << "  theta(m)=" << report.theta_of_m << "\n"
                   << "k-means objective " << report.clusters.objective() << " after " << report.clusters.iterations
                   << " iterations (restart " << report.clusters.restart_index << ")\n";
    if (report.metrics)
        std::cout << "acc " << report.metrics->acc << "  nmi " << report.metrics->nmi << "  ari " << report.metrics->ari
                  << "\n";
    if (o.verbose)
        std::cout << "timings_ms standardize " << report.timings.standardize << "  eigen " << report.timings.eigen
                  << "  kmeans " << report.timings.kmeans << "  total " << report.timings.total << "\n";
    std::cout << "wrote " << (fs::path(o.out_dir) / "report.json").string() << "\n";
    return 0;
}

experiments::ExperimentConfig experiment_config(const Options& o)
{
    experiments::ExperimentConfig cfg;
    cfg.dataset = absolute_or_empty(o.input);
    cfg.labels = absolute_or_empty(o.labels);
    cfg.theta_grid = o.theta_grid;
    cfg.theta0 = o.theta;
    cfg.k = o.k;
    cfg.repeats = o.repeats;
    cfg.subset_counts = o.subset_counts;
    cfg.seed = o.seed;
    cfg.baselines = parse_baselines(o.baselines);
    cfg.kmeans = kmeans_config(o);
    return cfg;
}

int finish_experiment(const experiments::ExperimentReport& report, const Options& o, const Json& invocation)
{
    experiments::write_report(report, o.out_dir);
    // Re-open report.json to embed the invocation for reruns.
    const fs::path path = fs::path(o.out_dir) / "report.json";
    Json j;
    {
        std::ifstream in(path);
        j = Json::parse(in);
    }
    j["invocation"] = invocation;
    write_json(path, j);

    six(std::cout) << std::left << std::setw(12) << "setting" << std::setw(12) << "method" << std::setw(8) << "m"
                   << std::setw(22) << "acc (mean/sd)" << std::setw(22) << "nmi (mean/sd)" << std::setw(12)
                   << "total_ms" << "\n";
    for (const auto& c : report.cells) {
        std::cout << std::setw(12) << c.setting << std::setw(12) << c.method << std::setw(8) << c.m_mean;
        auto pair = [](const std::optional<experiments::Summary>& s) {
            std::ostringstream out;
            six(out);
            if (s)
                out << s->mean << " / " << s->sd;
            else
                out << "-";
            return out.str();
        };
        std::cout << std::setw(22) << pair(c.acc) << std::setw(22) << pair(c.nmi) << std::setw(12) << c.total_ms.mean
                  << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

lab::SubspaceModel theorem_model(const Options& o)
{
    lab::SubspaceModel model;
    model.p = o.p;
    model.subspace_dims = o.dims;
    model.cluster_sizes = o.sizes;
    model.noise_sigmas = o.sigmas;
    model.signal_min_eig = o.signal_min_eig.empty() ? std::vector<double>(o.dims.size(), 1.0) : o.signal_min_eig;
    model.signal_mean = o.signal_mean;
    model.overlap = o.overlap;
    model.seed = o.seed;
    return model;
}

int cmd_validate_theorem(const Options& o, const Json& invocation)
{
    const auto model = theorem_model(o);
    lab::check_model(model);
    const int m = o.m > 0 ? o.m : model.union_dim();
    const auto verdict = lab::validate(model, m, o.trials);

    fs::create_directories(o.out_dir);
    Json j{{"invocation", invocation}, {"model", to_json(model)}, {"verdict", to_json(verdict)}};
    if (!o.decay_grid.empty()) {
        const auto study = lab::error_decay_study(model, o.decay_grid, o.trials);
        j["decay"] = to_json(study);
        std::ofstream(fs::path(o.out_dir) / "decay.csv", std::ios::binary) << decay_table_csv(study);
        std::cout << decay_table_csv(study);
        six(std::cout) << "decay slope (max) " << study.slope_max << "  (rms) " << study.slope_rms << "\n";
    }
    write_json(fs::path(o.out_dir) / "verdict.json", j);
    if (o.emit_data) {
        const auto sample = lab::generate(model);
        io::write_matrix_csv(fs::path(o.out_dir) / "data.csv", sample.y.transpose());
        io::write_labels(fs::path(o.out_dir) / "labels.txt", sample.labels);
    }

    six(std::cout) << "trials " << verdict.trials << "  m " << verdict.m << "  m_union " << verdict.m_union << "\n"
                   << "orthonormality_err " << verdict.orthonormality_err << "  residual_orth_err "
                   << verdict.residual_orth_err << "\n";
    for (std::size_t i = 0; i < verdict.within_diag_obs.size(); ++i)
        std::cout << "cluster " << i << " diag " << verdict.within_diag_obs[i] << "  pred(m_i) "
                  << verdict.within_diag_pred[i] << "  pred(m_union) " << verdict.within_diag_pred_union[i] << "\n";
    std::cout << "cross_block_max " << verdict.cross_block_max << "  within_offdiag_max " << verdict.within_offdiag_max
              << "  delta_hat " << verdict.delta_hat << "\n";
    return 0;
}

int cmd_metrics(const Options& o)
{
    const auto truth = io::read_labels(o.true_path);
    const auto pred = io::read_labels(o.pred_path);
    const auto report = evaluate(truth, pred);
    Json j{{"acc", report.acc},
           {"nmi", report.nmi},
           {"ari", report.ari},
           {"n", report.n},
           {"clusters_true", report.clusters_true},
           {"clusters_pred", report.clusters_pred}};
    // Six significant digits on the console; files keep full precision.
    std::ostringstream out;
    six(out) << "{\"acc\": " << report.acc << ", \"nmi\": " << report.nmi << ", \"ari\": " << report.ari
             << ", \"n\": " << report.n << ", \"clusters_true\": " << report.clusters_true
             << ", \"clusters_pred\": " << report.clusters_pred << "}";
    std::cout << out.str() << "\n";
    return 0;
}

}  // namespace

int run(int argc, char** argv)
{
    CLI::App root{"Orthogonal subspace clustering toolkit"};
    root.require_subcommand(1);
    Options o;

    Command cluster(root, "cluster", "Cluster a data matrix with OSC");
    add_common(cluster, o);
    cluster.bind("input", o.input, "Data matrix (CSV, one sample per line)");
    cluster.bind("labels", o.labels, "Ground-truth labels, one integer per line");
    cluster.bind("k", o.k, "Number of clusters");
    cluster.bind("theta", o.theta, "Cumulative variance threshold theta0");
    add_kmeans(cluster, o);

    Command sweep(root, "sweep", "Threshold sweep over theta0");
    add_common(sweep, o);
    sweep.bind("input", o.input, "Data matrix (CSV)");
    sweep.bind("labels", o.labels, "Ground-truth labels");
    sweep.bind("k", o.k, "Number of clusters (default: distinct labels)");
    sweep.bind("theta-grid", o.theta_grid, "Comma-separated theta0 values");
    sweep.bind("repeats", o.repeats, "Repeats per setting");
    sweep.bind("baselines", o.baselines, "raw-kmeans,pca-kmeans");
    add_kmeans(sweep, o);

    Command subset(root, "subset", "Robustness over category subsets");
    add_common(subset, o);
    subset.bind("input", o.input, "Data matrix (CSV)");
    subset.bind("labels", o.labels, "Ground-truth labels");
    subset.bind("theta", o.theta, "Cumulative variance threshold theta0");
    subset.bind("subset-counts", o.subset_counts, "Comma-separated category counts");
    subset.bind("repeats", o.repeats, "Repeats per setting");
    subset.bind("baselines", o.baselines, "raw-kmeans,pca-kmeans");
    add_kmeans(subset, o);

    Command bench(root, "bench", "Runtime comparison against baselines");
    add_common(bench, o);
    bench.bind("input", o.input, "Data matrix (CSV)");
    bench.bind("labels", o.labels, "Ground-truth labels (optional)");
    bench.bind("k", o.k, "Number of clusters (default: distinct labels)");
    bench.bind("theta", o.theta, "Cumulative variance threshold theta0");
    bench.bind("repeats", o.repeats, "Timed repeats");
    bench.bind("baselines", o.baselines, "raw-kmeans,pca-kmeans");
    add_kmeans(bench, o);

    Command theorem(root, "validate-theorem", "Monte Carlo check of the residual-orthogonality theorem");
    add_common(theorem, o);
    theorem.bind("p", o.p, "Ambient dimension");
    theorem.bind("dims", o.dims, "Subspace dimension per cluster");
    theorem.bind("sizes", o.sizes, "Samples per cluster");
    theorem.bind("sigmas", o.sigmas, "Noise standard deviation per cluster");
    theorem.bind("signal-min-eig", o.signal_min_eig, "Signal variance per cluster (default 1)");
    theorem.bind("signal-mean", o.signal_mean, "Signal mean length inside each subspace");
    theorem.bind("overlap", o.overlap, "Basis rotation toward the previous cluster, [0, 1)");
    theorem.bind("trials", o.trials, "Monte Carlo trials");
    theorem.bind("m", o.m, "Retained dimension (default: union dimension)");
    theorem.bind("decay-grid", o.decay_grid, "Total N values for the error-decay study");
    theorem.app()->add_flag("--emit-data", o.emit_data, "Also write one sample as data.csv + labels.txt");

    Command metrics(root, "metrics", "ACC/NMI/ARI between two label files");
    metrics.bind("true", o.true_path, "Ground-truth labels");
    metrics.bind("pred", o.pred_path, "Predicted labels");

    try {
        root.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return root.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return root.exit(e);
    } catch (const CLI::ParseError& e) {
        root.exit(e);
        return 2;
    }

    Command* active = nullptr;
    for (Command* c : {&cluster, &sweep, &subset, &bench, &theorem, &metrics})
        if (c->app()->parsed())
            active = c;

    try {
        active->apply_config(o.config);
        if (active == &cluster)
            active->require({"input", "k"}, o);
        else if (active == &sweep || active == &subset)
            active->require({"input", "labels"}, o);
        else if (active == &bench)
            active->require({"input"}, o);
        else if (active == &metrics)
            active->require({"true", "pred"}, o);

        set_max_threads(o.threads);
        o.input = absolute_or_empty(o.input);
        o.labels = absolute_or_empty(o.labels);
        const Json invocation = active->resolved();

        if (active == &cluster)
            return cmd_cluster(o, invocation);
        if (active == &sweep)
            return finish_experiment(experiments::sweep_theta(load(o), experiment_config(o)), o, invocation);
        if (active == &subset)
            return finish_experiment(experiments::subset_robustness(load(o), experiment_config(o)), o, invocation);
        if (active == &bench)
            return finish_experiment(experiments::bench_runtime(load(o), experiment_config(o)), o, invocation);
        if (active == &theorem)
            return cmd_validate_theorem(o, invocation);
        return cmd_metrics(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << active->app()->help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.detail() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: Io: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace osc::cli
