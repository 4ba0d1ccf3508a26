#include "osc/io.hpp"
#include "osc/report.hpp"
#include "osc/theorem_lab.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
    std::string err;
};

const fs::path& workdir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "osc_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome run_cli(const std::string& args)
{
    const auto out = workdir() / "stdout.txt";
    const auto err = workdir() / "stderr.txt";
    const std::string cmd =
        "\"" + std::string(OSC_CLI_PATH) + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
}

void write_dataset()
{
    osc::lab::SubspaceModel model;
    model.p = 40;
    model.subspace_dims = {2, 2, 2};
    model.cluster_sizes = {20, 20, 20};
    model.noise_sigmas = {0.02, 0.02, 0.02};
    model.signal_min_eig = {1.0, 1.0, 1.0};
    model.signal_mean = 5.0;
    model.seed = 3;
    const auto s = osc::lab::generate(model);
    osc::io::write_matrix_csv(workdir() / "data.csv", s.y.transpose());
    osc::io::write_labels(workdir() / "labels.txt", s.labels);
}

std::string path(const char* name)
{
    return "\"" + (workdir() / name).string() + "\"";
}

}  // namespace

TEST_CASE("cluster writes a report with metrics")
{
    write_dataset();
    const auto r = run_cli("cluster --input " + path("data.csv") + " --labels " + path("labels.txt") +
                           " --k 3 --seed 5 --out-dir " + path("run1"));
    REQUIRE(r.status == 0);
    CHECK(r.out.find("acc 1") != std::string::npos);
    const auto j = osc::Json::parse(slurp(workdir() / "run1" / "report.json"));
    CHECK(j["metrics"]["acc"].get<double>() == 1.0);
    CHECK(j["N"].get<int>() == 60);
    CHECK(j["invocation"]["subcommand"] == "cluster");
    CHECK(j["invocation"]["k"].get<int>() == 3);
    CHECK(fs::exists(workdir() / "run1" / "assignments.txt"));
    CHECK(fs::exists(workdir() / "run1" / "trace.csv"));
}

TEST_CASE("rerunning from a report reproduces it")
{
    write_dataset();
    REQUIRE(run_cli("cluster --input " + path("data.csv") + " --labels " + path("labels.txt") +
                    " --k 3 --seed 8 --restarts 4 --out-dir " + path("first"))
                .status == 0);
    const auto rerun =
        run_cli("cluster --config " + path("first/report.json") + " --out-dir " + path("second"));
    REQUIRE(rerun.status == 0);
    const auto a = osc::Json::parse(slurp(workdir() / "first" / "report.json"));
    const auto b = osc::Json::parse(slurp(workdir() / "second" / "report.json"));
    CHECK(a["metrics"].dump() == b["metrics"].dump());
    CHECK(a["kmeans"]["objective_trace"].dump() == b["kmeans"]["objective_trace"].dump());
    CHECK(a["invocation"].dump() == b["invocation"].dump());
    CHECK(slurp(workdir() / "first" / "assignments.txt") == slurp(workdir() / "second" / "assignments.txt"));
}

TEST_CASE("flags override config values")
{
    write_dataset();
    REQUIRE(run_cli("cluster --input " + path("data.csv") + " --k 3 --out-dir " + path("base")).status == 0);
    REQUIRE(run_cli("cluster --config " + path("base/report.json") + " --k 2 --out-dir " + path("override"))
                .status == 0);
    const auto j = osc::Json::parse(slurp(workdir() / "override" / "report.json"));
    CHECK(j["invocation"]["k"].get<int>() == 2);
}

TEST_CASE("missing required option is a usage error")
{
    write_dataset();
    const auto r = run_cli("cluster --input " + path("data.csv"));
    CHECK(r.status == 2);
    CHECK(r.err.find("--k") != std::string::npos);
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("cluster --bogus 1").status == 2);
    CHECK(run_cli("--help").status == 0);
}

TEST_CASE("metrics subcommand")
{
    {
        std::ofstream(workdir() / "t.txt") << "0\n0\n1\n1\n";
        std::ofstream(workdir() / "p.txt") << "1\n1\n0\n0\n";
        std::ofstream(workdir() / "short.txt") << "1\n1\n0\n";
    }
    const auto ok = run_cli("metrics --true " + path("t.txt") + " --pred " + path("p.txt"));
    CHECK(ok.status == 0);
    const auto j = osc::Json::parse(ok.out);
    CHECK(j["acc"].get<double>() == 1.0);
    CHECK(j["ari"].get<double>() == 1.0);

    const auto bad = run_cli("metrics --true " + path("t.txt") + " --pred " + path("short.txt"));
    CHECK(bad.status == 1);
    CHECK(bad.err.find("LengthMismatch") != std::string::npos);
}

TEST_CASE("data errors exit with status 1")
{
    {
        std::ofstream(workdir() / "nan.csv") << "1,2\nnan,4\n5,6\n";
    }
    const auto r = run_cli("cluster --input " + path("nan.csv") + " --k 2 --out-dir " + path("nan"));
    CHECK(r.status == 1);
    CHECK(r.err.find("error: ") != std::string::npos);
    const auto missing = run_cli("cluster --input " + path("absent.csv") + " --k 2 --out-dir " + path("nan"));
    CHECK(missing.status == 1);
    CHECK(missing.err.find("Io") != std::string::npos);
}

TEST_CASE("experiment and theorem subcommands")
{
    write_dataset();
    const auto sweep = run_cli("sweep --input " + path("data.csv") + " --labels " + path("labels.txt") +
                               " --theta-grid 0.8,0.9 --repeats 2 --restarts 2 --baselines pca-kmeans --out-dir " +
                               path("sweep"));
    REQUIRE(sweep.status == 0);
    const auto sj = osc::Json::parse(slurp(workdir() / "sweep" / "report.json"));
    CHECK(sj["cells"].size() == 4);
    CHECK(sj["invocation"]["subcommand"] == "sweep");
    CHECK(fs::exists(workdir() / "sweep" / "table.csv"));

    const auto subset = run_cli("subset --input " + path("data.csv") + " --labels " + path("labels.txt") +
                                " --subset-counts 2,3 --repeats 2 --restarts 2 --out-dir " + path("subset"));
    CHECK(subset.status == 0);
    const auto too_many = run_cli("subset --input " + path("data.csv") + " --labels " + path("labels.txt") +
                                  " --subset-counts 5 --repeats 1 --out-dir " + path("subset"));
    CHECK(too_many.status == 1);
    CHECK(too_many.err.find("NotEnoughCategories") != std::string::npos);

    const auto bench = run_cli("bench --input " + path("data.csv") + " --labels " + path("labels.txt") +
                               " --repeats 2 --restarts 2 --out-dir " + path("bench"));
    CHECK(bench.status == 0);

    const auto theorem = run_cli("validate-theorem --p 30 --dims 2,2 --sizes 20,20 --sigmas 0.1,0.1 --trials 3 "
                                 "--decay-grid 40,80 --emit-data --out-dir " +
                                 path("theorem"));
    REQUIRE(theorem.status == 0);
    const auto tj = osc::Json::parse(slurp(workdir() / "theorem" / "verdict.json"));
    CHECK(tj["verdict"]["m"].get<int>() == 4);
    CHECK(fs::exists(workdir() / "theorem" / "decay.csv"));
    CHECK(fs::exists(workdir() / "theorem" / "data.csv"));

    const auto infeasible = run_cli("validate-theorem --p 3 --dims 2,2 --sizes 5,5 --sigmas 0.1,0.1 --out-dir " +
                                    path("theorem"));
    CHECK(infeasible.status == 1);
    CHECK(infeasible.err.find("InfeasibleDims") != std::string::npos);
}
