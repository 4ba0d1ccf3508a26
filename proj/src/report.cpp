#include "osc/report.hpp"

#include <iomanip>
#include <sstream>

namespace osc {

Json to_json(const KMeansConfig& cfg)
{
    return Json{{"k", cfg.k}, {"max_iter", cfg.max_iter}, {"tol", cfg.tol}, {"restarts", cfg.restarts}, {"seed", cfg.seed}};
}

Json to_json(const MetricsReport& metrics)
{
    Json mapping = Json::object();
    for (const auto& [pred, truth] : metrics.mapping)
        mapping[std::to_string(pred)] = truth;
    return Json{{"acc", metrics.acc},
                {"nmi", metrics.nmi},
                {"ari", metrics.ari},
                {"n", metrics.n},
                {"clusters_true", metrics.clusters_true},
                {"clusters_pred", metrics.clusters_pred},
                {"mapping", mapping}};
}

Json to_json(const StageTimings& t)
{
    return Json{{"standardize", t.standardize}, {"eigen", t.eigen}, {"kmeans", t.kmeans}, {"total", t.total}};
}

Json to_json(const OscReport& report)
{
    Json j{{"dataset", report.dataset},
           {"N", report.n},
           {"p", report.p},
           {"theta0", report.theta0},
           {"m", report.m},
           {"theta_of_m", report.theta_of_m},
           {"timings_ms", to_json(report.timings)},
           {"kmeans",
            {{"iters", report.clusters.iterations},
             {"objective", report.clusters.objective()},
             {"restart_index", report.clusters.restart_index},
             {"seed_used", report.clusters.seed_used},
             {"rng", report.clusters.rng},
             {"objective_trace", report.clusters.objective_trace}}}};
    if (report.metrics)
        j["metrics"] = to_json(*report.metrics);
    j["seed"] = report.seed;
    return j;
}

Json to_json(const lab::SubspaceModel& model)
{
    return Json{{"p", model.p},
                {"subspace_dims", model.subspace_dims},
                {"cluster_sizes", model.cluster_sizes},
                {"noise_sigmas", model.noise_sigmas},
                {"signal_min_eig", model.signal_min_eig},
                {"signal_mean", model.signal_mean},
                {"overlap", model.overlap},
                {"seed", model.seed}};
}

Json to_json(const lab::TheoremVerdict& v)
{
    return Json{{"trials", v.trials},
                {"m", v.m},
                {"m_union", v.m_union},
                {"orthonormality_err", v.orthonormality_err},
                {"residual_orth_err", v.residual_orth_err},
                {"idempotence_err", v.idempotence_err},
                {"residual_norm_max", v.residual_norm_max},
                {"within_diag_obs", v.within_diag_obs},
                {"within_diag_pred", v.within_diag_pred},
                {"within_diag_pred_union", v.within_diag_pred_union},
                {"cross_block_max", v.cross_block_max},
                {"cross_entry_max", v.cross_entry_max},
                {"within_offdiag_max", v.within_offdiag_max},
                {"within_offdiag_rms", v.within_offdiag_rms},
                {"delta_hat", v.delta_hat},
                {"max_trial_ms", v.max_trial_ms}};
}

Json to_json(const lab::DecayStudy& study)
{
    Json rows = Json::array();
    for (const auto& r : study.rows)
        rows.push_back({{"N", r.n},
                        {"cross_block_max", r.cross_block_max},
                        {"within_offdiag_max", r.within_offdiag_max},
                        {"within_offdiag_rms", r.within_offdiag_rms}});
    return Json{{"rows", rows}, {"slope_rms", study.slope_rms}, {"slope_max", study.slope_max}};
}

Json to_json(const experiments::ExperimentConfig& cfg)
{
    Json baselines = Json::array();
    for (auto b : cfg.baselines)
        baselines.push_back(std::string(baseline_name(b)));
    return Json{{"dataset", cfg.dataset},
                {"labels", cfg.labels},
                {"theta_grid", cfg.theta_grid},
                {"theta0", cfg.theta0},
                {"k", cfg.k},
                {"repeats", cfg.repeats},
                {"subset_counts", cfg.subset_counts},
                {"seed", cfg.seed},
                {"baselines", baselines},
                {"kmeans", to_json(cfg.kmeans)}};
}

Json to_json(const experiments::RunRecord& run)
{
    Json j{{"run_index", run.run_index},
           {"setting", run.setting},
           {"method", run.method},
           {"theta0", run.theta0},
           {"m", run.m},
           {"seed", run.seed}};
    if (run.metrics)
        j["metrics"] = {{"acc", run.metrics->acc}, {"nmi", run.metrics->nmi}, {"ari", run.metrics->ari}};
    j["timings_ms"] = to_json(run.timings);
    j["iterations"] = run.iterations;
    if (!run.categories.empty())
        j["categories"] = run.categories;
    j["objective_trace"] = run.objective_trace;
    return j;
}

Json to_json(const experiments::Cell& cell)
{
    auto summary = [](const experiments::Summary& s) { return Json{{"mean", s.mean}, {"sd", s.sd}}; };
    Json j{{"setting", cell.setting}, {"method", cell.method}, {"runs", cell.runs}, {"m_mean", cell.m_mean}};
    if (cell.acc) {
        j["acc"] = summary(*cell.acc);
        j["nmi"] = summary(*cell.nmi);
        j["ari"] = summary(*cell.ari);
    }
    j["timings_ms"] = {{"standardize", summary(cell.standardize_ms)},
                       {"eigen", summary(cell.eigen_ms)},
                       {"kmeans", summary(cell.kmeans_ms)},
                       {"total", summary(cell.total_ms)}};
    return j;
}

Json to_json(const experiments::ExperimentReport& report)
{
    Json cells = Json::array();
    for (const auto& c : report.cells)
        cells.push_back(to_json(c));
    return Json{{"kind", report.kind},
                {"dataset", report.dataset},
                {"config", to_json(report.config)},
                {"environment",
                 {{"threads", report.env.threads}, {"build_id", report.env.build_id}, {"rng", report.env.rng}}},
                {"cells", cells},
                {"runs", report.runs.size()},
                // External baseline numbers (SSC, LRR, ...) can be merged here for table rendering.
                {"external_baselines", Json::object()}};
}

std::string decay_table_csv(const lab::DecayStudy& study)
{
    std::ostringstream out;
    out << "N,cross_block_max,within_offdiag_max,within_offdiag_rms\n" << std::setprecision(17);
    for (const auto& r : study.rows)
        out << r.n << ',' << r.cross_block_max << ',' << r.within_offdiag_max << ',' << r.within_offdiag_rms << '\n';
    return out.str();
}

}  // namespace osc
