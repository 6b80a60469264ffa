#include "sparq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace sparq::harness {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

struct Bench {
    topo::NetworkConfig config;
    std::vector<routing::RoutingGraph> graphs;  // one per 30 s style step
};

Bench load_bench(const ExperimentSpec& spec, int graph_count) {
    Bench bench;
    bench.config = topo::NetworkConfig::load(spec.config_path);
    const auto series =
        topo::snapshot_series(bench.config, 0.0, bench.config.step_seconds, graph_count);
    bench.graphs.reserve(series.size());
    for (const topo::GraphSnapshot& snap : series) {
        bench.graphs.emplace_back(snap);
    }
    return bench;
}

routing::TrainConfig train_config_for(const ExperimentSpec& spec) {
    routing::TrainConfig config;
    config.episodes = spec.episodes;
    config.mini_episodes = spec.mini_episodes;
    config.seed = spec.seed;
    return config;
}

routing::RoutingModel obtain_model(const ExperimentSpec& spec, const Bench& bench,
                                   nlohmann::json& metadata) {
    if (!spec.model_path.empty()) {
        routing::RoutingModel model = routing::RoutingModel::load(spec.model_path);
        if (model.node_count != bench.graphs.front().node_count()) {
            throw std::invalid_argument("model was trained for a different node count");
        }
        metadata["model"] = {{"source", spec.model_path}};
        return model;
    }
    std::vector<routing::RoutingGraph> training(bench.graphs.begin(), bench.graphs.end());
    const routing::TrainResult trained =
        routing::train(training, bench.config.max_degree, train_config_for(spec));
    metadata["model"] = {{"source", "trained"},
                         {"episodes_run", trained.episodes_run},
                         {"converged", routing::converged(trained.loss_history)}};
    return trained.model;
}

std::pair<int, int> draw_ground_pair(const routing::RoutingGraph& graph, Rng& rng) {
    const auto& grounds = graph.ground_ids();
    if (grounds.size() < 2) {
        throw std::invalid_argument("experiment network needs at least two ground nodes");
    }
    const int src = grounds[rng.uniform_index(static_cast<int>(grounds.size()))];
    int dst = src;
    while (dst == src) {
        dst = grounds[rng.uniform_index(static_cast<int>(grounds.size()))];
    }
    return {src, dst};
}

void record(ResultSet& results, const ExperimentSpec& spec, int step, int trial,
            const std::string& metric, double value) {
    results.rows.push_back(
        ResultRow{experiment_name_str(spec.name), step, trial, metric, value});
}

nlohmann::json base_metadata(const ExperimentSpec& spec) {
    nlohmann::json meta;
    meta["experiment"] = experiment_name_str(spec.name);
    meta["seed"] = spec.seed;
    meta["trials"] = spec.trials;
    meta["time_steps"] = spec.time_steps;
    meta["versions"] = {{"sparq", kArtifactVersion}};
    if (!spec.config_path.empty()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a_hash_file(spec.config_path)));
        meta["config_hash"] = buf;
        meta["config_path"] = spec.config_path;
    }
    return meta;
}

// Routes with the trained agent and reports the executed third-party
// fidelity, recording failures under <prefix>_route_failed or
// <prefix>_plan_failed.
void evaluate_request(ResultSet& results, const ExperimentSpec& spec, int step, int trial,
                      const std::string& prefix, const routing::RoutingModel& model,
                      const routing::RoutingGraph& graph, int src, int dst, int* route_ok,
                      int* plan_ok) {
    const auto path = routing::find_path(model, graph, src, dst);
    if (!path) {
        record(results, spec, step, trial, prefix + "_route_failed", 1.0);
        return;
    }
    if (route_ok != nullptr) {
        ++*route_ok;
    }
    try {
        const dist::DistributionResult outcome =
            dist::execute(dist::plan_tped(graph, *path), graph);
        record(results, spec, step, trial, prefix + "_fidelity", outcome.fidelity);
        if (plan_ok != nullptr) {
            ++*plan_ok;
        }
    } catch (const dist::PlanningError&) {
        record(results, spec, step, trial, prefix + "_plan_failed", 1.0);
    }
}

}  // namespace

ExperimentName parse_experiment_name(const std::string& name) {
    if (name == "threshold_sweep") return ExperimentName::ThresholdSweep;
    if (name == "policy_compare") return ExperimentName::PolicyCompare;
    if (name == "routing_compare") return ExperimentName::RoutingCompare;
    if (name == "dynamic_vs_static") return ExperimentName::DynamicVsStatic;
    if (name == "air_ablation") return ExperimentName::AirAblation;
    if (name == "timing") return ExperimentName::Timing;
    throw std::invalid_argument("unknown experiment: " + name);
}

const char* experiment_name_str(ExperimentName name) {
    switch (name) {
        case ExperimentName::ThresholdSweep:
            return "threshold_sweep";
        case ExperimentName::PolicyCompare:
            return "policy_compare";
        case ExperimentName::RoutingCompare:
            return "routing_compare";
        case ExperimentName::DynamicVsStatic:
            return "dynamic_vs_static";
        case ExperimentName::AirAblation:
            return "air_ablation";
        case ExperimentName::Timing:
            return "timing";
    }
    throw std::invalid_argument("unknown experiment enum value");
}

void ExperimentSpec::validate() const {
    if (trials < 1 || time_steps < 1) {
        throw std::invalid_argument("trials and time_steps must be at least 1");
    }
    if (episodes < 0 || mini_episodes < 1) {
        throw std::invalid_argument("training budget fields are out of range");
    }
    if (name != ExperimentName::ThresholdSweep && config_path.empty()) {
        throw std::invalid_argument("this experiment needs a network config");
    }
}

ResultSet run_threshold_sweep(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    for (int i = 0; i <= 100; ++i) {
        const double eta = static_cast<double>(i) / 100.0;
        const double fidelity =
            quantum::entanglement_fidelity(quantum::link_pair(1.0, eta));
        record(results, spec, 0, i, "eta", eta);
        record(results, spec, 0, i, "fidelity", fidelity);
    }
    results.metadata["requests"] = {{"total", 101}};
    return results;
}

ResultSet run_policy_compare(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    Bench bench = load_bench(spec, std::max(spec.episodes, spec.time_steps));
    const routing::RoutingModel model = obtain_model(spec, bench, results.metadata);
    int routed = 0, tped_ok = 0, intuitive_ok = 0, total = 0;
    for (int step = 0; step < spec.time_steps; ++step) {
        const routing::RoutingGraph& graph = bench.graphs[step];
        for (int trial = 0; trial < spec.trials; ++trial) {
            Rng rng(mix_seed(spec.seed, step, trial));
            const auto [src, dst] = draw_ground_pair(graph, rng);
            ++total;
            const auto path = routing::find_path(model, graph, src, dst);
            if (!path) {
                record(results, spec, step, trial, "route_failed", 1.0);
                continue;
            }
            ++routed;
            record(results, spec, step, trial, "path_min_eta",
                   routing::path_min_eta(graph, *path));
            try {
                const auto outcome = dist::execute(dist::plan_tped(graph, *path), graph);
                record(results, spec, step, trial, "tped_fidelity", outcome.fidelity);
                record(results, spec, step, trial, "tped_memory",
                       static_cast<double>(outcome.memory_units));
                ++tped_ok;
            } catch (const dist::PlanningError&) {
                record(results, spec, step, trial, "tped_plan_failed", 1.0);
            }
            try {
                const auto outcome = dist::execute(dist::plan_intuitive(graph, *path), graph);
                record(results, spec, step, trial, "intuitive_fidelity", outcome.fidelity);
                record(results, spec, step, trial, "intuitive_memory",
                       static_cast<double>(outcome.memory_units));
                ++intuitive_ok;
            } catch (const dist::PlanningError&) {
                record(results, spec, step, trial, "intuitive_plan_failed", 1.0);
            }
        }
    }
    results.metadata["requests"] = {{"total", total},
                                    {"routed", routed},
                                    {"tped_ok", tped_ok},
                                    {"intuitive_ok", intuitive_ok}};
    return results;
}

ResultSet run_routing_compare(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    Bench bench = load_bench(spec, std::max(spec.episodes, spec.time_steps));
    const routing::RoutingModel model = obtain_model(spec, bench, results.metadata);
    int total = 0, dqn_routed = 0, sp_routed = 0, dqn_exec = 0, sp_exec = 0;
    for (int step = 0; step < spec.time_steps; ++step) {
        const routing::RoutingGraph& graph = bench.graphs[step];
        for (int trial = 0; trial < spec.trials; ++trial) {
            Rng rng(mix_seed(spec.seed, step, trial));
            const auto [src, dst] = draw_ground_pair(graph, rng);
            ++total;
            const auto dqn_path = routing::find_path(model, graph, src, dst);
            if (dqn_path) {
                ++dqn_routed;
                record(results, spec, step, trial, "dqn_min_eta",
                       routing::path_min_eta(graph, *dqn_path));
                try {
                    const auto outcome =
                        dist::execute(dist::plan_tped(graph, *dqn_path), graph);
                    record(results, spec, step, trial, "dqn_fidelity", outcome.fidelity);
                    ++dqn_exec;
                } catch (const dist::PlanningError&) {
                    record(results, spec, step, trial, "dqn_plan_failed", 1.0);
                }
            } else {
                record(results, spec, step, trial, "dqn_route_failed", 1.0);
            }
            const auto sp_path = routing::shortest_path_baseline(graph, src, dst);
            if (sp_path) {
                ++sp_routed;
                record(results, spec, step, trial, "sp_min_eta",
                       routing::path_min_eta(graph, *sp_path));
                try {
                    const auto outcome = dist::execute(dist::plan_tped(graph, *sp_path), graph);
                    record(results, spec, step, trial, "sp_fidelity", outcome.fidelity);
                    ++sp_exec;
                } catch (const dist::PlanningError&) {
                    record(results, spec, step, trial, "sp_plan_failed", 1.0);
                }
            } else {
                record(results, spec, step, trial, "sp_route_failed", 1.0);
            }
        }
    }
    results.metadata["requests"] = {{"total", total},
                                    {"dqn_routed", dqn_routed},
                                    {"sp_routed", sp_routed},
                                    {"dqn_executed", dqn_exec},
                                    {"sp_executed", sp_exec}};
    return results;
}

ResultSet run_dynamic_vs_static(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    Bench bench = load_bench(spec, std::max(spec.episodes, spec.time_steps));

    routing::TrainConfig config = train_config_for(spec);
    config.halt_on_convergence = true;
    const auto dynamic_result =
        routing::train(bench.graphs, bench.config.max_degree, config);
    const std::vector<routing::RoutingGraph> first_only(bench.graphs.begin(),
                                                        bench.graphs.begin() + 1);
    const auto static_result = routing::train(first_only, bench.config.max_degree, config);
    results.metadata["dynamic"] = {{"episodes_run", dynamic_result.episodes_run},
                                   {"converged",
                                    routing::converged(dynamic_result.loss_history)}};
    results.metadata["static"] = {{"episodes_run", static_result.episodes_run},
                                  {"converged", routing::converged(static_result.loss_history)}};

    int total = 0, dynamic_ok = 0, static_ok = 0;
    for (int step = 0; step < spec.time_steps; ++step) {
        const routing::RoutingGraph& graph = bench.graphs[step];
        for (int trial = 0; trial < spec.trials; ++trial) {
            Rng rng(mix_seed(spec.seed, step, trial));
            const auto [src, dst] = draw_ground_pair(graph, rng);
            ++total;
            evaluate_request(results, spec, step, trial, "dynamic", dynamic_result.model, graph,
                             src, dst, nullptr, &dynamic_ok);
            evaluate_request(results, spec, step, trial, "static", static_result.model, graph,
                             src, dst, nullptr, &static_ok);
        }
    }
    results.metadata["requests"] = {{"total", total},
                                    {"dynamic_executed", dynamic_ok},
                                    {"static_executed", static_ok}};
    return results;
}

ResultSet run_air_ablation(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    Bench full = load_bench(spec, std::max(spec.episodes, spec.time_steps));

    // The ablated network drops the air layer and relaxes the threshold
    // to 0.5 to stretch satellite coverage.
    topo::NetworkConfig ablated_config = full.config;
    ablated_config.haps.clear();
    ablated_config.threshold = 0.5;
    Bench ablated;
    ablated.config = ablated_config;
    const auto ablated_series = topo::snapshot_series(
        ablated_config, 0.0, ablated_config.step_seconds,
        std::max(spec.episodes, spec.time_steps));
    for (const topo::GraphSnapshot& snap : ablated_series) {
        ablated.graphs.emplace_back(snap);
    }

    const routing::RoutingModel full_model = obtain_model(spec, full, results.metadata);
    const auto ablated_result =
        routing::train(ablated.graphs, ablated.config.max_degree, train_config_for(spec));

    int total = 0, full_ok = 0, ablated_ok = 0;
    for (int step = 0; step < spec.time_steps; ++step) {
        for (int trial = 0; trial < spec.trials; ++trial) {
            Rng rng(mix_seed(spec.seed, step, trial));
            const auto [src, dst] = draw_ground_pair(full.graphs[step], rng);
            ++total;
            evaluate_request(results, spec, step, trial, "full", full_model,
                             full.graphs[step], src, dst, nullptr, &full_ok);
            evaluate_request(results, spec, step, trial, "hapfree", ablated_result.model,
                             ablated.graphs[step], src, dst, nullptr, &ablated_ok);
        }
    }
    results.metadata["requests"] = {{"total", total},
                                    {"full_executed", full_ok},
                                    {"hapfree_executed", ablated_ok}};
    results.metadata["hapfree_threshold"] = 0.5;
    return results;
}

ResultSet run_timing(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet results;
    results.metadata = base_metadata(spec);
    Bench bench = load_bench(spec, std::max(spec.episodes, spec.time_steps));
    const routing::RoutingModel model = obtain_model(spec, bench, results.metadata);
    using Clock = std::chrono::steady_clock;
    double dqn_total_ms = 0.0, sp_total_ms = 0.0;
    int count = 0;
    for (int step = 0; step < spec.time_steps; ++step) {
        const routing::RoutingGraph& graph = bench.graphs[step];
        for (int trial = 0; trial < spec.trials; ++trial) {
            Rng rng(mix_seed(spec.seed, step, trial));
            const auto [src, dst] = draw_ground_pair(graph, rng);
            const auto t0 = Clock::now();
            const auto dqn_path = routing::find_path(model, graph, src, dst);
            const auto t1 = Clock::now();
            const auto sp_path = routing::shortest_path_baseline(graph, src, dst);
            const auto t2 = Clock::now();
            (void)dqn_path;
            (void)sp_path;
            const double dqn_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
            const double sp_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
            record(results, spec, step, trial, "dqn_route_ms", dqn_ms);
            record(results, spec, step, trial, "sp_route_ms", sp_ms);
            dqn_total_ms += dqn_ms;
            sp_total_ms += sp_ms;
            ++count;
        }
    }
    results.metadata["requests"] = {{"total", count}};
    results.metadata["mean_dqn_route_ms"] = dqn_total_ms / count;
    results.metadata["mean_sp_route_ms"] = sp_total_ms / count;
    results.metadata["dqn_over_sp_time_ratio"] =
        sp_total_ms > 0.0 ? dqn_total_ms / sp_total_ms : 0.0;
    return results;
}

ResultSet run_experiment(const ExperimentSpec& spec) {
    switch (spec.name) {
        case ExperimentName::ThresholdSweep:
            return run_threshold_sweep(spec);
        case ExperimentName::PolicyCompare:
            return run_policy_compare(spec);
        case ExperimentName::RoutingCompare:
            return run_routing_compare(spec);
        case ExperimentName::DynamicVsStatic:
            return run_dynamic_vs_static(spec);
        case ExperimentName::AirAblation:
            return run_air_ablation(spec);
        case ExperimentName::Timing:
            return run_timing(spec);
    }
    throw std::invalid_argument("unknown experiment enum value");
}

std::string format_value(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_to_string(const ResultSet& results) {
    std::string out = "experiment,time_step,trial,metric,value\n";
    for (const ResultRow& row : results.rows) {
        out += row.experiment;
        out += ',';
        out += std::to_string(row.time_step);
        out += ',';
        out += std::to_string(row.trial);
        out += ',';
        out += row.metric;
        out += ',';
        out += format_value(row.value);
        out += '\n';
    }
    return out;
}

void emit(ResultSet& results, const std::string& csv_path) {
    std::sort(results.rows.begin(), results.rows.end(),
              [](const ResultRow& a, const ResultRow& b) {
                  return std::tie(a.experiment, a.time_step, a.trial, a.metric) <
                         std::tie(b.experiment, b.time_step, b.trial, b.metric);
              });
    const std::filesystem::path path(csv_path);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
        throw std::runtime_error("cannot write results file: " + csv_path);
    }
    csv << csv_to_string(results);
    if (!csv) {
        throw std::runtime_error("failed while writing results file: " + csv_path);
    }

    std::filesystem::path meta_path(csv_path);
    if (meta_path.extension() == ".csv") {
        meta_path.replace_extension(".meta.json");
    } else {
        meta_path += ".meta.json";
    }
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) {
        throw std::runtime_error("cannot write metadata file: " + meta_path.string());
    }
    meta << results.metadata.dump(2) << "\n";
    if (!meta) {
        throw std::runtime_error("failed while writing metadata file: " + meta_path.string());
    }
}

uint64_t fnv1a_hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file for hashing: " + path);
    }
    uint64_t hash = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) {
            break;
        }
    }
    return hash;
}

}  // namespace sparq::harness
