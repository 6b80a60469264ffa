#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "sparq/experiments.hpp"

namespace {

using sparq::harness::ExperimentSpec;

struct CommonOpts {
    std::string config_path;
    uint64_t seed = 1;
    std::string out_path;
    std::string model_path;
};

std::vector<sparq::routing::RoutingGraph> build_graphs(const sparq::topo::NetworkConfig& config,
                                                       int count) {
    std::vector<sparq::routing::RoutingGraph> graphs;
    for (const auto& snap : sparq::topo::snapshot_series(config, 0.0, config.step_seconds,
                                                         count)) {
        graphs.emplace_back(snap);
    }
    return graphs;
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    const std::filesystem::path path(out_path);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + out_path);
    }
    out << text;
}

nlohmann::json snapshot_to_json(const sparq::topo::GraphSnapshot& snap) {
    nlohmann::json doc;
    doc["time_s"] = snap.time_s;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : snap.nodes) {
        const char* kind = node.kind == sparq::topo::NodeKind::Ground
                               ? "ground"
                               : (node.kind == sparq::topo::NodeKind::Hap ? "hap" : "satellite");
        nodes.push_back({{"id", node.id},
                         {"kind", kind},
                         {"lat", node.position.latitude_deg},
                         {"lon", node.position.longitude_deg},
                         {"alt_m", node.position.altitude_m}});
    }
    doc["nodes"] = nodes;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& edge : snap.edges) {
        edges.push_back({{"a", edge.a},
                         {"b", edge.b},
                         {"eta", edge.transmissivity},
                         {"channel",
                          edge.channel == sparq::topo::ChannelKind::Fiber ? "fiber" : "fso"}});
    }
    doc["edges"] = edges;
    return doc;
}

int run_propagate(const CommonOpts& opts, int steps) {
    const auto config = sparq::topo::NetworkConfig::load(opts.config_path);
    nlohmann::json doc;
    doc["steps"] = nlohmann::json::array();
    for (const auto& snap :
         sparq::topo::snapshot_series(config, 0.0, config.step_seconds, steps)) {
        doc["steps"].push_back(snapshot_to_json(snap));
    }
    write_or_print(opts.out_path, doc.dump(2) + "\n");
    return 0;
}

int run_train(const CommonOpts& opts, int episodes, int mini_episodes) {
    const auto config = sparq::topo::NetworkConfig::load(opts.config_path);
    const auto graphs = build_graphs(config, std::max(episodes, 1));
    sparq::routing::TrainConfig train_config;
    train_config.episodes = episodes;
    train_config.mini_episodes = mini_episodes;
    train_config.seed = opts.seed;
    const auto result = sparq::routing::train(graphs, config.max_degree, train_config);
    if (opts.out_path.empty()) {
        throw std::invalid_argument("train needs --out <model.json>");
    }
    result.model.save(opts.out_path);
    std::cout << "trained " << result.episodes_run << " episodes, final mean loss "
              << (result.loss_history.empty() ? 0.0 : result.loss_history.back())
              << ", converged " << (sparq::routing::converged(result.loss_history) ? "yes" : "no")
              << "\n";
    return 0;
}

int run_route(const CommonOpts& opts, int src, int dst, double time_s) {
    const auto config = sparq::topo::NetworkConfig::load(opts.config_path);
    if (opts.model_path.empty()) {
        throw std::invalid_argument("route needs --model <model.json>");
    }
    const auto model = sparq::routing::RoutingModel::load(opts.model_path);
    const sparq::routing::RoutingGraph graph(sparq::topo::snapshot(config, time_s));
    const auto path = sparq::routing::find_path(model, graph, src, dst);
    nlohmann::json doc;
    doc["src"] = src;
    doc["dst"] = dst;
    doc["time_s"] = time_s;
    if (path) {
        doc["path"] = path->nodes;
        doc["min_eta"] = sparq::routing::path_min_eta(graph, *path);
    } else {
        doc["path"] = nullptr;
    }
    write_or_print(opts.out_path, doc.dump(2) + "\n");
    return 0;
}

int run_distribute(const CommonOpts& opts, int src, int dst, double time_s,
                   const std::string& policy) {
    const auto config = sparq::topo::NetworkConfig::load(opts.config_path);
    const sparq::routing::RoutingGraph graph(sparq::topo::snapshot(config, time_s));
    std::optional<sparq::routing::RoutePath> path;
    if (!opts.model_path.empty()) {
        const auto model = sparq::routing::RoutingModel::load(opts.model_path);
        path = sparq::routing::find_path(model, graph, src, dst);
    } else {
        path = sparq::routing::shortest_path_baseline(graph, src, dst);
    }
    nlohmann::json doc;
    doc["src"] = src;
    doc["dst"] = dst;
    doc["time_s"] = time_s;
    if (!path) {
        doc["path"] = nullptr;
        write_or_print(opts.out_path, doc.dump(2) + "\n");
        return 0;
    }
    doc["path"] = path->nodes;
    auto report = [&](const std::string& name) -> nlohmann::json {
        try {
            const auto plan = name == "tped" ? sparq::dist::plan_tped(graph, *path)
                                             : sparq::dist::plan_intuitive(graph, *path);
            const auto outcome = sparq::dist::execute(plan, graph);
            return nlohmann::json{{"plan", plan.to_json()},
                                  {"fidelity", outcome.fidelity},
                                  {"pairs", outcome.pair_count},
                                  {"swaps", outcome.swap_count},
                                  {"memory_units", outcome.memory_units},
                                  {"final_state", outcome.final_state.to_json()}};
        } catch (const sparq::dist::PlanningError& e) {
            return nlohmann::json{{"error", e.what()}};
        }
    };
    if (policy == "tped" || policy == "both") {
        doc["tped"] = report("tped");
    }
    if (policy == "intuitive" || policy == "both") {
        doc["intuitive"] = report("intuitive");
    }
    write_or_print(opts.out_path, doc.dump(2) + "\n");
    return 0;
}

int run_experiment_cmd(const CommonOpts& opts, const std::string& name, int trials, int steps,
                       int episodes, int mini_episodes) {
    ExperimentSpec spec;
    spec.name = sparq::harness::parse_experiment_name(name);
    spec.trials = trials;
    spec.time_steps = steps;
    spec.seed = opts.seed;
    spec.config_path = opts.config_path;
    spec.model_path = opts.model_path;
    spec.episodes = episodes;
    spec.mini_episodes = mini_episodes;
    auto results = sparq::harness::run_experiment(spec);
    if (opts.out_path.empty()) {
        throw std::invalid_argument("experiment needs --out <results.csv>");
    }
    sparq::harness::emit(results, opts.out_path);
    std::cout << "wrote " << results.rows.size() << " rows to " << opts.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-air-ground quantum network simulator and routing engine"};
    app.require_subcommand(1);

    CommonOpts opts;
    int steps = 20;
    int trials = 20;
    int episodes = 100;
    int mini_episodes = 50;
    int src = 0;
    int dst = 1;
    double time_s = 0.0;
    std::string policy = "both";
    std::string experiment_name;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config_opt = cmd->add_option("--config", opts.config_path, "network config JSON");
        if (needs_config) {
            config_opt->required();
        }
        cmd->add_option("--seed", opts.seed, "random seed");
        cmd->add_option("--out", opts.out_path, "output file");
        cmd->add_option("--model", opts.model_path, "trained model JSON");
    };

    auto* propagate = app.add_subcommand("propagate", "emit a snapshot series");
    add_common(propagate, true);
    propagate->add_option("--steps", steps, "number of snapshots");

    auto* train = app.add_subcommand("train", "train the routing agent");
    add_common(train, true);
    train->add_option("--episodes", episodes, "outer episodes");
    train->add_option("--mini-episodes", mini_episodes, "mini-episodes per outer episode");

    auto* route = app.add_subcommand("route", "route one request with a trained agent");
    add_common(route, true);
    route->add_option("--src", src, "source node id")->required();
    route->add_option("--dst", dst, "destination node id")->required();
    route->add_option("--time", time_s, "snapshot time in seconds");

    auto* distribute = app.add_subcommand("distribute", "plan and execute a distribution");
    add_common(distribute, true);
    distribute->add_option("--src", src, "source node id")->required();
    distribute->add_option("--dst", dst, "destination node id")->required();
    distribute->add_option("--time", time_s, "snapshot time in seconds");
    distribute->add_option("--policy", policy, "tped, intuitive or both")
        ->check(CLI::IsMember({"tped", "intuitive", "both"}));

    auto* experiment = app.add_subcommand("experiment", "run a named experiment");
    add_common(experiment, false);
    experiment->add_option("name", experiment_name, "experiment name")->required();
    experiment->add_option("--trials", trials, "trials per time step");
    experiment->add_option("--steps", steps, "time steps");
    experiment->add_option("--episodes", episodes, "training episodes");
    experiment->add_option("--mini-episodes", mini_episodes, "mini-episodes per episode");

    CLI11_PARSE(app, argc, argv);

    try {
        if (propagate->parsed()) {
            return run_propagate(opts, steps);
        }
        if (train->parsed()) {
            return run_train(opts, episodes, mini_episodes);
        }
        if (route->parsed()) {
            return run_route(opts, src, dst, time_s);
        }
        if (distribute->parsed()) {
            return run_distribute(opts, src, dst, time_s, policy);
        }
        if (experiment->parsed()) {
            return run_experiment_cmd(opts, experiment_name, trials, steps, episodes,
                                      mini_episodes);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
