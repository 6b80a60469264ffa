#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparq/distribution.hpp"
#include "sparq/routing.hpp"

namespace sparq::harness {

enum class ExperimentName {
    ThresholdSweep,
    PolicyCompare,
    RoutingCompare,
    DynamicVsStatic,
    AirAblation,
    Timing,
};

ExperimentName parse_experiment_name(const std::string& name);
const char* experiment_name_str(ExperimentName name);

struct ExperimentSpec {
    ExperimentName name = ExperimentName::ThresholdSweep;
    int trials = 20;
    int time_steps = 20;
    uint64_t seed = 1;
    std::string config_path;
    std::string output_path;
    std::string model_path;  // optional pre-trained routing model
    int episodes = 100;
    int mini_episodes = 50;

    void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
    std::string experiment;
    int time_step = 0;
    int trial = 0;
    std::string metric;
    double value = 0.0;
};

struct ResultSet {
    std::vector<ResultRow> rows;
    nlohmann::json metadata;
};

ResultSet run_experiment(const ExperimentSpec& spec);

// Transmissivity sweep from 0 to 1 in steps of 0.01, reporting the pair
// fidelity at each point.
ResultSet run_threshold_sweep(const ExperimentSpec& spec);

// Routes random ground pairs with the trained agent and executes both
// distribution policies on each delivered path.
ResultSet run_policy_compare(const ExperimentSpec& spec);

// Routes random ground pairs with the trained agent and with the
// distance-based baseline, reporting bottleneck transmissivities and
// executed fidelities.
ResultSet run_routing_compare(const ExperimentSpec& spec);

// Trains one agent across the moving topology and another on the first
// snapshot only, then evaluates both across the series.
ResultSet run_dynamic_vs_static(const ExperimentSpec& spec);

// Evaluates the full network against a copy without the air layer
// (threshold lowered to 0.5).
ResultSet run_air_ablation(const ExperimentSpec& spec);

// Wall-clock per-request routing cost for the agent and the baseline.
// The emitted values are measurements and are not reproducible
// byte-for-byte.
ResultSet run_timing(const ExperimentSpec& spec);

// Sorts rows by (experiment, time_step, trial, metric), writes the CSV
// and a sibling <name>.meta.json with config hash, seed and versions.
void emit(ResultSet& results, const std::string& csv_path);

// Fixed-format value rendering used for the CSV.
std::string format_value(double value);

uint64_t fnv1a_hash_file(const std::string& path);

std::string csv_to_string(const ResultSet& results);

}  // namespace sparq::harness
