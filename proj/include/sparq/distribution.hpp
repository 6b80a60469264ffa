#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparq/quantum.hpp"
#include "sparq/routing.hpp"

namespace sparq::dist {

// Raised when a path cannot be turned into an executable plan (for
// example when the alternation would require a ground node to generate
// pairs).
struct PlanningError : std::runtime_error {
    explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

enum class Role { SourceOfEntanglement, Repeater, Hybrid, EndNode };

const char* role_name(Role role);

// One pair to create: generated at `generator`, with the two halves held
// at `left_holder` and `right_holder` after traversing channels of the
// given transmissivities (a locally kept half uses eta = 1).
struct PairSpec {
    int generator = 0;
    int left_holder = 0;
    int right_holder = 0;
    double eta_left = 1.0;
    double eta_right = 1.0;
};

struct DistributionPlan {
    std::vector<int> path;
    std::vector<Role> roles;      // aligned with path positions
    std::vector<PairSpec> pairs;  // creation order
    std::vector<int> swaps;       // swapping nodes in execution order

    nlohmann::json to_json() const;
};

struct DistributionResult {
    quantum::DensityMatrix final_state;
    double fidelity = 0.0;
    int pair_count = 0;
    int swap_count = 0;
    int memory_units = 0;
};

// Chain policy: one pair per hop, generated at a non-ground endpoint
// (leftmost when both qualify), swapped at every intermediate node.
DistributionPlan plan_intuitive(const std::vector<int>& path,
                                const std::vector<topo::NodeKind>& kinds,
                                const std::vector<double>& hop_etas);

// Third-party policy: alternating sources and repeaters keep the pair
// generators outside the stored-qubit chain; an even intermediate count
// adds one hybrid node that both generates and swaps.
DistributionPlan plan_tped(const std::vector<int>& path, const std::vector<topo::NodeKind>& kinds,
                           const std::vector<double>& hop_etas);

// Convenience overloads pulling kinds and hop transmissivities from a
// routing graph.
DistributionPlan plan_intuitive(const routing::RoutingGraph& graph,
                                const routing::RoutePath& path);
DistributionPlan plan_tped(const routing::RoutingGraph& graph, const routing::RoutePath& path);

// Peak number of qubit halves stored at intermediate nodes: repeaters
// and hybrids hold two, pure sources hold none.
int memory_units(const DistributionPlan& plan);

// Creates every pair, performs the swaps in plan order and reports the
// surviving end-to-end state.
DistributionResult execute(const DistributionPlan& plan);

// Same, but first checks the plan's transmissivities against the graph.
DistributionResult execute(const DistributionPlan& plan, const routing::RoutingGraph& graph);

}  // namespace sparq::dist
