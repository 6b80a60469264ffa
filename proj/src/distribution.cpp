#include "sparq/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace sparq::dist {

namespace {

using topo::NodeKind;

void validate_inputs(const std::vector<int>& path, const std::vector<NodeKind>& kinds,
                     const std::vector<double>& hop_etas) {
    if (path.size() < 2) {
        throw PlanningError("a distribution path needs at least two nodes");
    }
    if (kinds.size() != path.size()) {
        throw PlanningError("node kinds do not match the path length");
    }
    if (hop_etas.size() != path.size() - 1) {
        throw PlanningError("hop transmissivities do not match the path length");
    }
    for (double eta : hop_etas) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw PlanningError("hop transmissivity outside [0, 1]");
        }
    }
    std::vector<int> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw PlanningError("a distribution path cannot revisit a node");
    }
}

std::vector<double> hop_etas_from_graph(const routing::RoutingGraph& graph,
                                        const std::vector<int>& path) {
    std::vector<double> etas;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        const double eta = graph.eta(path[i], path[i + 1]);
        if (eta <= 0.0) {
            throw PlanningError("path uses a hop that is not present in the snapshot");
        }
        etas.push_back(eta);
    }
    return etas;
}

std::vector<NodeKind> kinds_from_graph(const routing::RoutingGraph& graph,
                                       const std::vector<int>& path) {
    std::vector<NodeKind> kinds;
    kinds.reserve(path.size());
    for (int id : path) {
        kinds.push_back(graph.kind(id));
    }
    return kinds;
}

}  // namespace

const char* role_name(Role role) {
    switch (role) {
        case Role::SourceOfEntanglement:
            return "source";
        case Role::Repeater:
            return "repeater";
        case Role::Hybrid:
            return "hybrid";
        case Role::EndNode:
            return "end";
    }
    return "unknown";
}

nlohmann::json DistributionPlan::to_json() const {
    nlohmann::json doc;
    doc["path"] = path;
    nlohmann::json roles_json = nlohmann::json::array();
    for (Role role : roles) {
        roles_json.push_back(role_name(role));
    }
    doc["roles"] = roles_json;
    nlohmann::json pairs_json = nlohmann::json::array();
    for (const PairSpec& pair : pairs) {
        pairs_json.push_back({{"generator", pair.generator},
                              {"left_holder", pair.left_holder},
                              {"right_holder", pair.right_holder},
                              {"eta_left", pair.eta_left},
                              {"eta_right", pair.eta_right}});
    }
    doc["pairs"] = pairs_json;
    doc["swaps"] = swaps;
    return doc;
}

DistributionPlan plan_intuitive(const std::vector<int>& path, const std::vector<NodeKind>& kinds,
                                const std::vector<double>& hop_etas) {
    validate_inputs(path, kinds, hop_etas);
    DistributionPlan plan;
    plan.path = path;
    plan.roles.assign(path.size(), Role::Repeater);
    plan.roles.front() = Role::EndNode;
    plan.roles.back() = Role::EndNode;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        // The earlier endpoint generates when it can; a ground-to-ground
        // fiber hop falls back to the earlier node.
        const bool left_generates =
            kinds[i] != NodeKind::Ground || kinds[i + 1] == NodeKind::Ground;
        PairSpec pair;
        pair.generator = left_generates ? path[i] : path[i + 1];
        pair.left_holder = path[i];
        pair.right_holder = path[i + 1];
        pair.eta_left = left_generates ? 1.0 : hop_etas[i];
        pair.eta_right = left_generates ? hop_etas[i] : 1.0;
        plan.pairs.push_back(pair);
    }
    for (size_t i = 1; i + 1 < path.size(); ++i) {
        plan.swaps.push_back(path[i]);
    }
    return plan;
}

DistributionPlan plan_tped(const std::vector<int>& path, const std::vector<NodeKind>& kinds,
                           const std::vector<double>& hop_etas) {
    validate_inputs(path, kinds, hop_etas);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        if (kinds[i] == NodeKind::Ground && kinds[i + 1] == NodeKind::Ground) {
            throw PlanningError(
                "adjacent ground nodes cannot be served by a third-party source");
        }
    }
    const int m = static_cast<int>(path.size()) - 2;
    if (m == 0) {
        throw PlanningError("a direct path leaves no intermediate node to generate the pair");
    }

    DistributionPlan plan;
    plan.path = path;
    plan.roles.assign(path.size(), Role::Repeater);
    plan.roles.front() = Role::EndNode;
    plan.roles.back() = Role::EndNode;

    int hybrid_pos = -1;
    if (m % 2 == 0) {
        // A hybrid node is eligible when it sits next to one ground
        // endpoint of the path and one non-ground node; the later one
        // wins when both qualify, matching the canonical four-node
        // construction.
        auto eligible = [&](int pos) {
            const bool is_first = pos == 1;
            const int endpoint = is_first ? 0 : static_cast<int>(path.size()) - 1;
            const int inner = is_first ? 2 : static_cast<int>(path.size()) - 3;
            return kinds[pos] != NodeKind::Ground && kinds[endpoint] == NodeKind::Ground &&
                   kinds[inner] != NodeKind::Ground;
        };
        const int last_pos = static_cast<int>(path.size()) - 2;
        if (eligible(last_pos)) {
            hybrid_pos = last_pos;
        } else if (eligible(1)) {
            hybrid_pos = 1;
        } else {
            throw PlanningError("no intermediate node is eligible as the hybrid repeater");
        }
    }

    // Alternate source/repeater over the intermediates, skipping the
    // hybrid slot.
    int alternation = 0;
    for (int pos = 1; pos <= m; ++pos) {
        if (pos == hybrid_pos) {
            plan.roles[pos] = Role::Hybrid;
            continue;
        }
        const bool is_source = alternation % 2 == 0;
        ++alternation;
        if (is_source) {
            if (kinds[pos] == NodeKind::Ground) {
                throw PlanningError("alternation would make a ground node a source");
            }
            plan.roles[pos] = Role::SourceOfEntanglement;
        } else {
            plan.roles[pos] = Role::Repeater;
        }
    }

    for (int pos = 1; pos <= m; ++pos) {
        if (plan.roles[pos] == Role::SourceOfEntanglement) {
            PairSpec pair;
            pair.generator = path[pos];
            pair.left_holder = path[pos - 1];
            pair.right_holder = path[pos + 1];
            pair.eta_left = hop_etas[pos - 1];
            pair.eta_right = hop_etas[pos];
            plan.pairs.push_back(pair);
        } else if (plan.roles[pos] == Role::Hybrid) {
            // The hybrid keeps one half and sends the other to its
            // adjacent path endpoint.
            PairSpec pair;
            pair.generator = path[pos];
            if (pos == 1) {
                pair.left_holder = path[0];
                pair.right_holder = path[1];
                pair.eta_left = hop_etas[0];
                pair.eta_right = 1.0;
            } else {
                pair.left_holder = path[pos];
                pair.right_holder = path[pos + 1];
                pair.eta_left = 1.0;
                pair.eta_right = hop_etas[pos];
            }
            plan.pairs.push_back(pair);
        }
    }
    for (int pos = 1; pos <= m; ++pos) {
        if (plan.roles[pos] == Role::Repeater || plan.roles[pos] == Role::Hybrid) {
            plan.swaps.push_back(path[pos]);
        }
    }
    return plan;
}

DistributionPlan plan_intuitive(const routing::RoutingGraph& graph,
                                const routing::RoutePath& path) {
    return plan_intuitive(path.nodes, kinds_from_graph(graph, path.nodes),
                          hop_etas_from_graph(graph, path.nodes));
}

DistributionPlan plan_tped(const routing::RoutingGraph& graph, const routing::RoutePath& path) {
    return plan_tped(path.nodes, kinds_from_graph(graph, path.nodes),
                     hop_etas_from_graph(graph, path.nodes));
}

int memory_units(const DistributionPlan& plan) {
    int units = 0;
    for (size_t pos = 1; pos + 1 < plan.path.size(); ++pos) {
        if (plan.roles[pos] == Role::Repeater || plan.roles[pos] == Role::Hybrid) {
            units += 2;
        }
    }
    return units;
}

DistributionResult execute(const DistributionPlan& plan) {
    struct HeldPair {
        int left;
        int right;
        quantum::DensityMatrix state;
    };
    std::vector<HeldPair> held;
    for (const PairSpec& pair : plan.pairs) {
        if (pair.left_holder == pair.right_holder) {
            throw PlanningError("a pair cannot have both halves at the same node");
        }
        held.push_back(
            {pair.left_holder, pair.right_holder, quantum::link_pair(pair.eta_left,
                                                                     pair.eta_right)});
    }
    for (int node : plan.swaps) {
        const auto left_it = std::find_if(held.begin(), held.end(),
                                          [&](const HeldPair& p) { return p.right == node; });
        const auto right_it = std::find_if(held.begin(), held.end(),
                                           [&](const HeldPair& p) { return p.left == node; });
        if (left_it == held.end() || right_it == held.end()) {
            throw PlanningError("swap node does not hold halves of two pairs");
        }
        HeldPair merged{left_it->left, right_it->right,
                        quantum::entanglement_swap(left_it->state, right_it->state)};
        const int left_index = static_cast<int>(left_it - held.begin());
        const int right_index = static_cast<int>(right_it - held.begin());
        // Erase the higher index first.
        held.erase(held.begin() + std::max(left_index, right_index));
        held.erase(held.begin() + std::min(left_index, right_index));
        held.push_back(std::move(merged));
    }
    if (held.size() != 1 || held.front().left != plan.path.front() ||
        held.front().right != plan.path.back()) {
        throw PlanningError("executing the plan did not leave one end-to-end pair");
    }
    DistributionResult result{std::move(held.front().state), 0.0,
                              static_cast<int>(plan.pairs.size()),
                              static_cast<int>(plan.swaps.size()), memory_units(plan)};
    result.fidelity = quantum::entanglement_fidelity(result.final_state);
    return result;
}

DistributionResult execute(const DistributionPlan& plan, const routing::RoutingGraph& graph) {
    constexpr double kEtaTol = 1e-12;
    for (const PairSpec& pair : plan.pairs) {
        auto check_half = [&](int holder, double eta) {
            if (holder == pair.generator) {
                if (eta != 1.0) {
                    throw std::invalid_argument("a locally kept half must use eta = 1");
                }
                return;
            }
            const double graph_eta = graph.eta(holder, pair.generator);
            if (graph_eta <= 0.0 || std::abs(graph_eta - eta) > kEtaTol) {
                throw std::invalid_argument(
                    "plan transmissivity disagrees with the snapshot");
            }
        };
        check_half(pair.left_holder, pair.eta_left);
        check_half(pair.right_holder, pair.eta_right);
    }
    return execute(plan);
}

}  // namespace sparq::dist
