#pragma once

#include <optional>
#include <vector>

#include "sparq/qnetwork.hpp"
#include "sparq/topology.hpp"

namespace sparq::routing {

// Adjacency view of a snapshot: neighbours sorted by ascending id, node
// kinds, and positions for distance-based baselines.
class RoutingGraph {
public:
    explicit RoutingGraph(const topo::GraphSnapshot& snapshot);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::pair<int, double>>& neighbors(int id) const;
    topo::NodeKind kind(int id) const;
    const std::vector<int>& ground_ids() const { return ground_ids_; }
    const topo::Node& node(int id) const;
    double time_s() const { return time_s_; }

    // Transmissivity of edge (a, b); 0 when absent.
    double eta(int a, int b) const;
    double distance_m(int a, int b) const;

private:
    double time_s_ = 0.0;
    std::vector<topo::Node> nodes_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    std::vector<int> ground_ids_;
};

// Local observation: transmissivities to the neighbours (ascending id,
// zero-padded to max_degree slots) plus a one-hot destination marker.
struct StateVector {
    std::vector<double> neighbor_etas;
    std::vector<double> dest_encoding;

    Eigen::VectorXd flatten() const;
};

StateVector encode_state(const RoutingGraph& graph, int node, int dest, int max_degree);

// Slot mask for the next hop. A slot is enabled when it holds a
// neighbour that has not been visited and the hop does not chain two
// ground nodes, except that the ground destination itself is always
// reachable.
std::vector<uint8_t> valid_actions(const RoutingGraph& graph, int node,
                                   const std::vector<uint8_t>& visited, int dest, int max_degree);

// Per-hop penalty: -1 for eta <= 0.1, otherwise -1/(10 eta).
double step_penalty(double eta);
// Terminal payoff: the bottleneck transmissivity of the delivered path.
double reward_reached(const std::vector<double>& path_etas);

struct RoutePath {
    std::vector<int> nodes;
};

double path_min_eta(const RoutingGraph& graph, const RoutePath& path);
// Episode return of a complete path: hop penalties for every hop but the
// last, plus the terminal bottleneck payoff.
double path_return(const RoutingGraph& graph, const RoutePath& path);

// One routing request walked hop by hop. Training mode masks only the
// ground-to-ground rule; inference mode additionally masks visited nodes.
class Episode {
public:
    struct StepResult {
        double reward = 0.0;
        bool done = false;
    };

    Episode(const RoutingGraph& graph, int src, int dst, int max_hops, int max_degree,
            bool mask_visited);

    const StateVector& state() const { return state_; }
    const std::vector<uint8_t>& mask() const { return mask_; }
    bool done() const { return done_; }
    bool reached() const { return reached_; }
    bool dead_end() const { return dead_end_; }
    int current_node() const { return current_; }
    const std::vector<int>& path() const { return path_; }
    double episode_return() const { return return_; }

    StepResult step(int slot);

private:
    void refresh();

    const RoutingGraph& graph_;
    int dest_;
    int max_hops_;
    int max_degree_;
    bool mask_visited_;
    int current_;
    int hops_ = 0;
    bool done_ = false;
    bool reached_ = false;
    bool dead_end_ = false;
    double return_ = 0.0;
    std::vector<int> path_;
    std::vector<uint8_t> visited_;
    std::vector<double> hop_etas_;
    StateVector state_;
    std::vector<uint8_t> mask_;
};

struct Experience {
    StateVector state;
    int action = 0;
    double reward = 0.0;
    StateVector next_state;
    std::vector<uint8_t> next_mask;
    bool terminal = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void push(Experience experience);
    size_t size() const { return entries_.size(); }
    size_t capacity() const { return capacity_; }

    // Uniform sample without replacement within the batch.
    std::vector<const Experience*> sample(size_t batch_size, Rng& rng) const;

private:
    size_t capacity_;
    size_t next_ = 0;
    std::vector<Experience> entries_;
};

// Epsilon-greedy pick over the enabled slots; greedy ties break towards
// the lowest slot index. Throws std::domain_error when no slot is
// enabled.
int select_action(const QNetwork& net, const StateVector& state, double epsilon,
                  const std::vector<uint8_t>& mask, Rng& rng);

// Squared-error loss over the batch together with its parameter
// gradients (used by train_step; exposed for gradient checks).
std::pair<double, Gradients> batch_loss_gradients(const QNetwork& net,
                                                  const QNetwork& target_net,
                                                  const std::vector<const Experience*>& batch,
                                                  double gamma);

// One mini-batch update: squared error between the taken action's value
// and r + gamma * max of the target network over the next state's
// enabled slots (r alone for terminal samples). Returns the batch loss.
double train_step(QNetwork& net, const QNetwork& target_net,
                  const std::vector<const Experience*>& batch, double learning_rate, double gamma,
                  AdamOptimizer& optimizer);

void sync_target(const QNetwork& net, QNetwork& target_net);

struct TrainConfig {
    double learning_rate = 1e-3;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    double epsilon_decay = 0.9995;
    int episodes = 100;
    int mini_episodes = 50;
    int batch_size = 64;
    int buffer_capacity = 10000;
    int target_sync_period = 100;
    int max_hops = 0;  // 0: use the node count
    uint64_t seed = 1;
    bool halt_on_convergence = false;

    void validate() const;  // throws std::invalid_argument
    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& doc);
};

// Exploration rate after `inner_episode_index` completed mini-episodes.
double epsilon_at(const TrainConfig& config, long inner_episode_index);

// Trained network plus the shape information needed to use it.
struct RoutingModel {
    QNetwork net;
    int max_degree = 0;
    int node_count = 0;
    TrainConfig config;

    nlohmann::json to_json() const;
    static RoutingModel from_json(const nlohmann::json& doc);
    void save(const std::string& path) const;
    static RoutingModel load(const std::string& path);
};

struct TrainResult {
    RoutingModel model;
    std::vector<double> loss_history;  // one mean loss per outer episode
    int episodes_run = 0;
};

// Outer episodes cycle through the graph series; each runs mini-episodes
// of randomly drawn ground-to-ground requests with per-step replay
// updates. Fully deterministic for a fixed seed.
TrainResult train(const std::vector<RoutingGraph>& series, int max_degree,
                  const TrainConfig& config);

// True when the last 50 consecutive loss deltas are all below 5e-4.
bool converged(const std::vector<double>& loss_history);

// Greedy rollout with visited-node masking.
std::optional<RoutePath> find_path(const RoutingModel& model, const RoutingGraph& graph, int src,
                                   int dst, int max_hops = 0);

// Dijkstra over link distance in metres, honouring the ground-adjacency
// rule so the result is executable by the distribution policies.
std::optional<RoutePath> shortest_path_baseline(const RoutingGraph& graph, int src, int dst);

// Exhaustive search over simple mask-valid paths, maximising the episode
// return; ties prefer fewer hops, then lexicographically smaller paths.
std::optional<RoutePath> brute_force_optimal_path(const RoutingGraph& graph, int src, int dst,
                                                  int max_hops = 0);

}  // namespace sparq::routing
