#include "sparq/routing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

namespace sparq::routing {

namespace {

int resolve_max_hops(int requested, int node_count) {
    return requested > 0 ? requested : node_count;
}

bool ground(const RoutingGraph& graph, int id) {
    return graph.kind(id) == topo::NodeKind::Ground;
}

// Hop legality shared by the mask, the baselines and the oracle: never
// chain two ground nodes unless the second one is the destination.
bool hop_allowed(const RoutingGraph& graph, int from, int to, int dest) {
    return !(ground(graph, from) && ground(graph, to) && to != dest);
}

int greedy_slot(const Eigen::VectorXd& q_values, const std::vector<uint8_t>& mask) {
    int best = -1;
    for (size_t slot = 0; slot < mask.size(); ++slot) {
        if (!mask[slot]) {
            continue;
        }
        if (best < 0 || q_values(static_cast<int>(slot)) > q_values(best)) {
            best = static_cast<int>(slot);
        }
    }
    return best;
}

}  // namespace

RoutingGraph::RoutingGraph(const topo::GraphSnapshot& snapshot)
    : time_s_(snapshot.time_s), nodes_(snapshot.nodes) {
    adjacency_.resize(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i)) {
            throw std::invalid_argument("snapshot node ids must be contiguous from 0");
        }
        if (nodes_[i].kind == topo::NodeKind::Ground) {
            ground_ids_.push_back(static_cast<int>(i));
        }
    }
    for (const topo::Edge& edge : snapshot.edges) {
        if (edge.a == edge.b || edge.a < 0 || edge.b >= node_count()) {
            throw std::invalid_argument("snapshot contains an invalid edge");
        }
        adjacency_[edge.a].emplace_back(edge.b, edge.transmissivity);
        adjacency_[edge.b].emplace_back(edge.a, edge.transmissivity);
    }
    for (auto& neighbors : adjacency_) {
        std::sort(neighbors.begin(), neighbors.end());
    }
}

const std::vector<std::pair<int, double>>& RoutingGraph::neighbors(int id) const {
    return adjacency_.at(id);
}

topo::NodeKind RoutingGraph::kind(int id) const {
    return nodes_.at(id).kind;
}

const topo::Node& RoutingGraph::node(int id) const {
    return nodes_.at(id);
}

double RoutingGraph::eta(int a, int b) const {
    for (const auto& [neighbor, value] : adjacency_.at(a)) {
        if (neighbor == b) {
            return value;
        }
    }
    return 0.0;
}

double RoutingGraph::distance_m(int a, int b) const {
    return topo::link_distance_m(nodes_.at(a), nodes_.at(b));
}

Eigen::VectorXd StateVector::flatten() const {
    Eigen::VectorXd out(neighbor_etas.size() + dest_encoding.size());
    for (size_t i = 0; i < neighbor_etas.size(); ++i) {
        out(static_cast<int>(i)) = neighbor_etas[i];
    }
    for (size_t i = 0; i < dest_encoding.size(); ++i) {
        out(static_cast<int>(neighbor_etas.size() + i)) = dest_encoding[i];
    }
    return out;
}

StateVector encode_state(const RoutingGraph& graph, int node, int dest, int max_degree) {
    if (node < 0 || node >= graph.node_count() || dest < 0 || dest >= graph.node_count()) {
        throw std::invalid_argument("unknown node id in state encoding");
    }
    const auto& neighbors = graph.neighbors(node);
    if (static_cast<int>(neighbors.size()) > max_degree) {
        throw std::invalid_argument("node degree exceeds the configured max_degree");
    }
    StateVector state;
    state.neighbor_etas.assign(max_degree, 0.0);
    for (size_t slot = 0; slot < neighbors.size(); ++slot) {
        state.neighbor_etas[slot] = neighbors[slot].second;
    }
    state.dest_encoding.assign(graph.node_count(), 0.0);
    state.dest_encoding[dest] = 1.0;
    return state;
}

std::vector<uint8_t> valid_actions(const RoutingGraph& graph, int node,
                                   const std::vector<uint8_t>& visited, int dest, int max_degree) {
    if (node < 0 || node >= graph.node_count()) {
        throw std::invalid_argument("unknown node id in action mask");
    }
    const auto& neighbors = graph.neighbors(node);
    std::vector<uint8_t> mask(max_degree, 0);
    for (size_t slot = 0; slot < neighbors.size(); ++slot) {
        const int neighbor = neighbors[slot].first;
        if (!visited.empty() && visited[neighbor]) {
            continue;
        }
        if (!hop_allowed(graph, node, neighbor, dest)) {
            continue;
        }
        mask[slot] = 1;
    }
    return mask;
}

double step_penalty(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("step transmissivity must lie in [0, 1]");
    }
    if (eta <= 0.1) {
        return -1.0;
    }
    return -1.0 / (10.0 * eta);
}

double reward_reached(const std::vector<double>& path_etas) {
    if (path_etas.empty()) {
        throw std::domain_error("a delivered path has at least one hop");
    }
    return *std::min_element(path_etas.begin(), path_etas.end());
}

double path_min_eta(const RoutingGraph& graph, const RoutePath& path) {
    double min_eta = 1.0;
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        min_eta = std::min(min_eta, graph.eta(path.nodes[i], path.nodes[i + 1]));
    }
    return min_eta;
}

double path_return(const RoutingGraph& graph, const RoutePath& path) {
    if (path.nodes.size() < 2) {
        throw std::invalid_argument("a path needs at least one hop");
    }
    std::vector<double> etas;
    double total = 0.0;
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const double eta = graph.eta(path.nodes[i], path.nodes[i + 1]);
        etas.push_back(eta);
        if (i + 2 < path.nodes.size()) {
            total += step_penalty(eta);
        }
    }
    return total + reward_reached(etas);
}

Episode::Episode(const RoutingGraph& graph, int src, int dst, int max_hops, int max_degree,
                 bool mask_visited)
    : graph_(graph),
      dest_(dst),
      max_hops_(resolve_max_hops(max_hops, graph.node_count())),
      max_degree_(max_degree),
      mask_visited_(mask_visited),
      current_(src) {
    if (src == dst) {
        throw std::invalid_argument("source and destination must differ");
    }
    path_.push_back(src);
    visited_.assign(graph_.node_count(), 0);
    visited_[src] = 1;
    refresh();
    if (std::none_of(mask_.begin(), mask_.end(), [](uint8_t m) { return m; })) {
        dead_end_ = true;
        done_ = true;
    }
}

void Episode::refresh() {
    state_ = encode_state(graph_, current_, dest_, max_degree_);
    static const std::vector<uint8_t> kNoVisited;
    mask_ = valid_actions(graph_, current_, mask_visited_ ? visited_ : kNoVisited, dest_,
                          max_degree_);
}

Episode::StepResult Episode::step(int slot) {
    if (done_) {
        throw std::logic_error("episode already finished");
    }
    const auto& neighbors = graph_.neighbors(current_);
    if (slot < 0 || slot >= static_cast<int>(mask_.size()) || !mask_[slot] ||
        slot >= static_cast<int>(neighbors.size())) {
        throw std::invalid_argument("selected slot is not enabled");
    }
    const auto [next_node, eta] = neighbors[slot];
    hop_etas_.push_back(eta);
    current_ = next_node;
    path_.push_back(next_node);
    visited_[next_node] = 1;
    ++hops_;

    StepResult result;
    if (next_node == dest_) {
        reached_ = true;
        done_ = true;
        result.reward = reward_reached(hop_etas_);
        result.done = true;
        return_ += result.reward;
        state_ = encode_state(graph_, current_, dest_, max_degree_);
        mask_.assign(max_degree_, 0);
        return result;
    }
    result.reward = step_penalty(eta);
    refresh();
    if (std::none_of(mask_.begin(), mask_.end(), [](uint8_t m) { return m; })) {
        // Walking into a node with no legal continuation ends the
        // episode with an extra unit penalty.
        dead_end_ = true;
        done_ = true;
        result.reward += -1.0;
    }
    if (hops_ >= max_hops_) {
        done_ = true;
    }
    return_ += result.reward;
    result.done = done_;
    return result;
}

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        throw std::invalid_argument("replay buffer capacity must be positive");
    }
    entries_.reserve(capacity_);
}

void ReplayBuffer::push(Experience experience) {
    if (entries_.size() < capacity_) {
        entries_.push_back(std::move(experience));
    } else {
        entries_[next_] = std::move(experience);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<const Experience*> ReplayBuffer::sample(size_t batch_size, Rng& rng) const {
    if (batch_size > entries_.size()) {
        throw std::invalid_argument("not enough stored experiences for the batch");
    }
    // Floyd's subset sampling: uniform without replacement in O(batch).
    const size_t n = entries_.size();
    std::vector<size_t> chosen;
    chosen.reserve(batch_size);
    for (size_t j = n - batch_size; j < n; ++j) {
        const size_t candidate =
            static_cast<size_t>(rng.uniform_index(static_cast<int>(j + 1)));
        if (std::find(chosen.begin(), chosen.end(), candidate) == chosen.end()) {
            chosen.push_back(candidate);
        } else {
            chosen.push_back(j);
        }
    }
    std::vector<const Experience*> batch;
    batch.reserve(batch_size);
    for (size_t index : chosen) {
        batch.push_back(&entries_[index]);
    }
    return batch;
}

int select_action(const QNetwork& net, const StateVector& state, double epsilon,
                  const std::vector<uint8_t>& mask, Rng& rng) {
    std::vector<int> enabled;
    for (size_t slot = 0; slot < mask.size(); ++slot) {
        if (mask[slot]) {
            enabled.push_back(static_cast<int>(slot));
        }
    }
    if (enabled.empty()) {
        throw std::domain_error("no enabled action slots");
    }
    if (rng.uniform01() < epsilon) {
        return enabled[rng.uniform_index(static_cast<int>(enabled.size()))];
    }
    const Eigen::VectorXd q_values = net.forward(state.flatten());
    return greedy_slot(q_values, mask);
}

std::pair<double, Gradients> batch_loss_gradients(const QNetwork& net,
                                                  const QNetwork& target_net,
                                                  const std::vector<const Experience*>& batch,
                                                  double gamma) {
    if (batch.empty()) {
        throw std::invalid_argument("training batch must be non-empty");
    }
    const int count = static_cast<int>(batch.size());
    const int input_dim = net.input_size();
    Eigen::MatrixXd states(input_dim, count);
    Eigen::MatrixXd next_states(input_dim, count);
    for (int i = 0; i < count; ++i) {
        const Eigen::VectorXd state = batch[i]->state.flatten();
        if (state.size() != input_dim) {
            throw std::invalid_argument("experience state does not match the network input");
        }
        states.col(i) = state;
        if (batch[i]->terminal) {
            // Terminal samples never bootstrap; their next state may be
            // empty.
            next_states.col(i).setZero();
            continue;
        }
        const Eigen::VectorXd next = batch[i]->next_state.flatten();
        if (next.size() != input_dim) {
            throw std::invalid_argument("experience next state does not match the network input");
        }
        next_states.col(i) = next;
    }

    const Eigen::MatrixXd next_q = target_net.forward_batch(next_states);
    Eigen::VectorXd targets(count);
    for (int i = 0; i < count; ++i) {
        double target = batch[i]->reward;
        if (!batch[i]->terminal) {
            double best = 0.0;
            bool any = false;
            for (size_t slot = 0; slot < batch[i]->next_mask.size(); ++slot) {
                if (!batch[i]->next_mask[slot]) {
                    continue;
                }
                const double q = next_q(static_cast<int>(slot), i);
                if (!any || q > best) {
                    best = q;
                    any = true;
                }
            }
            if (any) {
                target += gamma * best;
            }
        }
        targets(i) = target;
    }

    const ForwardTrace trace = forward_trace(net, states);
    const Eigen::MatrixXd& q_values = trace.activations.back();
    Eigen::MatrixXd output_grad = Eigen::MatrixXd::Zero(net.output_size(), count);
    double loss = 0.0;
    for (int i = 0; i < count; ++i) {
        const double error = q_values(batch[i]->action, i) - targets(i);
        loss += error * error / count;
        output_grad(batch[i]->action, i) = 2.0 * error / count;
    }
    Gradients grads = Gradients::zeros_like(net);
    accumulate_gradients(net, trace, output_grad, grads);
    return {loss, std::move(grads)};
}

double train_step(QNetwork& net, const QNetwork& target_net,
                  const std::vector<const Experience*>& batch, double learning_rate, double gamma,
                  AdamOptimizer& optimizer) {
    auto [loss, grads] = batch_loss_gradients(net, target_net, batch, gamma);
    optimizer.step(net, grads, learning_rate);
    return loss;
}

void sync_target(const QNetwork& net, QNetwork& target_net) {
    if (net.layer_sizes() != target_net.layer_sizes()) {
        throw std::invalid_argument("target network shape differs from the online network");
    }
    target_net.weights() = net.weights();
    target_net.biases() = net.biases();
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    }
    if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0 ||
        epsilon_end > epsilon_start) {
        throw std::invalid_argument("exploration schedule must satisfy 0 <= end <= start <= 1");
    }
    if (epsilon_decay <= 0.0 || epsilon_decay > 1.0) {
        throw std::invalid_argument("epsilon decay must lie in (0, 1]");
    }
    if (episodes < 0 || mini_episodes < 1 || batch_size < 1 || buffer_capacity < batch_size ||
        target_sync_period < 1 || max_hops < 0) {
        throw std::invalid_argument("inconsistent training configuration");
    }
}

nlohmann::json TrainConfig::to_json() const {
    return nlohmann::json{{"learning_rate", learning_rate},
                          {"gamma", gamma},
                          {"epsilon_start", epsilon_start},
                          {"epsilon_end", epsilon_end},
                          {"epsilon_decay", epsilon_decay},
                          {"episodes", episodes},
                          {"mini_episodes", mini_episodes},
                          {"batch_size", batch_size},
                          {"buffer_capacity", buffer_capacity},
                          {"target_sync_period", target_sync_period},
                          {"max_hops", max_hops},
                          {"seed", seed},
                          {"halt_on_convergence", halt_on_convergence}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& doc) {
    TrainConfig config;
    config.learning_rate = doc.value("learning_rate", config.learning_rate);
    config.gamma = doc.value("gamma", config.gamma);
    config.epsilon_start = doc.value("epsilon_start", config.epsilon_start);
    config.epsilon_end = doc.value("epsilon_end", config.epsilon_end);
    config.epsilon_decay = doc.value("epsilon_decay", config.epsilon_decay);
    config.episodes = doc.value("episodes", config.episodes);
    config.mini_episodes = doc.value("mini_episodes", config.mini_episodes);
    config.batch_size = doc.value("batch_size", config.batch_size);
    config.buffer_capacity = doc.value("buffer_capacity", config.buffer_capacity);
    config.target_sync_period = doc.value("target_sync_period", config.target_sync_period);
    config.max_hops = doc.value("max_hops", config.max_hops);
    config.seed = doc.value("seed", config.seed);
    config.halt_on_convergence = doc.value("halt_on_convergence", config.halt_on_convergence);
    return config;
}

double epsilon_at(const TrainConfig& config, long inner_episode_index) {
    return std::max(config.epsilon_end,
                    config.epsilon_start *
                        std::pow(config.epsilon_decay,
                                 static_cast<double>(inner_episode_index)));
}

nlohmann::json RoutingModel::to_json() const {
    nlohmann::json doc = net.to_json();
    doc["max_degree"] = max_degree;
    doc["node_count"] = node_count;
    doc["config"] = config.to_json();
    return doc;
}

RoutingModel RoutingModel::from_json(const nlohmann::json& doc) {
    RoutingModel model;
    model.net = QNetwork::from_json(doc);
    model.max_degree = doc.at("max_degree").get<int>();
    model.node_count = doc.at("node_count").get<int>();
    if (doc.contains("config")) {
        model.config = TrainConfig::from_json(doc["config"]);
    }
    if (model.max_degree < 1 || model.node_count < 2) {
        throw std::invalid_argument("model shape fields are out of range");
    }
    if (model.net.input_size() != model.max_degree + model.node_count ||
        model.net.output_size() != model.max_degree) {
        throw std::invalid_argument("model layer sizes do not match max_degree/node_count");
    }
    return model;
}

void RoutingModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write model file: " + path);
    }
    out << to_json().dump(2) << "\n";
}

RoutingModel RoutingModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed model file " + path + ": " + e.what());
    }
    return from_json(doc);
}

TrainResult train(const std::vector<RoutingGraph>& series, int max_degree,
                  const TrainConfig& config) {
    config.validate();
    if (series.empty()) {
        throw std::invalid_argument("training needs at least one graph");
    }
    const int node_count = series.front().node_count();
    for (const RoutingGraph& graph : series) {
        if (graph.node_count() != node_count) {
            throw std::invalid_argument("all graphs in a series must share the node set");
        }
        if (static_cast<int>(graph.ground_ids().size()) < 2) {
            throw std::invalid_argument("training needs at least two ground nodes");
        }
    }

    Rng rng(config.seed);
    const std::vector<int> layers = {max_degree + node_count, 128, 64, max_degree};
    TrainResult result;
    result.model.net = QNetwork(layers, rng);
    result.model.max_degree = max_degree;
    result.model.node_count = node_count;
    result.model.config = config;

    QNetwork target = result.model.net;
    AdamOptimizer optimizer(result.model.net);
    ReplayBuffer buffer(static_cast<size_t>(config.buffer_capacity));
    long gradient_steps = 0;
    long inner_episode_count = 0;

    for (int episode = 0; episode < config.episodes; ++episode) {
        const RoutingGraph& graph = series[episode % series.size()];
        const auto& grounds = graph.ground_ids();
        double loss_sum = 0.0;
        long loss_count = 0;
        for (int inner = 0; inner < config.mini_episodes; ++inner) {
            const double epsilon = epsilon_at(config, inner_episode_count);
            ++inner_episode_count;
            const int src = grounds[rng.uniform_index(static_cast<int>(grounds.size()))];
            int dst = src;
            while (dst == src) {
                dst = grounds[rng.uniform_index(static_cast<int>(grounds.size()))];
            }
            Episode walk(graph, src, dst, config.max_hops, max_degree, false);
            while (!walk.done()) {
                const StateVector state = walk.state();
                const int slot = select_action(result.model.net, state, epsilon, walk.mask(), rng);
                const Episode::StepResult outcome = walk.step(slot);
                Experience experience;
                experience.state = state;
                experience.action = slot;
                experience.reward = outcome.reward;
                experience.next_state = walk.state();
                experience.next_mask = walk.mask();
                experience.terminal = walk.reached() || walk.dead_end();
                buffer.push(std::move(experience));
                if (buffer.size() >= static_cast<size_t>(config.batch_size)) {
                    const auto batch = buffer.sample(static_cast<size_t>(config.batch_size), rng);
                    loss_sum += train_step(result.model.net, target, batch, config.learning_rate,
                                           config.gamma, optimizer);
                    ++loss_count;
                    ++gradient_steps;
                    if (gradient_steps % config.target_sync_period == 0) {
                        sync_target(result.model.net, target);
                    }
                }
            }
        }
        result.loss_history.push_back(loss_count > 0 ? loss_sum / loss_count : 0.0);
        result.episodes_run = episode + 1;
        if (config.halt_on_convergence && converged(result.loss_history)) {
            break;
        }
    }
    return result;
}

bool converged(const std::vector<double>& loss_history) {
    constexpr double kTolerance = 5e-4;
    constexpr int kWindow = 50;
    if (loss_history.size() < static_cast<size_t>(kWindow + 1)) {
        return false;
    }
    for (size_t i = loss_history.size() - kWindow; i < loss_history.size(); ++i) {
        if (std::abs(loss_history[i] - loss_history[i - 1]) >= kTolerance) {
            return false;
        }
    }
    return true;
}

std::optional<RoutePath> find_path(const RoutingModel& model, const RoutingGraph& graph, int src,
                                   int dst, int max_hops) {
    if (graph.node_count() != model.node_count) {
        throw std::invalid_argument("graph node count does not match the model");
    }
    if (src == dst || src < 0 || dst < 0 || src >= graph.node_count() ||
        dst >= graph.node_count()) {
        throw std::invalid_argument("invalid source/destination pair");
    }
    const int hop_limit = resolve_max_hops(max_hops, graph.node_count());
    RoutePath path;
    path.nodes.push_back(src);
    std::vector<uint8_t> visited(graph.node_count(), 0);
    visited[src] = 1;
    int current = src;
    for (int hop = 0; hop < hop_limit; ++hop) {
        const auto mask = valid_actions(graph, current, visited, dst, model.max_degree);
        if (std::none_of(mask.begin(), mask.end(), [](uint8_t m) { return m; })) {
            return std::nullopt;
        }
        const StateVector state = encode_state(graph, current, dst, model.max_degree);
        const int slot = greedy_slot(model.net.forward(state.flatten()), mask);
        current = graph.neighbors(current)[slot].first;
        path.nodes.push_back(current);
        visited[current] = 1;
        if (current == dst) {
            return path;
        }
    }
    return std::nullopt;
}

std::optional<RoutePath> shortest_path_baseline(const RoutingGraph& graph, int src, int dst) {
    if (src == dst || src < 0 || dst < 0 || src >= graph.node_count() ||
        dst >= graph.node_count()) {
        throw std::invalid_argument("invalid source/destination pair");
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(graph.node_count(), inf);
    std::vector<int> prev(graph.node_count(), -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.emplace(0.0, src);
    while (!queue.empty()) {
        const auto [d, node] = queue.top();
        queue.pop();
        if (d > dist[node]) {
            continue;
        }
        if (node == dst) {
            break;
        }
        for (const auto& [neighbor, eta] : graph.neighbors(node)) {
            (void)eta;
            if (!hop_allowed(graph, node, neighbor, dst)) {
                continue;
            }
            const double candidate = d + graph.distance_m(node, neighbor);
            if (candidate < dist[neighbor]) {
                dist[neighbor] = candidate;
                prev[neighbor] = node;
                queue.emplace(candidate, neighbor);
            }
        }
    }
    if (dist[dst] == inf) {
        return std::nullopt;
    }
    RoutePath path;
    for (int node = dst; node != -1; node = prev[node]) {
        path.nodes.push_back(node);
    }
    std::reverse(path.nodes.begin(), path.nodes.end());
    return path;
}

namespace {

struct BruteForceSearch {
    const RoutingGraph& graph;
    int dst;
    int max_hops;
    std::vector<uint8_t> visited;
    std::vector<int> current;
    std::vector<int> best;
    double best_return = -std::numeric_limits<double>::infinity();

    void visit(int node) {
        if (node == dst) {
            RoutePath candidate{current};
            const double value = path_return(graph, candidate);
            const bool better =
                value > best_return ||
                (value == best_return &&
                 (best.empty() || current.size() < best.size() ||
                  (current.size() == best.size() && current < best)));
            if (better) {
                best_return = value;
                best = current;
            }
            return;
        }
        if (static_cast<int>(current.size()) > max_hops) {
            return;
        }
        for (const auto& [neighbor, eta] : graph.neighbors(node)) {
            (void)eta;
            if (visited[neighbor] || !hop_allowed(graph, node, neighbor, dst)) {
                continue;
            }
            visited[neighbor] = 1;
            current.push_back(neighbor);
            visit(neighbor);
            current.pop_back();
            visited[neighbor] = 0;
        }
    }
};

}  // namespace

std::optional<RoutePath> brute_force_optimal_path(const RoutingGraph& graph, int src, int dst,
                                                  int max_hops) {
    if (src == dst || src < 0 || dst < 0 || src >= graph.node_count() ||
        dst >= graph.node_count()) {
        throw std::invalid_argument("invalid source/destination pair");
    }
    BruteForceSearch search{graph, dst, resolve_max_hops(max_hops, graph.node_count()),
                            std::vector<uint8_t>(graph.node_count(), 0), {}, {}};
    search.visited[src] = 1;
    search.current.push_back(src);
    search.visit(src);
    if (search.best.empty()) {
        return std::nullopt;
    }
    return RoutePath{search.best};
}

}  // namespace sparq::routing
