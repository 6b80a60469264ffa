#pragma once

#include <Eigen/Dense>
#include <vector>

#include "json.hpp"
#include "sparq/rng.hpp"

namespace sparq::routing {

// Fully connected value network: rectified-linear hidden layers, identity
// output. Hidden widths follow the fixed 128/64 architecture for routing
// agents; arbitrary layer lists are supported for tests.
class QNetwork {
public:
    QNetwork() = default;
    QNetwork(std::vector<int> layer_sizes, Rng& rng);  // He-initialised weights, zero biases

    Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
    // Columns are independent inputs.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    int input_size() const { return layer_sizes_.front(); }
    int output_size() const { return layer_sizes_.back(); }

    std::vector<Eigen::MatrixXd>& weights() { return weights_; }
    std::vector<Eigen::VectorXd>& biases() { return biases_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

    nlohmann::json to_json() const;
    static QNetwork from_json(const nlohmann::json& doc);

private:
    std::vector<int> layer_sizes_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    static Gradients zeros_like(const QNetwork& net);
};

// Batched forward pass keeping pre-activations (one column per input),
// and the matching backward pass for a gradient at the output layer.
struct ForwardTrace {
    std::vector<Eigen::MatrixXd> activations;      // including the input
    std::vector<Eigen::MatrixXd> pre_activations;  // per layer
};

ForwardTrace forward_trace(const QNetwork& net, const Eigen::MatrixXd& inputs);
void accumulate_gradients(const QNetwork& net, const ForwardTrace& trace,
                          const Eigen::MatrixXd& output_grad, Gradients& grads);

class AdamOptimizer {
public:
    AdamOptimizer() = default;
    explicit AdamOptimizer(const QNetwork& net);

    void step(QNetwork& net, const Gradients& grads, double learning_rate);

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEpsilon = 1e-8;

private:
    std::vector<Eigen::MatrixXd> m_weights_, v_weights_;
    std::vector<Eigen::VectorXd> m_biases_, v_biases_;
    long step_count_ = 0;
};

}  // namespace sparq::routing
