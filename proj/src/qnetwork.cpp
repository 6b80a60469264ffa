#include "sparq/qnetwork.hpp"

#include <cmath>
#include <stdexcept>

namespace sparq::routing {

QNetwork::QNetwork(std::vector<int> layer_sizes, Rng& rng) : layer_sizes_(std::move(layer_sizes)) {
    if (layer_sizes_.size() < 2) {
        throw std::invalid_argument("a network needs at least input and output layers");
    }
    for (size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
        const int fan_in = layer_sizes_[l];
        const int fan_out = layer_sizes_[l + 1];
        if (fan_in < 1 || fan_out < 1) {
            throw std::invalid_argument("layer sizes must be positive");
        }
        Eigen::MatrixXd w(fan_out, fan_in);
        const double stddev = std::sqrt(2.0 / fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                w(r, c) = rng.normal(0.0, stddev);
            }
        }
        weights_.push_back(std::move(w));
        biases_.push_back(Eigen::VectorXd::Zero(fan_out));
    }
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& input) const {
    if (input.size() != input_size()) {
        throw std::invalid_argument("input dimension does not match the network");
    }
    Eigen::VectorXd activation = input;
    for (size_t l = 0; l < weights_.size(); ++l) {
        activation = weights_[l] * activation + biases_[l];
        if (l + 1 < weights_.size()) {
            activation = activation.cwiseMax(0.0);
        }
    }
    return activation;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
    if (inputs.rows() != input_size()) {
        throw std::invalid_argument("input dimension does not match the network");
    }
    Eigen::MatrixXd activation = inputs;
    for (size_t l = 0; l < weights_.size(); ++l) {
        activation = (weights_[l] * activation).colwise() + biases_[l];
        if (l + 1 < weights_.size()) {
            activation = activation.cwiseMax(0.0);
        }
    }
    return activation;
}

ForwardTrace forward_trace(const QNetwork& net, const Eigen::MatrixXd& inputs) {
    ForwardTrace trace;
    trace.activations.push_back(inputs);
    Eigen::MatrixXd activation = inputs;
    for (size_t l = 0; l < net.weights().size(); ++l) {
        Eigen::MatrixXd pre = (net.weights()[l] * activation).colwise() + net.biases()[l];
        trace.pre_activations.push_back(pre);
        activation = (l + 1 < net.weights().size()) ? pre.cwiseMax(0.0).eval() : pre;
        trace.activations.push_back(activation);
    }
    return trace;
}

Gradients Gradients::zeros_like(const QNetwork& net) {
    Gradients grads;
    for (size_t l = 0; l < net.weights().size(); ++l) {
        grads.weights.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(),
                                                      net.weights()[l].cols()));
        grads.biases.push_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
    }
    return grads;
}

void accumulate_gradients(const QNetwork& net, const ForwardTrace& trace,
                          const Eigen::MatrixXd& output_grad, Gradients& grads) {
    const int layers = static_cast<int>(net.weights().size());
    Eigen::MatrixXd delta = output_grad;
    for (int l = layers - 1; l >= 0; --l) {
        if (l < layers - 1) {
            // Backward through the rectifier of layer l's output.
            delta = delta.cwiseProduct(
                (trace.pre_activations[l].array() > 0.0).cast<double>().matrix());
        }
        grads.weights[l] += delta * trace.activations[l].transpose();
        grads.biases[l] += delta.rowwise().sum();
        if (l > 0) {
            delta = net.weights()[l].transpose() * delta;
        }
    }
}

AdamOptimizer::AdamOptimizer(const QNetwork& net) {
    for (size_t l = 0; l < net.weights().size(); ++l) {
        m_weights_.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(),
                                                   net.weights()[l].cols()));
        v_weights_.push_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(),
                                                   net.weights()[l].cols()));
        m_biases_.push_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
        v_biases_.push_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
    }
}

void AdamOptimizer::step(QNetwork& net, const Gradients& grads, double learning_rate) {
    if (m_weights_.size() != net.weights().size()) {
        throw std::invalid_argument("optimizer state does not match the network");
    }
    ++step_count_;
    const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_count_));
    const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_count_));
    for (size_t l = 0; l < net.weights().size(); ++l) {
        m_weights_[l] = kBeta1 * m_weights_[l] + (1.0 - kBeta1) * grads.weights[l];
        v_weights_[l] = kBeta2 * v_weights_[l] +
                        (1.0 - kBeta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
        const Eigen::MatrixXd m_hat = m_weights_[l] / bias1;
        const Eigen::MatrixXd v_hat = v_weights_[l] / bias2;
        net.weights()[l] -= learning_rate *
                            m_hat.cwiseQuotient(v_hat.cwiseSqrt().array().matrix() +
                                                Eigen::MatrixXd::Constant(m_hat.rows(),
                                                                          m_hat.cols(), kEpsilon));

        m_biases_[l] = kBeta1 * m_biases_[l] + (1.0 - kBeta1) * grads.biases[l];
        v_biases_[l] = kBeta2 * v_biases_[l] +
                       (1.0 - kBeta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
        const Eigen::VectorXd mb_hat = m_biases_[l] / bias1;
        const Eigen::VectorXd vb_hat = v_biases_[l] / bias2;
        net.biases()[l] -= learning_rate *
                           mb_hat.cwiseQuotient(vb_hat.cwiseSqrt() +
                                                Eigen::VectorXd::Constant(mb_hat.size(), kEpsilon));
    }
}

nlohmann::json QNetwork::to_json() const {
    nlohmann::json doc;
    doc["layer_sizes"] = layer_sizes_;
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (size_t l = 0; l < weights_.size(); ++l) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < weights_[l].rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < weights_[l].cols(); ++c) {
                row.push_back(weights_[l](r, c));
            }
            rows.push_back(row);
        }
        weights.push_back(rows);
        nlohmann::json bias = nlohmann::json::array();
        for (int r = 0; r < biases_[l].size(); ++r) {
            bias.push_back(biases_[l](r));
        }
        biases.push_back(bias);
    }
    doc["weights"] = weights;
    doc["biases"] = biases;
    return doc;
}

QNetwork QNetwork::from_json(const nlohmann::json& doc) {
    QNetwork net;
    net.layer_sizes_ = doc.at("layer_sizes").get<std::vector<int>>();
    if (net.layer_sizes_.size() < 2) {
        throw std::invalid_argument("model layer_sizes must list at least two layers");
    }
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (weights.size() != net.layer_sizes_.size() - 1 || biases.size() != weights.size()) {
        throw std::invalid_argument("model layer count does not match layer_sizes");
    }
    for (size_t l = 0; l + 1 < net.layer_sizes_.size(); ++l) {
        const int rows = net.layer_sizes_[l + 1];
        const int cols = net.layer_sizes_[l];
        const auto& w = weights[l];
        if (static_cast<int>(w.size()) != rows) {
            throw std::invalid_argument("model weight matrix has wrong shape");
        }
        Eigen::MatrixXd matrix(rows, cols);
        for (int r = 0; r < rows; ++r) {
            if (static_cast<int>(w[r].size()) != cols) {
                throw std::invalid_argument("model weight matrix has wrong shape");
            }
            for (int c = 0; c < cols; ++c) {
                matrix(r, c) = w[r][c].get<double>();
            }
        }
        net.weights_.push_back(std::move(matrix));
        const auto& b = biases[l];
        if (static_cast<int>(b.size()) != rows) {
            throw std::invalid_argument("model bias vector has wrong shape");
        }
        Eigen::VectorXd bias(rows);
        for (int r = 0; r < rows; ++r) {
            bias(r) = b[r].get<double>();
        }
        net.biases_.push_back(std::move(bias));
    }
    return net;
}

}  // namespace sparq::routing
