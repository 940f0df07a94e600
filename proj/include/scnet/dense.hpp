#pragma once

// Fully connected rectifier network used as the base model in benchmarks.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scnet/errors.hpp"
#include "scnet/synth.hpp"

namespace scnet {

struct DenseLayer {
    Eigen::MatrixXd weight; // out x in
    Eigen::VectorXd bias;   // out
};

class DenseNet {
  public:
    explicit DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
        if (layers_.empty()) throw ShapeError("dense net needs at least one layer");
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            if (layers_[l].bias.size() != layers_[l].weight.rows()) {
                throw ShapeError("layer " + std::to_string(l) + ": bias length differs from weight rows");
            }
            if (l > 0 && layers_[l].weight.cols() != layers_[l - 1].weight.rows()) {
                throw ShapeError("layer " + std::to_string(l) + ": input width does not chain");
            }
        }
    }

    // `hidden` rectifier layers of `width` units, then a linear layer to m.
    // He-normal weights, zero biases, drawn from the Network stream.
    static DenseNet random(std::size_t n, std::size_t width, std::size_t hidden, std::size_t m,
                           std::uint64_t seed) {
        SynthRng rng(seed, RngStream::Network, 0);
        std::vector<DenseLayer> layers;
        std::size_t in = n;
        for (std::size_t l = 0; l <= hidden; ++l) {
            const std::size_t out = l == hidden ? m : width;
            DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
            const double scale = std::sqrt(2.0 / static_cast<double>(in));
            for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
                for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) layer.weight(i, j) = scale * rng.normal();
            layers.push_back(std::move(layer));
            in = out;
        }
        return DenseNet(std::move(layers));
    }

    [[nodiscard]] std::size_t input_dim() const { return static_cast<std::size_t>(layers_.front().weight.cols()); }
    [[nodiscard]] std::size_t output_dim() const { return static_cast<std::size_t>(layers_.back().weight.rows()); }
    [[nodiscard]] std::size_t depth() const { return layers_.size() - 1; }

    // Rows of `x` are inputs; returns one row of logits per input.
    [[nodiscard]] Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const {
        if (static_cast<std::size_t>(x.cols()) != input_dim()) {
            throw ShapeError("dense forward: input width " + std::to_string(x.cols()) + ", expected " +
                             std::to_string(input_dim()));
        }
        Eigen::MatrixXd h = x;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            Eigen::MatrixXd next = h * layers_[l].weight.transpose();
            next.rowwise() += layers_[l].bias.transpose();
            if (l + 1 < layers_.size()) next = next.cwiseMax(0.0);
            h = std::move(next);
        }
        return h;
    }

    [[nodiscard]] std::vector<double> forward(std::span<const double> x) const {
        Eigen::MatrixXd row(1, static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = x[i];
        const Eigen::MatrixXd out = forward_batch(row);
        return std::vector<double>(out.data(), out.data() + out.size());
    }

  private:
    std::vector<DenseLayer> layers_;
};

} // namespace scnet
