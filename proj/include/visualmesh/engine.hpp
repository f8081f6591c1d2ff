#ifndef VISUALMESH_ENGINE_HPP
#define VISUALMESH_ENGINE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "onscreen.hpp"
#include "util/matrix.hpp"

namespace visualmesh {
namespace engine {

  /// Hidden layer activation functions.
  enum class Activation : std::uint8_t { SELU = 0, ELU = 1, RELU = 2 };

  /// Self-normalising activation constants
  inline constexpr double SELU_LAMBDA = 1.0507009873554804934193349852946;
  inline constexpr double SELU_ALPHA = 1.6732632423543772848170429916717;

  inline double activate(double x, Activation activation) {
    switch (activation) {
      case Activation::SELU: return x > 0.0 ? SELU_LAMBDA * x : SELU_LAMBDA * SELU_ALPHA * (std::exp(x) - 1.0);
      case Activation::ELU: return x > 0.0 ? x : std::exp(x) - 1.0;
      case Activation::RELU: return x > 0.0 ? x : 0.0;
    }
    throw std::invalid_argument("activate: unknown activation");
  }

  /**
   * @brief One graph-convolution layer: a dense transform applied to the gathered
   *        [self + six neighbours] feature block of every node.
   */
  struct LayerWeights {
    /// (7 * in_width) x out_width, row-major
    Matrix<float> weights;
    /// out_width entries
    std::vector<float> bias;

    std::size_t in_width() const {
      return weights.rows() / 7;
    }
    std::size_t out_width() const {
      return weights.cols();
    }

    bool operator==(const LayerWeights&) const = default;
  };

  /**
   * @brief A full network: stacked graph-convolution layers ending in a softmax classifier.
   *
   * Immutable once loaded; forward() is pure and reentrant, so one spec can serve any number of
   * frames concurrently.
   */
  struct NetworkSpec {
    std::vector<LayerWeights> layers;
    Activation hidden_activation = Activation::SELU;
    std::uint32_t output_classes = 2;

    bool operator==(const NetworkSpec&) const = default;
  };

  /// Feature buffer: one row per visible node plus the all-zero sentinel row.
  using NodeFeatures = Matrix<float>;

  inline void validate_network(const NetworkSpec& network) {
    if (network.layers.empty()) {
      throw std::invalid_argument("network: needs at least one layer");
    }
    if (network.output_classes < 2) {
      throw std::invalid_argument("network: needs at least two output classes");
    }
    for (std::size_t i = 0; i < network.layers.size(); ++i) {
      const LayerWeights& layer = network.layers[i];
      if (layer.weights.rows() == 0 || layer.weights.rows() % 7 != 0) {
        throw std::invalid_argument("network: layer " + std::to_string(i) + " weight rows must be a multiple of 7");
      }
      if (layer.bias.size() != layer.out_width()) {
        throw std::invalid_argument("network: layer " + std::to_string(i) + " bias size mismatch");
      }
      if (i + 1 < network.layers.size() && layer.out_width() != network.layers[i + 1].in_width()) {
        throw std::invalid_argument("network: layer " + std::to_string(i) + " output width "
                                    + std::to_string(layer.out_width()) + " does not feed layer "
                                    + std::to_string(i + 1));
      }
      for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
          if (!std::isfinite(layer.weights[r][c])) {
            throw std::invalid_argument("network: non-finite weight in layer " + std::to_string(i));
          }
        }
      }
      for (float b : layer.bias) {
        if (!std::isfinite(b)) {
          throw std::invalid_argument("network: non-finite bias in layer " + std::to_string(i));
        }
      }
    }
    if (network.layers.back().out_width() != network.output_classes) {
      throw std::invalid_argument("network: final layer width does not match the class count");
    }
  }

  /**
   * @brief Concatenate each node's feature row with its six neighbours' rows.
   *
   * @param features (nodes + 1) x width buffer whose final row is the zero sentinel
   * @param onscreen the visible mesh supplying neighbour indices
   *
   * @return nodes x (7 * width) matrix ordered [self, left, right, below x2, above x2]
   */
  inline Matrix<float> gather(const NodeFeatures& features, const OnScreenMesh& onscreen) {
    if (features.rows() != onscreen.size() + 1) {
      throw std::invalid_argument("gather: feature rows must be visible node count + 1 (sentinel)");
    }
    const std::size_t width = features.cols();
    Matrix<float> out(onscreen.size(), 7 * width);
    for (std::size_t i = 0; i < onscreen.size(); ++i) {
      float* row = out[i];
      const float* self = features[i];
      for (std::size_t c = 0; c < width; ++c) {
        row[c] = self[c];
      }
      for (int j = 0; j < 6; ++j) {
        const std::uint64_t neighbor = onscreen.neighbors[i][j];
        if (neighbor > onscreen.sentinel()) {
          throw std::logic_error("gather: neighbor index out of range, mesh is corrupt");
        }
        const float* src = features[neighbor];
        float* dst = row + (std::size_t(j) + 1) * width;
        for (std::size_t c = 0; c < width; ++c) {
          dst[c] = src[c];
        }
      }
    }
    return out;
  }

  /**
   * @brief Dense transform plus activation. Accumulation runs in double, storage stays float.
   */
  inline Matrix<float> dense_activate(const Matrix<float>& input, const LayerWeights& layer, Activation activation) {
    if (input.cols() != layer.weights.rows()) {
      throw std::invalid_argument("dense_activate: input width " + std::to_string(input.cols())
                                  + " does not match weight rows " + std::to_string(layer.weights.rows()));
    }
    const std::size_t out_width = layer.out_width();
    Matrix<float> out(input.rows(), out_width);
    std::vector<double> acc(out_width);
    for (std::size_t i = 0; i < input.rows(); ++i) {
      const float* row = input[i];
      for (std::size_t c = 0; c < out_width; ++c) {
        acc[c] = double(layer.bias[c]);
      }
      // accumulate k-major so the weight rows stream contiguously
      for (std::size_t k = 0; k < input.cols(); ++k) {
        const double value = double(row[k]);
        const float* weights = layer.weights[k];
        for (std::size_t c = 0; c < out_width; ++c) {
          acc[c] += value * double(weights[c]);
        }
      }
      for (std::size_t c = 0; c < out_width; ++c) {
        out[i][c] = float(activate(acc[c], activation));
      }
    }
    return out;
  }

  /**
   * @brief Run the network over a visible mesh.
   *
   * Alternates gather and dense layers; the final layer ends in a softmax evaluated in double
   * precision. The sentinel row is re-zeroed between layers and excluded from the output.
   *
   * @return visible nodes x classes matrix of per-node class probabilities
   */
  inline Matrix<double> forward(const NetworkSpec& network, const OnScreenMesh& onscreen, const NodeFeatures& input) {
    validate_network(network);
    if (input.rows() != onscreen.size() + 1) {
      throw std::invalid_argument("forward: input rows must be visible node count + 1 (sentinel)");
    }
    if (input.cols() != network.layers.front().in_width()) {
      throw std::invalid_argument("forward: input width " + std::to_string(input.cols())
                                  + " does not match the first layer width "
                                  + std::to_string(network.layers.front().in_width()));
    }

    const std::size_t nodes = onscreen.size();
    const std::size_t classes = network.output_classes;
    if (nodes == 0) {
      return Matrix<double>(0, classes);
    }

    // The layers run fused: instead of materialising the nodes x (7 width) gather matrix, each
    // node accumulates straight from its seven source rows. The accumulation order matches
    // gather + dense_activate exactly (source blocks in slot order, inputs ascending), so the
    // results are bit-identical to the unfused ops while touching far less memory.
    const auto accumulate_node = [&](const NodeFeatures& features, const LayerWeights& layer, std::size_t node,
                                     double* acc) {
      const std::size_t in_width = features.cols();
      for (std::size_t c = 0; c < layer.out_width(); ++c) {
        acc[c] = double(layer.bias[c]);
      }
      for (int block = 0; block < 7; ++block) {
        std::uint64_t source = node;
        if (block > 0) {
          source = onscreen.neighbors[node][block - 1];
          if (source > nodes) {
            throw std::logic_error("forward: neighbor index out of range, mesh is corrupt");
          }
        }
        const float* row = features[source];
        const float* weights = layer.weights[std::size_t(block) * in_width];
        for (std::size_t k = 0; k < in_width; ++k) {
          const double value = double(row[k]);
          for (std::size_t c = 0; c < layer.out_width(); ++c) {
            acc[c] += value * double(weights[k * layer.out_width() + c]);
          }
        }
      }
    };

    NodeFeatures features = input;
    std::vector<double> acc;
    for (std::size_t l = 0; l + 1 < network.layers.size(); ++l) {
      const LayerWeights& layer = network.layers[l];
      const std::size_t out_width = layer.out_width();
      acc.resize(out_width);
      NodeFeatures next(nodes + 1, out_width);  // sentinel row stays zero
      for (std::size_t i = 0; i < nodes; ++i) {
        accumulate_node(features, layer, i, acc.data());
        for (std::size_t c = 0; c < out_width; ++c) {
          next[i][c] = float(activate(acc[c], network.hidden_activation));
        }
      }
      features = std::move(next);
    }

    // final layer: dense then softmax, all in double
    const LayerWeights& last = network.layers.back();
    if (features.cols() * 7 != last.weights.rows()) {
      throw std::invalid_argument("forward: final layer width mismatch");
    }
    Matrix<double> output(nodes, classes);
    std::vector<double> logits(classes);
    for (std::size_t i = 0; i < nodes; ++i) {
      accumulate_node(features, last, i, logits.data());
      double max_logit = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < classes; ++c) {
        max_logit = logits[c] > max_logit ? logits[c] : max_logit;
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        logits[c] = std::exp(logits[c] - max_logit);
        sum += logits[c];
      }
      for (std::size_t c = 0; c < classes; ++c) {
        output[i][c] = logits[c] / sum;
      }
    }
    return output;
  }

}  // namespace engine
}  // namespace visualmesh

#endif  // VISUALMESH_ENGINE_HPP
