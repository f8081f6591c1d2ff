#ifndef VISUALMESH_IO_NETWORK_IO_HPP
#define VISUALMESH_IO_NETWORK_IO_HPP

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "../engine.hpp"
#include "binary.hpp"

namespace visualmesh {
namespace io {

  inline constexpr std::uint32_t NETWORK_FORMAT_VERSION = 1;

  namespace detail {
    inline engine::Activation activation_from_byte(std::uint8_t byte, const char* context) {
      if (byte > 2) {
        throw std::runtime_error(std::string(context) + ": unknown activation code " + std::to_string(byte));
      }
      return engine::Activation(byte);
    }

    inline std::string activation_name(engine::Activation activation) {
      switch (activation) {
        case engine::Activation::SELU: return "selu";
        case engine::Activation::ELU: return "elu";
        case engine::Activation::RELU: return "relu";
      }
      return "selu";
    }

    inline engine::Activation activation_from_name(const std::string& name, const char* context) {
      if (name == "selu") {
        return engine::Activation::SELU;
      }
      if (name == "elu") {
        return engine::Activation::ELU;
      }
      if (name == "relu") {
        return engine::Activation::RELU;
      }
      throw std::runtime_error(std::string(context) + ": unknown activation \"" + name + "\"");
    }

    inline bool has_json_extension(const std::string& path) {
      return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    }

    inline void check_loaded_network(const engine::NetworkSpec& network, const char* context) {
      for (std::size_t i = 0; i < network.layers.size(); ++i) {
        const engine::LayerWeights& layer = network.layers[i];
        for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
          for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
            if (!std::isfinite(layer.weights[r][c])) {
              throw std::runtime_error(std::string(context) + ": non-finite weight in layer " + std::to_string(i));
            }
          }
        }
        for (float b : layer.bias) {
          if (!std::isfinite(b)) {
            throw std::runtime_error(std::string(context) + ": non-finite bias in layer " + std::to_string(i));
          }
        }
        if (i + 1 < network.layers.size() && layer.out_width() != network.layers[i + 1].in_width()) {
          throw std::runtime_error(std::string(context) + ": layer " + std::to_string(i)
                                   + " output width does not feed the next layer");
        }
      }
      if (network.layers.empty() || network.layers.back().out_width() != network.output_classes) {
        throw std::runtime_error(std::string(context) + ": final layer width does not match the class count");
      }
    }
  }  // namespace detail

  /**
   * @brief Write a network in the versioned little-endian binary format.
   *
   * Layout: magic "VMNW", version u32, layer count u32, activation u8, class count u32, then per
   * layer {in_width u32, out_width u32, weights f32 row-major (7*in_width x out_width), bias f32
   * x out_width}.
   */
  inline void save_network(const engine::NetworkSpec& network, std::ostream& out) {
    detail::write_magic(out, "VMNW");
    detail::write_le<std::uint32_t>(out, NETWORK_FORMAT_VERSION);
    detail::write_le<std::uint32_t>(out, std::uint32_t(network.layers.size()));
    detail::write_le<std::uint8_t>(out, std::uint8_t(network.hidden_activation));
    detail::write_le<std::uint32_t>(out, network.output_classes);
    for (const engine::LayerWeights& layer : network.layers) {
      detail::write_le<std::uint32_t>(out, std::uint32_t(layer.in_width()));
      detail::write_le<std::uint32_t>(out, std::uint32_t(layer.out_width()));
      for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
          detail::write_f32(out, layer.weights[r][c]);
        }
      }
      for (float b : layer.bias) {
        detail::write_f32(out, b);
      }
    }
    if (!out) {
      throw std::runtime_error("save_network: write failed");
    }
  }

  inline engine::NetworkSpec load_network(std::istream& in) {
    detail::check_magic(in, "VMNW", "load_network");
    const auto version = detail::read_le<std::uint32_t>(in, "load_network");
    if (version != NETWORK_FORMAT_VERSION) {
      throw std::runtime_error("load_network: unsupported version " + std::to_string(version));
    }
    const auto layer_count = detail::read_le<std::uint32_t>(in, "load_network");
    engine::NetworkSpec network;
    network.hidden_activation =
      detail::activation_from_byte(detail::read_le<std::uint8_t>(in, "load_network"), "load_network");
    network.output_classes = detail::read_le<std::uint32_t>(in, "load_network");

    network.layers.resize(layer_count);
    for (engine::LayerWeights& layer : network.layers) {
      const auto in_width = detail::read_le<std::uint32_t>(in, "load_network");
      const auto out_width = detail::read_le<std::uint32_t>(in, "load_network");
      layer.weights = Matrix<float>(std::size_t(in_width) * 7, out_width);
      for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
          layer.weights[r][c] = detail::read_f32(in, "load_network");
        }
      }
      layer.bias.resize(out_width);
      for (float& b : layer.bias) {
        b = detail::read_f32(in, "load_network");
      }
    }
    detail::check_loaded_network(network, "load_network");
    return network;
  }

  inline nlohmann::json network_to_json(const engine::NetworkSpec& network) {
    nlohmann::json layers = nlohmann::json::array();
    for (const engine::LayerWeights& layer : network.layers) {
      nlohmann::json weights = nlohmann::json::array();
      for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
          row.push_back(layer.weights[r][c]);
        }
        weights.push_back(std::move(row));
      }
      layers.push_back({
        {"in_width", layer.in_width()},
        {"out_width", layer.out_width()},
        {"weights", std::move(weights)},
        {"bias", layer.bias},
      });
    }
    return nlohmann::json{
      {"version", NETWORK_FORMAT_VERSION},
      {"activation", detail::activation_name(network.hidden_activation)},
      {"classes", network.output_classes},
      {"layers", std::move(layers)},
    };
  }

  inline engine::NetworkSpec network_from_json(const nlohmann::json& j) {
    if (j.at("version").get<std::uint32_t>() != NETWORK_FORMAT_VERSION) {
      throw std::runtime_error("load_network: unsupported version "
                               + std::to_string(j.at("version").get<std::uint32_t>()));
    }
    engine::NetworkSpec network;
    network.hidden_activation =
      detail::activation_from_name(j.at("activation").get<std::string>(), "load_network");
    network.output_classes = j.at("classes").get<std::uint32_t>();
    for (const nlohmann::json& jlayer : j.at("layers")) {
      engine::LayerWeights layer;
      const auto in_width = jlayer.at("in_width").get<std::uint32_t>();
      const auto out_width = jlayer.at("out_width").get<std::uint32_t>();
      layer.weights = Matrix<float>(std::size_t(in_width) * 7, out_width);
      const nlohmann::json& weights = jlayer.at("weights");
      if (weights.size() != layer.weights.rows()) {
        throw std::runtime_error("load_network: weight row count mismatch");
      }
      for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        if (weights[r].size() != out_width) {
          throw std::runtime_error("load_network: weight column count mismatch");
        }
        for (std::size_t c = 0; c < out_width; ++c) {
          layer.weights[r][c] = weights[r][c].get<float>();
        }
      }
      layer.bias = jlayer.at("bias").get<std::vector<float>>();
      if (layer.bias.size() != out_width) {
        throw std::runtime_error("load_network: bias size mismatch");
      }
      network.layers.push_back(std::move(layer));
    }
    detail::check_loaded_network(network, "load_network");
    return network;
  }

  /// Saves binary by default, or the JSON mirror when the path ends in .json.
  inline void save_network(const engine::NetworkSpec& network, const std::string& path) {
    if (detail::has_json_extension(path)) {
      std::ofstream out(path);
      if (!out) {
        throw std::runtime_error("save_network: cannot open " + path);
      }
      out << network_to_json(network).dump(1, '\t') << "\n";
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("save_network: cannot open " + path);
    }
    save_network(network, out);
  }

  inline engine::NetworkSpec load_network(const std::string& path) {
    if (detail::has_json_extension(path)) {
      std::ifstream in(path);
      if (!in) {
        throw std::runtime_error("load_network: cannot open " + path);
      }
      nlohmann::json j;
      in >> j;
      return network_from_json(j);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("load_network: cannot open " + path);
    }
    return load_network(in);
  }

}  // namespace io
}  // namespace visualmesh

#endif  // VISUALMESH_IO_NETWORK_IO_HPP
