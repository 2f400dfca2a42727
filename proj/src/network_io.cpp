#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bls/error.hpp"
#include "bls/mapnet.hpp"

namespace bls {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double number_field(const json& obj, const char* key, std::size_t index) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw ConfigError(std::string("missing numeric field '") + key + "'", index);
  return obj.at(key).get<double>();
}

layer::Linear parse_linear(const json& obj, std::size_t index) {
  if (!obj.contains("weight") || !obj.at("weight").is_array())
    throw ConfigError("linear layer needs a 'weight' array", index);
  if (!obj.contains("bias") || !obj.at("bias").is_array())
    throw ConfigError("linear layer needs a 'bias' array", index);
  const json& rows = obj.at("weight");
  const json& bias = obj.at("bias");
  const auto n_rows = rows.size();
  const auto n_cols = n_rows ? rows.at(0).size() : 0;

  layer::Linear l{Matrix(n_rows, n_cols), Vector(bias.size())};
  for (std::size_t r = 0; r < n_rows; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || row.size() != n_cols)
      throw ConfigError("weight row " + std::to_string(r) + " is ragged", index);
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!row.at(c).is_number())
        throw ConfigError("weight entries must be numbers", index);
      l.weight(r, c) = row.at(c).get<double>();
    }
  }
  for (std::size_t i = 0; i < bias.size(); ++i) {
    if (!bias.at(i).is_number()) throw ConfigError("bias entries must be numbers", index);
    l.bias[i] = bias.at(i).get<double>();
  }
  return l;
}

json layer_to_json(const LayerSpec& spec) {
  return std::visit(
      Overloaded{
          [](const layer::Linear& l) {
            json rows = json::array();
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
              json row = json::array();
              for (Eigen::Index c = 0; c < l.weight.cols(); ++c) row.push_back(l.weight(r, c));
              rows.push_back(std::move(row));
            }
            json bias = json::array();
            for (Eigen::Index i = 0; i < l.bias.size(); ++i) bias.push_back(l.bias[i]);
            return json{{"type", "linear"}, {"weight", std::move(rows)}, {"bias", std::move(bias)}};
          },
          [](const layer::LeakyRelu& l) { return json{{"type", "leaky_relu"}, {"slope", l.slope}}; },
          [](const layer::Tanh&) { return json{{"type", "tanh"}}; },
          [](const layer::PixelNorm& l) {
            return json{{"type", "pixel_norm"}, {"epsilon", l.epsilon}};
          },
      },
      spec);
}

}  // namespace

Network network_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("network file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("input_dim") || !doc.at("input_dim").is_number_unsigned())
    throw ConfigError("network file needs a non-negative integer 'input_dim'");
  if (!doc.contains("layers") || !doc.at("layers").is_array())
    throw ConfigError("network file needs a 'layers' array");

  std::vector<LayerSpec> layers;
  const json& arr = doc.at("layers");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& obj = arr.at(k);
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string())
      throw ConfigError("layer needs a string 'type'", k);
    const auto type = obj.at("type").get<std::string>();
    if (type == "linear") {
      layers.emplace_back(parse_linear(obj, k));
    } else if (type == "leaky_relu") {
      layers.emplace_back(layer::LeakyRelu{number_field(obj, "slope", k)});
    } else if (type == "tanh") {
      layers.emplace_back(layer::Tanh{});
    } else if (type == "pixel_norm") {
      layers.emplace_back(layer::PixelNorm{number_field(obj, "epsilon", k)});
    } else {
      throw ConfigError("unknown layer type '" + type + "'", k);
    }
  }
  return Network(doc.at("input_dim").get<std::size_t>(), std::move(layers));
}

std::string network_to_json_text(const Network& net) {
  json layers = json::array();
  for (const auto& spec : net.layers()) layers.push_back(layer_to_json(spec));
  json doc{{"input_dim", net.input_dim()}, {"layers", std::move(layers)}};
  return doc.dump(2) + "\n";
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return network_from_json_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write network file '" + path.string() + "'");
  out << network_to_json_text(net);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace bls
