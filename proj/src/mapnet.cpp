#include "bls/mapnet.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bls/error.hpp"

namespace bls {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Validates one layer against the incoming width and returns the outgoing
// width.
std::size_t check_layer(const LayerSpec& spec, std::size_t in, std::size_t index) {
  return std::visit(
      Overloaded{
          [&](const layer::Linear& l) -> std::size_t {
            if (l.weight.rows() == 0 || l.weight.cols() == 0)
              throw ConfigError("linear layer has an empty weight matrix", index);
            if (static_cast<std::size_t>(l.weight.cols()) != in)
              throw ConfigError("linear layer expects input width " +
                                    std::to_string(l.weight.cols()) + ", got " +
                                    std::to_string(in),
                                index);
            if (l.bias.size() != l.weight.rows())
              throw ConfigError("linear bias length " + std::to_string(l.bias.size()) +
                                    " does not match weight rows " +
                                    std::to_string(l.weight.rows()),
                                index);
            if (!l.weight.allFinite() || !l.bias.allFinite())
              throw ConfigError("linear layer has non-finite parameters", index);
            return static_cast<std::size_t>(l.weight.rows());
          },
          [&](const layer::LeakyRelu& l) -> std::size_t {
            if (!(l.slope > 0.0 && l.slope < 1.0))
              throw ConfigError("leaky_relu slope must lie in (0, 1)", index);
            return in;
          },
          [&](const layer::Tanh&) -> std::size_t { return in; },
          [&](const layer::PixelNorm& l) -> std::size_t {
            if (!(l.epsilon > 0.0) || !std::isfinite(l.epsilon))
              throw ConfigError("pixel_norm epsilon must be positive", index);
            return in;
          },
      },
      spec);
}

// Shared by forward() and jacobian() so both produce identical bits.
// When `jac` is null only values are propagated.
Vector propagate(const Network& net, const Vector& z, Matrix* jac,
                 double* kink = nullptr) {
  if (static_cast<std::size_t>(z.size()) != net.input_dim())
    throw ConfigError("input has length " + std::to_string(z.size()) +
                          ", network expects " + std::to_string(net.input_dim()),
                      0);
  Vector x = z;
  if (jac) *jac = Matrix::Identity(z.size(), z.size());

  for (const auto& spec : net.layers()) {
    std::visit(
        Overloaded{
            [&](const layer::Linear& l) {
              Vector y = l.weight * x + l.bias;
              x = std::move(y);
              if (jac) *jac = l.weight * *jac;
            },
            [&](const layer::LeakyRelu& l) {
              for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (kink) *kink = std::min(*kink, std::abs(x[i]));
                const double d = x[i] > 0.0 ? 1.0 : l.slope;
                x[i] *= d;
                if (jac) jac->row(i) *= d;
              }
            },
            [&](const layer::Tanh&) {
              for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double y = std::tanh(x[i]);
                x[i] = y;
                if (jac) jac->row(i) *= 1.0 - y * y;
              }
            },
            [&](const layer::PixelNorm& l) {
              // y = r x with r = (|x|^2/m + eps)^(-1/2);
              // dy/dx = r I - (r^3 / m) x x^T.
              const double m = static_cast<double>(x.size());
              const double r = 1.0 / std::sqrt(x.squaredNorm() / m + l.epsilon);
              if (jac) {
                const Eigen::RowVectorXd xt_j = x.transpose() * *jac;
                *jac = r * *jac - (r * r * r / m) * (x * xt_j);
              }
              x *= r;
            },
        },
        spec);
  }
  return x;
}

}  // namespace

Network::Network(std::size_t input_dim, std::vector<LayerSpec> layers)
    : input_dim_(input_dim), output_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ == 0) throw ConfigError("input_dim must be positive");
  for (std::size_t k = 0; k < layers_.size(); ++k)
    output_dim_ = check_layer(layers_[k], output_dim_, k);
}

MappingNetwork::MappingNetwork(std::size_t input_dim, std::vector<LayerSpec> layers)
    : MappingNetwork(Network(input_dim, std::move(layers))) {}

MappingNetwork::MappingNetwork(Network net) : net_(std::move(net)) {
  if (net_.output_dim() != net_.input_dim())
    throw ConfigError("mapping network must map R^" +
                          std::to_string(net_.input_dim()) + " to itself, got output width " +
                          std::to_string(net_.output_dim()),
                      net_.layers().empty() ? 0 : net_.layers().size() - 1);
}

Vector forward(const Network& net, const Vector& z) {
  return propagate(net, z, nullptr);
}

Matrix jacobian(const Network& net, const Vector& z) {
  Matrix j;
  propagate(net, z, &j);
  return j;
}

std::pair<Vector, Matrix> forward_with_jacobian(const Network& net, const Vector& z) {
  Matrix j;
  Vector w = propagate(net, z, &j);
  return {std::move(w), std::move(j)};
}

double min_kink_distance(const Network& net, const Vector& z) {
  double kink = std::numeric_limits<double>::infinity();
  propagate(net, z, nullptr, &kink);
  return kink;
}

Network compose(const Network& first, const Network& second) {
  std::vector<LayerSpec> layers = first.layers();
  layers.insert(layers.end(), second.layers().begin(), second.layers().end());
  return Network(first.input_dim(), std::move(layers));
}

}  // namespace bls
