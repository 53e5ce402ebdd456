#pragma once

#include "tactile/nn/layers.hpp"
#include "tactile/representation.hpp"
#include "tactile/tensor.hpp"
#include "tactile/windowing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tactile {

// One architecture row: ordered layers plus the representation it consumes.
struct ModelSpec {
  std::string name;
  RepresentationKind representation = RepresentationKind::STFT;
  std::vector<LayerSpec> layers;
  int class_count = kClassCount;
  int filters = 8;
};

// Registry of the supported architectures. Filter count is the one free
// hyperparameter; kernel geometry is fixed per architecture.
std::vector<std::string> model_names();
bool is_known_model(const std::string& name);
ModelSpec make_model_spec(const std::string& name, int filters = 8);  // SpecUnknown

// Per-layer parameter slice inside the flat parameter vector.
struct ParamSlice {
  Eigen::Index weight_offset = 0;
  Eigen::Index weight_count = 0;
  Eigen::Index bias_offset = 0;
  Eigen::Index bias_count = 0;
};

// Walks the layer stack over the given input dims; throws ShapeMismatch when a
// kernel exceeds an incoming extent or an extent would drop below 1.
std::vector<LayerShape> infer_shapes(const ModelSpec& spec,
                                     const std::array<int, 3>& input_dims);

struct Model {
  ModelSpec spec;
  WindowingConfig windowing;
  RepresentationParams rep;
  ChannelStats norm;
  Eigen::VectorXd params;
  std::vector<ParamSlice> slices;      // parallel to spec.layers
  std::vector<LayerShape> shapes;      // shapes[0] = input, shapes[i+1] = after layer i
  std::uint64_t seed = 0;
  int epochs_trained = 0;
  double final_loss = 0.0;

  std::array<int, 3> input_dims() const {
    return {shapes.front().extents[0], shapes.front().extents[1],
            shapes.front().extents[2]};
  }
};

// Builds an untrained model: validates the representation against the spec
// (RepresentationMismatch), runs shape inference (ShapeMismatch), allocates the
// flat parameter vector and applies fan-in-scaled uniform init with zero biases.
Model init_model(const ModelSpec& spec, const WindowingConfig& windowing,
                 const RepresentationParams& rep, std::uint64_t seed);

// Softmax class probabilities. Throws RepresentationMismatch when the input
// dims do not match the model's representation dims.
Eigen::VectorXd forward(const Model& model, const Tensor3& input);

GestureClass predict(const Model& model, const Tensor3& input);

// Cross-entropy loss; the gradient w.r.t. every parameter is ACCUMULATED into
// `grad` (callers zero it before a fresh batch). `grad` is resized and zeroed
// only when its size does not match the parameter vector.
double loss_and_grad(const Model& model, const Tensor3& input, GestureClass label,
                     Eigen::VectorXd& grad);

}  // namespace tactile
