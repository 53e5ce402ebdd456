#include "tactile/nn/model.hpp"

#include <cmath>
#include <random>

namespace tactile {

namespace {

LayerSpec conv(int k0, int k1, int k2, int filters) {
  LayerSpec l;
  l.kind = LayerKind::Conv3D;
  l.kernel = {k0, k1, k2};
  l.out_channels = filters;
  return l;
}

LayerSpec pool(int p0, int p1, int p2) {
  LayerSpec l;
  l.kind = LayerKind::Pool3D;
  l.kernel = {p0, p1, p2};
  return l;
}

LayerSpec flatten() {
  LayerSpec l;
  l.kind = LayerKind::Flatten;
  return l;
}

LayerSpec fully_connected(int out) {
  LayerSpec l;
  l.kind = LayerKind::FullyConnected;
  l.fc_out = out;
  return l;
}

struct Row {
  const char* name;
  RepresentationKind rep;
  std::array<int, 3> conv1;
  std::array<int, 3> conv2;  // {0,0,0} = single-conv model
};

// rt3dcnn's second kernel carries a 1 in the trailing slot: the feature axis
// is down to extent 2 after the first conv, so a 3 cannot fit there.
constexpr Row kRows[] = {
    {"stft2dcnn", RepresentationKind::STFT, {28, 3, 3}, {1, 3, 3}},
    {"stft3dcnn", RepresentationKind::STFT, {7, 3, 3}, {1, 3, 3}},
    {"stt2dcnn", RepresentationKind::STT, {28, 3, 3}, {1, 3, 3}},
    {"stt3dcnn", RepresentationKind::STT, {4, 3, 3}, {7, 3, 3}},
    {"rt2dcnn", RepresentationKind::RT, {28, 3, 3}, {0, 0, 0}},
    {"rt3dcnn", RepresentationKind::RT, {5, 3, 3}, {5, 3, 1}},
    {"stft3dcnn_4_7", RepresentationKind::STFT, {4, 3, 3}, {7, 3, 3}},
    {"stt3dcnn_7_1", RepresentationKind::STT, {7, 3, 3}, {1, 3, 3}},
};

}  // namespace

std::vector<std::string> model_names() {
  std::vector<std::string> names;
  for (const Row& r : kRows) names.emplace_back(r.name);
  return names;
}

bool is_known_model(const std::string& name) {
  for (const Row& r : kRows)
    if (name == r.name) return true;
  return false;
}

ModelSpec make_model_spec(const std::string& name, int filters) {
  if (filters < 1)
    throw Error(ErrorCode::ConfigInvalid, "filters must be >= 1");
  for (const Row& r : kRows) {
    if (name != r.name) continue;
    ModelSpec spec;
    spec.name = name;
    spec.representation = r.rep;
    spec.filters = filters;
    spec.layers.push_back(conv(r.conv1[0], r.conv1[1], r.conv1[2], filters));
    if (r.conv2[0] > 0)
      spec.layers.push_back(conv(r.conv2[0], r.conv2[1], r.conv2[2], filters));
    spec.layers.push_back(pool(1, 1, 1));
    spec.layers.push_back(flatten());
    spec.layers.push_back(fully_connected(spec.class_count));
    return spec;
  }
  throw Error(ErrorCode::SpecUnknown, "unknown model '" + name + "'");
}

std::vector<LayerShape> infer_shapes(const ModelSpec& spec,
                                     const std::array<int, 3>& input_dims) {
  std::vector<LayerShape> shapes;
  LayerShape cur;
  cur.channels = 1;
  cur.extents = input_dims;
  shapes.push_back(cur);
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    switch (l.kind) {
      case LayerKind::Conv3D: {
        if (cur.flat)
          throw Error(ErrorCode::ShapeMismatch, "Conv3D after Flatten");
        for (int a = 0; a < 3; ++a)
          cur.extents[a] = conv_output_extent(cur.extents[a], l.kernel[a]);
        cur.channels = l.out_channels;
        break;
      }
      case LayerKind::Pool3D: {
        if (cur.flat)
          throw Error(ErrorCode::ShapeMismatch, "Pool3D after Flatten");
        for (int a = 0; a < 3; ++a) {
          if (l.kernel[a] < 1 || l.kernel[a] > cur.extents[a])
            throw Error(ErrorCode::ShapeMismatch,
                        "pool kernel exceeds extent at layer " +
                            std::to_string(i));
          cur.extents[a] /= l.kernel[a];
        }
        break;
      }
      case LayerKind::Flatten: {
        cur.flat = cur.channels * cur.extents[0] * cur.extents[1] * cur.extents[2];
        break;
      }
      case LayerKind::FullyConnected: {
        if (!cur.flat)
          throw Error(ErrorCode::ShapeMismatch, "FullyConnected before Flatten");
        cur.flat = l.fc_out;
        break;
      }
    }
    shapes.push_back(cur);
  }
  return shapes;
}

Model init_model(const ModelSpec& spec, const WindowingConfig& windowing,
                 const RepresentationParams& rep, std::uint64_t seed) {
  if (rep.kind != spec.representation)
    throw Error(ErrorCode::RepresentationMismatch,
                "model " + spec.name + " consumes " +
                    representation_name(spec.representation) + " tensors, not " +
                    representation_name(rep.kind));
  validate_config(windowing);
  Model model;
  model.spec = spec;
  model.windowing = windowing;
  model.rep = rep;
  model.seed = seed;
  model.norm.mean = Eigen::VectorXd::Zero(kChannelCount);
  model.norm.std = Eigen::VectorXd::Ones(kChannelCount);
  model.shapes = infer_shapes(spec, representation_dims(rep.kind, windowing));

  Eigen::Index total = 0;
  model.slices.resize(spec.layers.size());
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    ParamSlice& s = model.slices[i];
    if (l.kind == LayerKind::Conv3D) {
      const int in_c = model.shapes[i].channels;
      s.weight_offset = total;
      s.weight_count = static_cast<Eigen::Index>(l.out_channels) * in_c *
                       l.kernel[0] * l.kernel[1] * l.kernel[2];
      s.bias_offset = total + s.weight_count;
      s.bias_count = l.out_channels;
      total += s.weight_count + s.bias_count;
    } else if (l.kind == LayerKind::FullyConnected) {
      const int in = model.shapes[i].flat;
      s.weight_offset = total;
      s.weight_count = static_cast<Eigen::Index>(l.fc_out) * in;
      s.bias_offset = total + s.weight_count;
      s.bias_count = l.fc_out;
      total += s.weight_count + s.bias_count;
    }
  }
  model.params = Eigen::VectorXd::Zero(total);

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    const ParamSlice& s = model.slices[i];
    Eigen::Index fan_in = 0;
    if (l.kind == LayerKind::Conv3D)
      fan_in = static_cast<Eigen::Index>(model.shapes[i].channels) * l.kernel[0] *
               l.kernel[1] * l.kernel[2];
    else if (l.kind == LayerKind::FullyConnected)
      fan_in = model.shapes[i].flat;
    else
      continue;
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index p = 0; p < s.weight_count; ++p)
      model.params[s.weight_offset + p] = dist(rng);
    // biases stay zero
  }
  return model;
}

namespace {

struct ForwardCache {
  std::vector<Tensor4> inputs;   // tensor entering each conv/pool layer
  std::vector<Tensor4> pre;      // conv pre-activation, per layer index
  std::vector<std::vector<Eigen::Index>> argmax;
  Eigen::VectorXd flat_in;       // vector entering the FC layer
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;
};

Eigen::VectorXd run_forward(const Model& model, const Tensor3& input,
                            ForwardCache* cache) {
  const auto expect = model.input_dims();
  if (input.dims != expect)
    throw Error(ErrorCode::RepresentationMismatch,
                "input dims (" + std::to_string(input.dims[0]) + "," +
                    std::to_string(input.dims[1]) + "," +
                    std::to_string(input.dims[2]) + ") do not match model " +
                    model.spec.name);
  if (cache) {
    cache->inputs.resize(model.spec.layers.size());
    cache->pre.resize(model.spec.layers.size());
    cache->argmax.resize(model.spec.layers.size());
  }

  Tensor4 cur = as_single_channel(input);
  Eigen::VectorXd vec;
  bool flat = false;
  for (std::size_t i = 0; i < model.spec.layers.size(); ++i) {
    const LayerSpec& l = model.spec.layers[i];
    const ParamSlice& s = model.slices[i];
    switch (l.kind) {
      case LayerKind::Conv3D: {
        if (cache) cache->inputs[i] = cur;
        Tensor4 out;
        conv3d_forward(cur, l.kernel, l.out_channels,
                       model.params.data() + s.weight_offset,
                       model.params.data() + s.bias_offset, out);
        if (cache) cache->pre[i] = out;
        relu_forward(out);
        cur = std::move(out);
        break;
      }
      case LayerKind::Pool3D: {
        if (cache) cache->inputs[i] = cur;
        Tensor4 out;
        std::vector<Eigen::Index> argmax;
        maxpool3d_forward(cur, l.kernel, out, argmax);
        if (cache) cache->argmax[i] = std::move(argmax);
        cur = std::move(out);
        break;
      }
      case LayerKind::Flatten: {
        vec = cur.data;
        flat = true;
        break;
      }
      case LayerKind::FullyConnected: {
        if (!flat)
          throw Error(ErrorCode::ShapeMismatch, "FullyConnected before Flatten");
        if (cache) cache->flat_in = vec;
        Eigen::Map<const Eigen::MatrixXd> w(model.params.data() + s.weight_offset,
                                            vec.size(), l.fc_out);
        Eigen::Map<const Eigen::VectorXd> b(model.params.data() + s.bias_offset,
                                            l.fc_out);
        vec = w.transpose() * vec + b;
        break;
      }
    }
  }
  Eigen::VectorXd probs = softmax(vec);
  if (cache) {
    cache->logits = vec;
    cache->probs = probs;
  }
  return probs;
}

}  // namespace

Eigen::VectorXd forward(const Model& model, const Tensor3& input) {
  return run_forward(model, input, nullptr);
}

GestureClass predict(const Model& model, const Tensor3& input) {
  const Eigen::VectorXd probs = forward(model, input);
  Eigen::Index best = 0;
  probs.maxCoeff(&best);
  return static_cast<GestureClass>(best);
}

double loss_and_grad(const Model& model, const Tensor3& input, GestureClass label,
                     Eigen::VectorXd& grad) {
  ForwardCache cache;
  run_forward(model, input, &cache);
  const double loss = cross_entropy(cache.probs, static_cast<int>(label));
  if (grad.size() != model.params.size())
    grad = Eigen::VectorXd::Zero(model.params.size());

  // d loss / d logits for softmax + cross-entropy
  Eigen::VectorXd dvec = cache.probs;
  dvec[static_cast<int>(label)] -= 1.0;

  Tensor4 dtensor;
  bool in_vector_stage = true;
  for (int i = static_cast<int>(model.spec.layers.size()) - 1; i >= 0; --i) {
    const LayerSpec& l = model.spec.layers[i];
    const ParamSlice& s = model.slices[i];
    switch (l.kind) {
      case LayerKind::FullyConnected: {
        Eigen::Map<const Eigen::MatrixXd> w(model.params.data() + s.weight_offset,
                                            cache.flat_in.size(), l.fc_out);
        Eigen::Map<Eigen::MatrixXd> gw(grad.data() + s.weight_offset,
                                       cache.flat_in.size(), l.fc_out);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + s.bias_offset, l.fc_out);
        gw.noalias() += cache.flat_in * dvec.transpose();
        gb += dvec;
        dvec = w * dvec;
        break;
      }
      case LayerKind::Flatten: {
        // recover the 4D shape this layer flattened
        const LayerShape& sh = model.shapes[i];
        dtensor = Tensor4(sh.channels, sh.extents[0], sh.extents[1], sh.extents[2]);
        dtensor.data = dvec;
        in_vector_stage = false;
        break;
      }
      case LayerKind::Pool3D: {
        Tensor4 gx(cache.inputs[i].dims[0], cache.inputs[i].dims[1],
                   cache.inputs[i].dims[2], cache.inputs[i].dims[3]);
        maxpool3d_backward(dtensor, cache.argmax[i], gx);
        dtensor = std::move(gx);
        break;
      }
      case LayerKind::Conv3D: {
        relu_backward(cache.pre[i], dtensor);
        Tensor4 gx;
        conv3d_backward(cache.inputs[i], l.kernel, l.out_channels,
                        model.params.data() + s.weight_offset, dtensor, gx,
                        grad.data() + s.weight_offset,
                        grad.data() + s.bias_offset);
        dtensor = std::move(gx);
        break;
      }
    }
  }
  (void)in_vector_stage;
  return loss;
}

}  // namespace tactile
