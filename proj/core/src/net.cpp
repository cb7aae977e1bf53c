#include "hcolor/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hcolor/rng.hpp"

namespace hcolor {

namespace {

std::string layer_name(int layer) { return layer == 0 ? "data" : "conv" + std::to_string(layer); }

int grid_size(int extent, int stride) { return (extent + stride - 1) / stride; }

DenseLayer make_dense(int inputs, int outputs) {
  return {inputs, outputs, std::vector<double>(static_cast<std::size_t>(inputs) * outputs, 0.0),
          std::vector<double>(outputs, 0.0)};
}

ConvLayer make_conv(const ConvLayerSpec& s) {
  const std::size_t n = static_cast<std::size_t>(s.out_channels) * s.in_channels * s.kernel * s.kernel;
  return {s, std::vector<double>(n, 0.0), std::vector<double>(s.out_channels, 0.0)};
}

void xavier_fill(std::vector<double>& w, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w) v = rng.uniform(-limit, limit);
}

FeatureMap conv_forward(const ConvLayer& layer, const FeatureMap& in) {
  const auto& s = layer.spec;
  const int t = s.output_stride();
  const int pad = s.kernel / 2;
  FeatureMap out(s.out_channels, grid_size(in.width, t), grid_size(in.height, t), in.stride * t);
  const int k = s.kernel;
  for (int o = 0; o < s.out_channels; ++o) {
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        double acc = layer.bias[o];
        for (int c = 0; c < s.in_channels; ++c) {
          const double* w = &layer.weight[((static_cast<std::size_t>(o) * s.in_channels + c) * k) * k];
          for (int ky = 0; ky < k; ++ky) {
            const int iy = oy * t + ky - pad;
            if (iy < 0 || iy >= in.height) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = ox * t + kx - pad;
              if (ix < 0 || ix >= in.width) continue;
              acc += w[ky * k + kx] * in.at(c, ix, iy);
            }
          }
        }
        out.at(o, ox, oy) = std::max(acc, 0.0);
      }
    }
  }
  return out;
}

// out_grad is d loss / d (rectified output); in_grad may be null for the input layer.
void conv_backward(const ConvLayer& layer, const FeatureMap& in, const FeatureMap& out, const FeatureMap& out_grad,
                   ConvLayer& param_grad, FeatureMap* in_grad) {
  const auto& s = layer.spec;
  const int t = s.output_stride();
  const int pad = s.kernel / 2;
  const int k = s.kernel;
  for (int o = 0; o < s.out_channels; ++o) {
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        if (out.at(o, ox, oy) <= 0.0) continue;
        const double g = out_grad.at(o, ox, oy);
        if (g == 0.0) continue;
        param_grad.bias[o] += g;
        for (int c = 0; c < s.in_channels; ++c) {
          const std::size_t base = ((static_cast<std::size_t>(o) * s.in_channels + c) * k) * k;
          for (int ky = 0; ky < k; ++ky) {
            const int iy = oy * t + ky - pad;
            if (iy < 0 || iy >= in.height) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = ox * t + kx - pad;
              if (ix < 0 || ix >= in.width) continue;
              param_grad.weight[base + ky * k + kx] += g * in.at(c, ix, iy);
              if (in_grad) in_grad->at(c, ix, iy) += g * layer.weight[base + ky * k + kx];
            }
          }
        }
      }
    }
  }
}

void check_location(const FeatureMap& base, double x, double y) {
  if (!(x >= 0.0 && y >= 0.0 && x <= base.width - 1 && y <= base.height - 1)) {
    std::ostringstream msg;
    msg << "hypercolumn location (" << x << ", " << y << ") outside " << base.width << "x" << base.height
        << " image";
    throw std::out_of_range(msg.str());
  }
}

}  // namespace

// --- NetConfig ---------------------------------------------------------------

void NetConfig::validate() const {
  if (layers.empty()) throw std::invalid_argument("net config: no layers");
  int channels = 1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "net config: layer " + layer_name(static_cast<int>(i) + 1);
    if (l.in_channels != channels)
      throw std::invalid_argument(where + " expects " + std::to_string(l.in_channels) + " input channels, gets " +
                                  std::to_string(channels));
    if (l.out_channels < 1) throw std::invalid_argument(where + " needs at least one output channel");
    if (l.kernel < 1 || l.kernel % 2 == 0) throw std::invalid_argument(where + " kernel must be odd and positive");
    if (l.stride < 1 || l.downsample < 1) throw std::invalid_argument(where + " stride/downsample must be >= 1");
    channels = l.out_channels;
  }
  if (taps.empty()) throw std::invalid_argument("net config: no hypercolumn taps");
  (void)tap_layers();
  if (head_width < 1) throw std::invalid_argument("net config: head_width must be positive");
  if (heads.empty()) throw std::invalid_argument("net config: no prediction heads");
  for (const auto& h : heads) {
    if (h.outputs < 1) throw std::invalid_argument("net config: head '" + h.name + "' has no outputs");
    if (h.softmax && h.outputs < 2) throw std::invalid_argument("net config: softmax head '" + h.name + "' needs K >= 2");
  }
  if (samples_per_image < 1) throw std::invalid_argument("net config: samples_per_image must be positive");
}

int NetConfig::receptive_field() const {
  int rf = 1;
  int jump = 1;
  for (const auto& l : layers) {
    rf += (l.kernel - 1) * jump;
    jump *= l.output_stride();
  }
  return rf;
}

int NetConfig::map_stride(int layer) const {
  int s = 1;
  for (int i = 0; i < layer; ++i) s *= layers.at(i).output_stride();
  return s;
}

std::vector<int> NetConfig::tap_layers() const {
  std::vector<int> out;
  for (const auto& name : taps) {
    int found = -1;
    for (int l = 0; l <= static_cast<int>(layers.size()); ++l)
      if (layer_name(l) == name) found = l;
    if (found < 0) throw std::invalid_argument("net config: unknown tap '" + name + "'");
    if (std::find(out.begin(), out.end(), found) != out.end())
      throw std::invalid_argument("net config: duplicate tap '" + name + "'");
    out.push_back(found);
  }
  return out;
}

int NetConfig::descriptor_size() const {
  int size = 0;
  for (int l : tap_layers()) size += l == 0 ? 1 : layers[l - 1].out_channels;
  return size;
}

NetConfig NetConfig::desk_scale(const OutputCoding& coding) {
  NetConfig cfg;
  cfg.layers = {{1, 16, 3, 1, 2}, {16, 32, 3, 1, 2}, {32, 64, 3, 1, 2}, {64, 64, 3, 1, 1}};
  cfg.taps = {"data", "conv1", "conv2", "conv3", "conv4"};
  cfg.head_width = 64;
  cfg.heads = coding.heads();
  cfg.samples_per_image = 128;
  return cfg;
}

// --- parameters ---------------------------------------------------------------

std::vector<ParamBlock> ModelParams::blocks() {
  std::vector<ParamBlock> out;
  for (std::size_t i = 0; i < conv.size(); ++i) {
    const auto& s = conv[i].spec;
    const std::string name = layer_name(static_cast<int>(i) + 1);
    out.push_back({name + ".weight", {s.out_channels, s.in_channels, s.kernel, s.kernel}, conv[i].weight});
    out.push_back({name + ".bias", {s.out_channels}, conv[i].bias});
  }
  out.push_back({"hidden.weight", {hidden.outputs, hidden.inputs}, hidden.weight});
  out.push_back({"hidden.bias", {hidden.outputs}, hidden.bias});
  for (std::size_t h = 0; h < heads.size(); ++h) {
    const std::string name = "head" + std::to_string(h);
    out.push_back({name + ".weight", {heads[h].outputs, heads[h].inputs}, heads[h].weight});
    out.push_back({name + ".bias", {heads[h].outputs}, heads[h].bias});
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<int>>> ModelParams::shapes() const {
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (auto& b : const_cast<ModelParams*>(this)->blocks()) out.emplace_back(b.name, b.shape);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = hidden.weight.size() + hidden.bias.size();
  for (const auto& c : conv) n += c.weight.size() + c.bias.size();
  for (const auto& h : heads) n += h.weight.size() + h.bias.size();
  return n;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto& b : z.blocks()) std::fill(b.values.begin(), b.values.end(), 0.0);
  return z;
}

Model init_model(const NetConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Model model;
  model.config = cfg;
  model.seed = seed;
  Rng rng(seed);
  for (const auto& spec : cfg.layers) {
    ConvLayer layer = make_conv(spec);
    const int area = spec.kernel * spec.kernel;
    xavier_fill(layer.weight, spec.in_channels * area, spec.out_channels * area, rng);
    model.params.conv.push_back(std::move(layer));
  }
  model.params.hidden = make_dense(cfg.descriptor_size(), cfg.head_width);
  xavier_fill(model.params.hidden.weight, model.params.hidden.inputs, model.params.hidden.outputs, rng);
  for (const auto& head : cfg.heads) {
    DenseLayer layer = make_dense(cfg.head_width, head.outputs);
    xavier_fill(layer.weight, layer.inputs, layer.outputs, rng);
    model.params.heads.push_back(std::move(layer));
  }
  return model;
}

// --- forward ------------------------------------------------------------------

Features forward_features(const Model& model, const GrayImage& img) {
  const int rf = model.config.receptive_field();
  if (img.width() < rf || img.height() < rf)
    throw std::invalid_argument("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                                " is smaller than the receptive field " + std::to_string(rf));
  Features features;
  features.reserve(model.params.conv.size() + 1);
  FeatureMap data(1, img.width(), img.height(), 1);
  data.data = img.data();
  features.push_back(std::move(data));
  for (const auto& layer : model.params.conv) features.push_back(conv_forward(layer, features.back()));
  return features;
}

Bilinear bilinear_weights(double u, double v, int width, int height) {
  u = std::clamp(u, 0.0, static_cast<double>(width - 1));
  v = std::clamp(v, 0.0, static_cast<double>(height - 1));
  Bilinear b;
  b.x0 = std::min(static_cast<int>(u), width - 1);
  b.y0 = std::min(static_cast<int>(v), height - 1);
  b.x1 = std::min(b.x0 + 1, width - 1);
  b.y1 = std::min(b.y0 + 1, height - 1);
  const double fx = u - b.x0;
  const double fy = v - b.y0;
  b.w00 = (1.0 - fx) * (1.0 - fy);
  b.w10 = fx * (1.0 - fy);
  b.w01 = (1.0 - fx) * fy;
  b.w11 = fx * fy;
  return b;
}

std::vector<double> gather_hypercolumn(const Features& features, double x, double y, std::span<const int> tap_layers) {
  check_location(features.at(0), x, y);
  std::vector<double> out;
  for (int l : tap_layers) {
    const FeatureMap& f = features.at(l);
    const Bilinear b = bilinear_weights(x / f.stride, y / f.stride, f.width, f.height);
    for (int c = 0; c < f.channels; ++c) {
      out.push_back(b.w00 * f.at(c, b.x0, b.y0) + b.w10 * f.at(c, b.x1, b.y0) + b.w01 * f.at(c, b.x0, b.y1) +
                    b.w11 * f.at(c, b.x1, b.y1));
    }
  }
  return out;
}

void scatter_hypercolumn(Features& feature_grads, double x, double y, std::span<const int> tap_layers,
                         std::span<const double> grad) {
  check_location(feature_grads.at(0), x, y);
  std::size_t offset = 0;
  for (int l : tap_layers) {
    FeatureMap& f = feature_grads.at(l);
    const Bilinear b = bilinear_weights(x / f.stride, y / f.stride, f.width, f.height);
    for (int c = 0; c < f.channels; ++c) {
      const double g = grad[offset++];
      f.at(c, b.x0, b.y0) += b.w00 * g;
      f.at(c, b.x1, b.y0) += b.w10 * g;
      f.at(c, b.x0, b.y1) += b.w01 * g;
      f.at(c, b.x1, b.y1) += b.w11 * g;
    }
  }
  if (offset != grad.size()) throw std::invalid_argument("scatter_hypercolumn: gradient length mismatch");
}

HeadActivations head_forward(const Model& model, std::span<const double> descriptor) {
  const DenseLayer& hidden = model.params.hidden;
  if (static_cast<int>(descriptor.size()) != hidden.inputs)
    throw std::invalid_argument("head_predict: descriptor has " + std::to_string(descriptor.size()) +
                                " entries, model expects " + std::to_string(hidden.inputs));
  HeadActivations act;
  act.hidden.resize(hidden.outputs);
  for (int o = 0; o < hidden.outputs; ++o) {
    const double* w = &hidden.weight[static_cast<std::size_t>(o) * hidden.inputs];
    double acc = hidden.bias[o];
    for (int i = 0; i < hidden.inputs; ++i) acc += w[i] * descriptor[i];
    act.hidden[o] = std::max(acc, 0.0);
  }
  for (std::size_t h = 0; h < model.params.heads.size(); ++h) {
    const DenseLayer& head = model.params.heads[h];
    std::vector<double> logits(head.outputs);
    for (int o = 0; o < head.outputs; ++o) {
      const double* w = &head.weight[static_cast<std::size_t>(o) * head.inputs];
      double acc = head.bias[o];
      for (int i = 0; i < head.inputs; ++i) acc += w[i] * act.hidden[i];
      logits[o] = acc;
    }
    act.outputs.push_back(model.config.heads[h].softmax ? softmax(logits) : std::move(logits));
  }
  return act;
}

std::vector<std::vector<double>> head_predict(const Model& model, std::span<const double> descriptor) {
  return head_forward(model, descriptor).outputs;
}

// --- training -----------------------------------------------------------------

TrainSample make_train_sample(const RgbImage& img, const OutputCoding& coding) {
  return {desaturate(img), coding.make_targets(img)};
}

BatchGradient batch_loss_and_grad(const Model& model, std::span<const TrainSample> batch, const OutputCoding& coding,
                                  std::uint64_t seed) {
  const NetConfig& cfg = model.config;
  const std::vector<int> taps = cfg.tap_layers();
  const int samples = cfg.samples_per_image;
  const double scale = 1.0 / (static_cast<double>(samples) * batch.size());

  BatchGradient result{0.0, model.params.zeros_like()};
  ModelParams& grads = result.grads;
  std::vector<std::vector<double>> logit_grads;

  for (std::size_t img_index = 0; img_index < batch.size(); ++img_index) {
    const TrainSample& sample = batch[img_index];
    const Features features = forward_features(model, sample.gray);
    Features feature_grads;
    for (const auto& f : features) feature_grads.emplace_back(f.channels, f.width, f.height, f.stride);

    Rng rng(mix_seed(seed, img_index));
    const int w = sample.gray.width();
    const int h = sample.gray.height();
    for (int s = 0; s < samples; ++s) {
      const int x = static_cast<int>(rng.below(w));
      const int y = static_cast<int>(rng.below(h));
      const std::vector<double> descriptor = gather_hypercolumn(features, x, y, taps);
      const HeadActivations act = head_forward(model, descriptor);
      auto fail = [&](const std::string& why) {
        std::ostringstream msg;
        msg << why << " at batch image " << img_index << ", sample " << s << " (pixel " << x << ", " << y << ")";
        throw std::runtime_error(msg.str());
      };
      for (const auto& out : act.outputs)
        for (double v : out)
          if (!std::isfinite(v)) fail("non-finite network output");
      const double loss = coding.sample_loss(sample.targets, x, y, act.outputs, logit_grads);
      if (!std::isfinite(loss)) fail("non-finite loss");
      result.loss += loss * scale;

      const DenseLayer& hidden = model.params.hidden;
      std::vector<double> hidden_grad(hidden.outputs, 0.0);
      for (std::size_t hd = 0; hd < model.params.heads.size(); ++hd) {
        const DenseLayer& head = model.params.heads[hd];
        DenseLayer& g_head = grads.heads[hd];
        for (int o = 0; o < head.outputs; ++o) {
          const double g = logit_grads[hd][o] * scale;
          if (g == 0.0) continue;
          g_head.bias[o] += g;
          const std::size_t row = static_cast<std::size_t>(o) * head.inputs;
          for (int i = 0; i < head.inputs; ++i) {
            g_head.weight[row + i] += g * act.hidden[i];
            hidden_grad[i] += g * head.weight[row + i];
          }
        }
      }
      std::vector<double> descriptor_grad(hidden.inputs, 0.0);
      for (int o = 0; o < hidden.outputs; ++o) {
        if (act.hidden[o] <= 0.0 || hidden_grad[o] == 0.0) continue;
        const double g = hidden_grad[o];
        grads.hidden.bias[o] += g;
        const std::size_t row = static_cast<std::size_t>(o) * hidden.inputs;
        for (int i = 0; i < hidden.inputs; ++i) {
          grads.hidden.weight[row + i] += g * descriptor[i];
          descriptor_grad[i] += g * hidden.weight[row + i];
        }
      }
      scatter_hypercolumn(feature_grads, x, y, taps, descriptor_grad);
    }

    for (std::size_t l = model.params.conv.size(); l >= 1; --l) {
      conv_backward(model.params.conv[l - 1], features[l - 1], features[l], feature_grads[l], grads.conv[l - 1],
                    l >= 2 ? &feature_grads[l - 1] : nullptr);
    }
  }
  return result;
}

double train_step(Model& model, std::span<const TrainSample> batch, const OutputCoding& coding, double lr,
                  std::uint64_t seed) {
  if (!(lr >= 0.0)) throw std::invalid_argument("train_step: learning rate must be >= 0");
  BatchGradient bg = batch_loss_and_grad(model, batch, coding, seed);
  if (lr > 0.0) {
    auto params = model.params.blocks();
    auto grads = bg.grads.blocks();
    for (std::size_t b = 0; b < params.size(); ++b)
      for (std::size_t i = 0; i < params[b].values.size(); ++i) params[b].values[i] -= lr * grads[b].values[i];
  }
  return bg.loss;
}

// --- rebalancing --------------------------------------------------------------

std::vector<double> second_moments(const Model& model, std::span<const GrayImage> images) {
  const std::size_t layers = model.params.conv.size();
  std::vector<double> sum(layers, 0.0);
  std::vector<double> count(layers, 0.0);
  for (const auto& img : images) {
    const Features f = forward_features(model, img);
    for (std::size_t l = 0; l < layers; ++l) {
      for (double v : f[l + 1].data) sum[l] += v * v;
      count[l] += static_cast<double>(f[l + 1].data.size());
    }
  }
  for (std::size_t l = 0; l < layers; ++l) sum[l] = count[l] > 0.0 ? sum[l] / count[l] : 0.0;
  return sum;
}

Model rebalance(const Model& model, std::span<const double> stats) {
  const std::size_t layers = model.params.conv.size();
  if (stats.size() != layers)
    throw std::invalid_argument("rebalance: expected " + std::to_string(layers) + " second moments");
  for (double s : stats)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("rebalance: second moments must be positive");

  Model out = model;
  const std::vector<int> taps = model.config.tap_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    const double m = 1.0 / std::sqrt(stats[l]);
    if (m == 1.0) continue;
    ConvLayer& layer = out.params.conv[l];
    for (double& w : layer.weight) w *= m;
    for (double& b : layer.bias) b *= m;
    if (l + 1 < layers)
      for (double& w : out.params.conv[l + 1].weight) w /= m;

    // Hypercolumn slice fed by this layer's output.
    int offset = 0;
    for (int t : taps) {
      const int width = t == 0 ? 1 : model.config.layers[t - 1].out_channels;
      if (t == static_cast<int>(l) + 1) {
        DenseLayer& hidden = out.params.hidden;
        for (int o = 0; o < hidden.outputs; ++o)
          for (int c = offset; c < offset + width; ++c) hidden.weight[static_cast<std::size_t>(o) * hidden.inputs + c] /= m;
      }
      offset += width;
    }
  }
  return out;
}

// --- dense prediction ---------------------------------------------------------

HistogramField predict_field(const Model& model, const GrayImage& img) {
  const Features features = forward_features(model, img);
  const std::vector<int> taps = model.config.tap_layers();
  HistogramField field(img.width(), img.height());
  std::vector<std::size_t> head_index;
  for (std::size_t h = 0; h < model.config.heads.size(); ++h) {
    const HeadSpec& spec = model.config.heads[h];
    if (!spec.softmax) continue;
    field.add_channel(spec.name, spec.bins.value_or(BinSpec::uniform(spec.outputs)), spec.outputs);
    head_index.push_back(h);
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto outputs = head_predict(model, gather_hypercolumn(features, x, y, taps));
      const std::size_t n = static_cast<std::size_t>(y) * img.width() + x;
      for (std::size_t c = 0; c < head_index.size(); ++c) {
        FieldChannel& ch = field.channels()[c];
        std::copy(outputs[head_index[c]].begin(), outputs[head_index[c]].end(), ch.probs.begin() + n * ch.bins);
      }
    }
  }
  return field;
}

std::vector<std::pair<double, double>> predict_ab(const Model& model, const GrayImage& img) {
  std::size_t head = model.config.heads.size();
  for (std::size_t h = 0; h < model.config.heads.size(); ++h)
    if (!model.config.heads[h].softmax && model.config.heads[h].outputs == 2) head = h;
  if (head == model.config.heads.size()) throw std::invalid_argument("predict_ab: model has no (a,b) regression head");
  const Features features = forward_features(model, img);
  const std::vector<int> taps = model.config.tap_layers();
  std::vector<std::pair<double, double>> out(img.pixel_count());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto outputs = head_predict(model, gather_hypercolumn(features, x, y, taps));
      out[static_cast<std::size_t>(y) * img.width() + x] = {outputs[head][0] / kLabRegressionScale,
                                                            outputs[head][1] / kLabRegressionScale};
    }
  }
  return out;
}

Model train_model(const NetConfig& cfg, const OutputCoding& coding, std::span<const RgbImage> images,
                  const TrainOptions& options, std::vector<EpochStats>* history) {
  if (images.empty()) throw std::invalid_argument("train_model: empty corpus");
  if (options.batch_size < 1) throw std::invalid_argument("train_model: batch_size must be positive");
  Model model = init_model(cfg, mix_seed(options.seed, 0x1417));

  std::vector<TrainSample> samples;
  samples.reserve(images.size());
  for (const auto& img : images) samples.push_back(make_train_sample(img, coding));

  if (options.rebalance) {
    std::vector<GrayImage> grays;
    for (const auto& s : samples) grays.push_back(s.gray);
    auto stats = second_moments(model, grays);
    for (double& s : stats)
      if (!(s > 1e-12)) s = 1.0;  // dead layer, leave as is
    model = rebalance(model, stats);
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TrainSample> batch;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(options.seed, 0x5eed, epoch));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);

    double loss_sum = 0.0;
    int steps = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + options.batch_size); ++i)
        batch.push_back(samples[order[i]]);
      const auto step_seed = mix_seed(options.seed, epoch + 1, start);
      loss_sum += train_step(model, batch, coding, options.lr, step_seed);
      ++steps;
    }
    if (history) history->push_back({epoch, loss_sum / steps});
  }
  return model;
}

}  // namespace hcolor
