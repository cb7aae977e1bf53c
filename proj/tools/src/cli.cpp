#include "hcolor/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "hcolor/checkpoint.hpp"
#include "hcolor/decode.hpp"
#include "hcolor/field_io.hpp"
#include "hcolor/image_io.hpp"
#include "hcolor/metrics.hpp"
#include "hcolor/rng.hpp"
#include "hcolor/synth.hpp"
#include "hcolor/transfer.hpp"

namespace hcolor::cli {

namespace fs = std::filesystem;

namespace {

/// Failures after successful argument parsing; mapped to kExitRuntime.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

/// Image files of a directory sorted by file name.
std::vector<fs::path> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw RuntimeFailure(dir + ": not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path())) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct Loaded {
  Checkpoint ckpt;
  GrayImage gray;
};

Loaded load_inputs(const std::string& ckpt_path, const std::string& in_path) {
  Loaded l{load_checkpoint(ckpt_path), load_gray(in_path)};
  const int rf = l.ckpt.config.net.receptive_field();
  if (l.gray.width() < rf || l.gray.height() < rf)
    throw RuntimeFailure(in_path + ": image smaller than the " + std::to_string(rf) + "px receptive field");
  return l;
}

bool is_regression(const Checkpoint& ckpt) { return ckpt.config.loss.variant == LossVariant::lab_l2; }

void require_histograms(const Checkpoint& ckpt, const std::string& what) {
  if (is_regression(ckpt)) throw RuntimeFailure(what + " needs a histogram model; this checkpoint regresses Lab");
}

/// --policy X decodes chroma (or both Lab axes) with X. Hue uses X too,
/// except median, which is undefined on the circle; hue keeps the
/// circular expectation then.
DecodePolicy make_policy(const std::optional<std::string>& policy, bool no_fading, std::uint64_t seed) {
  DecodePolicy p;
  if (policy) {
    const DecodeMethod m = decode_method_from_string(*policy);
    p.chroma = m;
    p.hue = m == DecodeMethod::median ? DecodeMethod::expectation : m;
  }
  p.chromatic_fading = !no_fading;
  p.seed = seed;
  return p;
}

RgbImage colorize_image(const Checkpoint& ckpt, const GrayImage& gray, const DecodePolicy& policy,
                        HistogramField* field_out) {
  if (is_regression(ckpt)) return render_ab(predict_ab(ckpt.model, gray), gray);
  HistogramField field = predict_field(ckpt.model, gray);
  RgbImage out = render(field, gray, policy);
  if (field_out) *field_out = std::move(field);
  return out;
}

std::string sample_path(const std::string& prefix, int i) {
  return is_image_file(prefix) ? fs::path(prefix).replace_extension().string() + std::to_string(i) +
                                     fs::path(prefix).extension().string()
                               : prefix + std::to_string(i) + ".png";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure(path + ": cannot open file for writing");
  out << text;
  if (!out) throw RuntimeFailure(path + ": write failed");
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Histogram-prediction colorization", "hcolor"};
  app.require_subcommand(1);

  // train
  std::string config_path, data_dir, out_path;
  std::optional<std::uint64_t> train_seed;
  std::optional<int> train_epochs;
  auto* train = app.add_subcommand("train", "Train a model on a directory of color images");
  train->add_option("--config", config_path, "key = value config file")->required();
  train->add_option("--data", data_dir, "Directory of training images")->required();
  train->add_option("--out", out_path, "Checkpoint to write")->required();
  train->add_option("--seed", train_seed, "Overrides the config seed");
  train->add_option("--epochs", train_epochs, "Overrides the config epoch count")->check(CLI::PositiveNumber);

  // colorize
  std::string ckpt_path, in_path, dump_path;
  std::optional<std::string> policy;
  bool no_fading = false;
  std::uint64_t seed = 0;
  auto* colorize = app.add_subcommand("colorize", "Colorize a grayscale image");
  colorize->add_option("--ckpt", ckpt_path)->required();
  colorize->add_option("--in", in_path)->required();
  colorize->add_option("--out", out_path)->required();
  colorize->add_option("--dump-field", dump_path, "Also write the predicted histogram field");
  colorize->add_option("--policy", policy)->check(CLI::IsMember({"expectation", "median", "mode", "sample"}));
  colorize->add_flag("--no-fading", no_fading);
  colorize->add_option("--seed", seed);

  // transfer
  std::string target_path, method;
  double lambda = 1.0;
  auto* transfer = app.add_subcommand("transfer", "Colorize toward the colors of a reference image");
  transfer->add_option("--ckpt", ckpt_path)->required();
  transfer->add_option("--in", in_path)->required();
  transfer->add_option("--target", target_path)->required();
  transfer->add_option("--method", method)->required()->check(CLI::IsMember({"quantile", "energy"}));
  transfer->add_option("--out", out_path)->required();
  transfer->add_option("--lambda", lambda)->check(CLI::NonNegativeNumber);

  // sample
  int n = 0;
  std::string prefix, uncertainty_path;
  double strength = 2.0;
  auto* sample = app.add_subcommand("sample", "Draw diverse colorizations and an uncertainty map");
  sample->add_option("--ckpt", ckpt_path)->required();
  sample->add_option("--in", in_path)->required();
  sample->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  sample->add_option("--out-prefix", prefix)->required();
  sample->add_option("--uncertainty", uncertainty_path)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--strength", strength, "Magnitude of the per-sample hue bias")->check(CLI::NonNegativeNumber);

  // eval
  std::string pred_dir, gt_dir, report_path, curve_path;
  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--pred-dir", pred_dir)->required();
  eval->add_option("--gt-dir", gt_dir)->required();
  eval->add_option("--report", report_path)->required();
  eval->add_option("--curve", curve_path, "Cumulative error curve output");

  // synth
  int count = 64;
  std::uint64_t first = 0;
  bool ambiguous = false;
  std::string gray_dir;
  auto* synth = app.add_subcommand("synth", "Write a procedural training corpus");
  synth->add_option("--out", out_path)->required();
  synth->add_option("--count", count)->check(CLI::PositiveNumber);
  synth->add_option("--first", first, "Index of the first image in the stream");
  synth->add_option("--seed", seed);
  synth->add_flag("--ambiguous", ambiguous, "Tint independent of brightness");
  synth->add_option("--gray-out", gray_dir, "Also write desaturated copies here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*train) {
      PipelineConfig cfg = load_config(config_path);
      if (train_seed) cfg.train.seed = *train_seed;
      if (train_epochs) cfg.train.epochs = *train_epochs;
      std::vector<RgbImage> images;
      for (const auto& p : list_images(data_dir)) images.push_back(load_rgb(p.string()));
      if (images.empty()) throw RuntimeFailure(data_dir + ": no training images");
      std::vector<EpochStats> history;
      Checkpoint ckpt{cfg, train_model(cfg.net, cfg.coding(), images, cfg.train, &history)};
      for (const auto& h : history) out << "epoch " << h.epoch << " loss " << h.mean_loss << "\n";
      save_checkpoint(ckpt, out_path);
    } else if (*colorize) {
      const Loaded l = load_inputs(ckpt_path, in_path);
      if (!dump_path.empty()) require_histograms(l.ckpt, "--dump-field");
      HistogramField field;
      const RgbImage img = colorize_image(l.ckpt, l.gray, make_policy(policy, no_fading, seed), &field);
      save_image(img, out_path);
      if (!dump_path.empty()) save_field(field, dump_path);
    } else if (*transfer) {
      const Loaded l = load_inputs(ckpt_path, in_path);
      const RgbImage target = load_rgb(target_path);
      const DecodePolicy p = make_policy(std::nullopt, false, 0);
      if (method == "quantile") {
        save_image(quantile_match(colorize_image(l.ckpt, l.gray, p, nullptr), target), out_path);
      } else {
        require_histograms(l.ckpt, "energy transfer");
        const HistogramField field = predict_field(l.ckpt.model, l.gray);
        TransferConfig tc;
        tc.lambda = lambda;
        const TransferResult r = energy_minimize(field, ground_truth_histograms(target, field), tc);
        out << "energy " << r.energy << "\n";
        save_image(render(r.posterior, l.gray, p), out_path);
      }
    } else if (*sample) {
      const Loaded l = load_inputs(ckpt_path, in_path);
      require_histograms(l.ckpt, "sample");
      const HistogramField field = predict_field(l.ckpt.model, l.gray);
      if (!field.has_channel("hue")) throw RuntimeFailure("sample needs a hue/chroma model");
      DecodePolicy p;
      p.seed = seed;
      Rng rng(mix_seed(seed, 0x5a3e));
      const auto biases = rotation_biases(field, n, strength, rng.uniform());
      const auto samples = biased_samples(field, biases, l.gray, p);
      for (int i = 0; i < n; ++i) save_image(samples[static_cast<std::size_t>(i)], sample_path(prefix, i));
      save_image(uncertainty_map(field, p), uncertainty_path);
    } else if (*eval) {
      std::vector<RgbImage> preds, gts;
      for (const auto& gt : list_images(gt_dir)) {
        const fs::path pred = fs::path(pred_dir) / gt.filename();
        if (!fs::exists(pred)) throw RuntimeFailure(pred.string() + ": missing prediction for " + gt.string());
        gts.push_back(load_rgb(gt.string()));
        preds.push_back(load_rgb(pred.string()));
        if (preds.back().width() != gts.back().width() || preds.back().height() != gts.back().height())
          throw RuntimeFailure(pred.string() + ": size differs from ground truth");
      }
      if (gts.empty()) throw RuntimeFailure(gt_dir + ": no images");
      const EvalReport report = evaluate(preds, gts, default_thresholds());
      std::ostringstream os;
      write_report(os, report);
      write_text(report_path, os.str());
      out << os.str();
      if (!curve_path.empty()) {
        std::ostringstream cs;
        write_curve(cs, report);
        write_text(curve_path, cs.str());
      }
    } else if (*synth) {
      SynthOptions so;
      so.ambiguous = ambiguous;
      fs::create_directories(out_path);
      if (!gray_dir.empty()) fs::create_directories(gray_dir);
      for (int i = 0; i < count; ++i) {
        const std::uint64_t index = first + static_cast<std::uint64_t>(i);
        char name[32];
        std::snprintf(name, sizeof name, "synth_%05llu.png", static_cast<unsigned long long>(index));
        const RgbImage img = synth_image(seed, index, so);
        save_image(img, (fs::path(out_path) / name).string());
        if (!gray_dir.empty()) save_image(desaturate(img), (fs::path(gray_dir) / name).string());
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int execute(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return execute(args, std::cout, std::cerr);
}

}  // namespace hcolor::cli
