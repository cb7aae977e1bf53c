#include <gtest/gtest.h>
#include <png.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "hcolor/checkpoint.hpp"
#include "hcolor/config.hpp"
#include "hcolor/decode.hpp"
#include "hcolor/field_io.hpp"
#include "hcolor/image_io.hpp"
#include "test_util.hpp"

namespace hcolor {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("hcolor_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string read(const std::string& p) const {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  void write(const std::string& p, const std::string& bytes) const {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
  }

  fs::path dir_;
};

template <class Fn>
std::string error_reason(Fn&& fn) {
  try {
    fn();
  } catch (const FileFormatError& e) {
    return e.reason();
  }
  return "no error";
}

TEST_F(IoTest, ImageRoundTripWithinQuantization) {
  const RgbImage img = testing::random_image(13, 7, 1);
  for (const char* name : {"a.png", "a.ppm"}) {
    save_image(img, path(name));
    EXPECT_LE(testing::max_abs_diff(load_rgb(path(name)), img), 0.5 / 255 + 1e-12) << name;
  }
  const GrayImage g = testing::random_gray(5, 9, 2);
  for (const char* name : {"g.png", "g.pgm"}) {
    save_image(g, path(name));
    const auto loaded = load_image(path(name));
    ASSERT_TRUE(std::holds_alternative<GrayImage>(loaded)) << name;
    const GrayImage& back = std::get<GrayImage>(loaded);
    for (std::size_t i = 0; i < g.pixel_count(); ++i) ASSERT_LE(std::abs(back[i] - g[i]), 0.5 / 255 + 1e-12);
  }
}

TEST_F(IoTest, SaveLoadSaveIsByteStable) {
  const RgbImage img = testing::random_image(6, 6, 3);
  save_image(img, path("a.png"));
  save_image(load_rgb(path("a.png")), path("b.png"));
  EXPECT_EQ(read(path("a.png")), read(path("b.png")));
}

TEST_F(IoTest, ParsesPpmExample) {
  std::string bytes = "P6 2 2 255\n";
  const unsigned char px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 51, 102, 153};
  bytes.append(reinterpret_cast<const char*>(px), 12);
  write(path("x.ppm"), bytes);
  const RgbImage img = load_rgb(path("x.ppm"));
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img.pixel(0).r, 1.0);
  EXPECT_EQ(img.pixel(1).g, 1.0);
  EXPECT_EQ(img.pixel(2).b, 1.0);
  EXPECT_DOUBLE_EQ(img.pixel(3).r, 0.2);
  EXPECT_DOUBLE_EQ(img.pixel(3).g, 0.4);
  EXPECT_DOUBLE_EQ(img.pixel(3).b, 0.6);
  // Comments in the header are allowed.
  write(path("c.pgm"), std::string("P5\n# note\n1 1\n255\n") + '\x80');
  EXPECT_DOUBLE_EQ(load_gray(path("c.pgm"))[0], 128.0 / 255);
}

TEST_F(IoTest, RejectsSixteenBitPng) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = 2;
  image.height = 2;
  image.format = PNG_FORMAT_LINEAR_RGB;
  const png_uint_16 px[12] = {0, 1000, 65535, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  ASSERT_TRUE(png_image_write_to_file(&image, path("deep.png").c_str(), 0, px, 0, nullptr));
  const std::string p = path("deep.png");
  EXPECT_EQ(error_reason([&] { load_image(p); }), "unsupported bit depth");

  write(path("deep.ppm"), "P6 1 1 65535\n123456");
  EXPECT_EQ(error_reason([&] { load_image(path("deep.ppm")); }), "unsupported bit depth");
}

TEST_F(IoTest, RejectsTruncatedAndUnknownFiles) {
  save_image(testing::random_image(8, 8, 4), path("a.png"));
  const std::string full = read(path("a.png"));
  write(path("cut.png"), full.substr(0, full.size() / 2));
  const std::string reason = error_reason([&] { load_image(path("cut.png")); });
  EXPECT_TRUE(reason == "truncated file" || reason.rfind("invalid PNG", 0) == 0) << reason;

  write(path("cut.ppm"), "P6 2 2 255\nabc");
  EXPECT_EQ(error_reason([&] { load_image(path("cut.ppm")); }), "truncated file");

  write(path("junk.bin"), "hello world");
  EXPECT_EQ(error_reason([&] { load_image(path("junk.bin")); }), "unsupported image format");
  EXPECT_EQ(error_reason([&] { load_image(path("missing.png")); }), "cannot open file");
  try {
    load_image(path("cut.ppm"));
  } catch (const ImageIoError& e) {
    EXPECT_NE(std::string(e.what()).find("cut.ppm"), std::string::npos);
  }
  EXPECT_THROW(save_image(RgbImage(1, 1), path("x.jpg")), ImageIoError);
}

Checkpoint random_checkpoint(std::uint64_t seed) {
  Checkpoint c;
  c.config = default_config();
  c.config.train.seed = seed;
  c.model = init_model(c.config.net, seed);
  Rng rng(seed + 1);
  for (auto& block : c.model.params.blocks())
    for (double& v : block.values) v = rng.uniform(-1, 1);
  return c;
}

TEST_F(IoTest, CheckpointRoundTripIsBitExactAtFloat) {
  for (LossVariant v : {LossVariant::lab_l2, LossVariant::lab_joint_hist, LossVariant::hue_chroma_hist}) {
    Checkpoint c;
    c.config = default_config(v);
    c.model = init_model(c.config.net, 11);
    Rng rng(2);
    for (auto& block : c.model.params.blocks())
      for (double& x : block.values) x = rng.uniform(-1, 1);
    save_checkpoint(c, path("m.ckpt"));
    const Checkpoint back = load_checkpoint(path("m.ckpt"));
    EXPECT_EQ(back.config, c.config);
    EXPECT_EQ(back.model.seed, 11u);
    const Model q = quantize_params(c.model);
    auto a = const_cast<Model&>(q).params.blocks();
    auto b = const_cast<Checkpoint&>(back).model.params.blocks();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].name, b[i].name);
      for (std::size_t j = 0; j < a[i].values.size(); ++j) ASSERT_EQ(a[i].values[j], b[i].values[j]);
    }
    // Saving the loaded checkpoint reproduces the file.
    save_checkpoint(back, path("m2.ckpt"));
    EXPECT_EQ(read(path("m.ckpt")), read(path("m2.ckpt")));
  }
}

TEST_F(IoTest, CheckpointErrors) {
  save_checkpoint(random_checkpoint(1), path("m.ckpt"));
  const std::string good = read(path("m.ckpt"));

  std::string bad = good;
  bad[0] = 'X';
  write(path("magic.ckpt"), bad);
  EXPECT_EQ(error_reason([&] { load_checkpoint(path("magic.ckpt")); }), "bad magic");

  bad = good;
  bad[4] = 7;
  write(path("version.ckpt"), bad);
  EXPECT_EQ(error_reason([&] { load_checkpoint(path("version.ckpt")); }).rfind("version mismatch", 0), 0u);

  for (std::size_t cut : {std::size_t{2}, std::size_t{10}, good.size() / 2, good.size() - 1}) {
    write(path("cut.ckpt"), good.substr(0, cut));
    EXPECT_EQ(error_reason([&] { load_checkpoint(path("cut.ckpt")); }), "unexpected end of file") << cut;
  }

  Checkpoint wrong = random_checkpoint(1);
  NetConfig narrow = wrong.config.net;
  narrow.head_width = 8;
  wrong.model = init_model(narrow, 1);
  save_checkpoint(wrong, path("shape.ckpt"));
  EXPECT_EQ(error_reason([&] { load_checkpoint(path("shape.ckpt")); }).rfind("shape mismatch", 0), 0u);

  write(path("trail.ckpt"), good + "x");
  EXPECT_NE(error_reason([&] { load_checkpoint(path("trail.ckpt")); }), "no error");
}

TEST_F(IoTest, FieldDumpRoundTripAndRender) {
  const OutputCoding coding({LossVariant::hue_chroma_hist, 5.0, 1}, 32, 25.0);
  NetConfig cfg = NetConfig::desk_scale(coding);
  const Model model = init_model(cfg, 5);
  const RgbImage img = testing::real_images()[3];
  const GrayImage gray = desaturate(img);
  const HistogramField field = predict_field(model, gray);
  save_field(field, path("f.hfld"));
  const HistogramField back = load_field(path("f.hfld"));
  ASSERT_EQ(back.width(), field.width());
  ASSERT_EQ(back.channels().size(), field.channels().size());
  for (std::size_t c = 0; c < field.channels().size(); ++c) {
    EXPECT_EQ(back.channels()[c].name, field.channels()[c].name);
    EXPECT_EQ(back.channels()[c].spec, field.channels()[c].spec);
    for (std::size_t i = 0; i < field.channels()[c].probs.size(); ++i)
      ASSERT_NEAR(back.channels()[c].probs[i], field.channels()[c].probs[i], 1e-7);
  }
  EXPECT_TRUE(back.is_valid(1e-6));
  EXPECT_LE(testing::max_abs_diff(render(back, gray, {}), render(field, gray, {})), 1.0 / 255);

  // Joint Lab field too.
  const OutputCoding joint({LossVariant::lab_joint_hist, 5.0, 1}, 32, 25.0);
  const HistogramField jf = predict_field(init_model(NetConfig::desk_scale(joint), 1), gray);
  save_field(jf, path("j.hfld"));
  EXPECT_LE(testing::max_abs_diff(render(load_field(path("j.hfld")), gray, {}), render(jf, gray, {})), 1.0 / 255);
}

TEST_F(IoTest, FieldDumpErrors) {
  HistogramField f(2, 1);
  FieldChannel& ch = f.add_channel("hue", BinSpec::circular(4), 4);
  ch.probs = {0.25, 0.25, 0.25, 0.25, 1, 0, 0, 0};
  save_field(f, path("f.hfld"));
  const std::string good = read(path("f.hfld"));
  write(path("cut.hfld"), good.substr(0, good.size() - 3));
  EXPECT_EQ(error_reason([&] { load_field(path("cut.hfld")); }), "unexpected end of file");
  std::string bad = good;
  bad[1] = 'x';
  write(path("magic.hfld"), bad);
  EXPECT_EQ(error_reason([&] { load_field(path("magic.hfld")); }), "bad magic");
  // Corrupt the last probability so the second row no longer sums to 1.
  bad = good;
  const float two = 2.0f;
  std::memcpy(bad.data() + bad.size() - 4, &two, 4);
  write(path("sum.hfld"), bad);
  EXPECT_NE(error_reason([&] { load_field(path("sum.hfld")); }), "no error");
}

TEST(Config, ParseFormatRoundTrip) {
  for (LossVariant v : {LossVariant::lab_l2, LossVariant::lab_marginal_hist, LossVariant::lab_joint_hist,
                        LossVariant::hue_chroma_hist}) {
    PipelineConfig c = default_config(v);
    c.train.lr = 0.123456789;
    c.train.seed = 42;
    c.train.rebalance = false;
    c.loss.lambda_h = 2.5;
    EXPECT_EQ(parse_config(format_config(c)), c);
  }
  const PipelineConfig c = parse_config(
      "# tiny\nvariant = hue_chroma_hist\nlayers = (1,4,3,1,2), (4,8,3,1,1)\ntaps = data, conv2\n"
      "head_width = 16  # comment\nepochs=3\n");
  EXPECT_EQ(c.net.layers.size(), 2u);
  EXPECT_EQ(c.net.layers[0].out_channels, 4);
  EXPECT_EQ(c.net.taps, (std::vector<std::string>{"data", "conv2"}));
  EXPECT_EQ(c.net.head_width, 16);
  EXPECT_EQ(c.train.epochs, 3);
  EXPECT_EQ(c.net.heads.size(), 2u);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("epochs = three\n"), ConfigError);
  EXPECT_THROW(parse_config("just text\n"), ConfigError);
  EXPECT_THROW(parse_config("layers = (1,4,3,1)\n"), ConfigError);
  EXPECT_THROW(parse_config("layers = (2,4,3,1,1)\n"), ConfigError);  // first layer must take the gray input
  EXPECT_THROW(parse_config("variant = rainbow\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.txt"), ConfigError);
  try {
    parse_config("\n\nbogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

}  // namespace
}  // namespace hcolor
