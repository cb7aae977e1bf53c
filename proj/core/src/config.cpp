#include "hcolor/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace hcolor {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

long parse_int(const std::string& v, int line) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, "expected an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<ConvLayerSpec> parse_layers(const std::string& v, int line) {
  std::vector<ConvLayerSpec> layers;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = v.find('(', pos);
    if (open == std::string::npos) break;
    const std::size_t close = v.find(')', open);
    if (close == std::string::npos) fail(line, "unterminated layer tuple");
    const std::string between = trim(std::string_view(v).substr(pos, open - pos));
    if (!(between.empty() || (between == "," && !layers.empty()))) fail(line, "malformed layer list");
    const auto fields = split(std::string_view(v).substr(open + 1, close - open - 1), ',');
    if (fields.size() != 5) fail(line, "layer tuples have 5 fields (in,out,kernel,stride,downsample)");
    ConvLayerSpec l;
    l.in_channels = static_cast<int>(parse_int(fields[0], line));
    l.out_channels = static_cast<int>(parse_int(fields[1], line));
    l.kernel = static_cast<int>(parse_int(fields[2], line));
    l.stride = static_cast<int>(parse_int(fields[3], line));
    l.downsample = static_cast<int>(parse_int(fields[4], line));
    layers.push_back(l);
    pos = close + 1;
  }
  if (!trim(std::string_view(v).substr(pos)).empty() || layers.empty()) fail(line, "malformed layer list");
  return layers;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PipelineConfig default_config(LossVariant variant) {
  PipelineConfig cfg;
  cfg.loss.variant = variant;
  cfg.net = NetConfig::desk_scale(cfg.coding());
  return cfg;
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg = default_config();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    try {
      if (key == "variant") cfg.loss.variant = loss_variant_from_string(value);
      else if (key == "lambda_h") cfg.loss.lambda_h = parse_double(value, line);
      else if (key == "region") cfg.loss.region = static_cast<int>(parse_int(value, line));
      else if (key == "bins") cfg.bins = static_cast<int>(parse_int(value, line));
      else if (key == "sigma") cfg.sigma = parse_double(value, line);
      else if (key == "layers") cfg.net.layers = parse_layers(value, line);
      else if (key == "taps") cfg.net.taps = split(value, ',');
      else if (key == "head_width") cfg.net.head_width = static_cast<int>(parse_int(value, line));
      else if (key == "samples_per_image") cfg.net.samples_per_image = static_cast<int>(parse_int(value, line));
      else if (key == "epochs") cfg.train.epochs = static_cast<int>(parse_int(value, line));
      else if (key == "batch_size") cfg.train.batch_size = static_cast<int>(parse_int(value, line));
      else if (key == "lr") cfg.train.lr = parse_double(value, line);
      else if (key == "seed") cfg.train.seed = static_cast<std::uint64_t>(parse_int(value, line));
      else if (key == "rebalance") cfg.train.rebalance = parse_bool(value, line);
      else fail(line, "unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      fail(line, e.what());
    }
  }
  try {
    cfg.net.heads = cfg.coding().heads();
    cfg.net.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << "variant = " << to_string(cfg.loss.variant) << "\n";
  os << "lambda_h = " << fmt(cfg.loss.lambda_h) << "\n";
  os << "region = " << cfg.loss.region << "\n";
  os << "bins = " << cfg.bins << "\n";
  os << "sigma = " << fmt(cfg.sigma) << "\n";
  os << "layers = ";
  for (std::size_t i = 0; i < cfg.net.layers.size(); ++i) {
    const auto& l = cfg.net.layers[i];
    os << (i ? ", " : "") << "(" << l.in_channels << "," << l.out_channels << "," << l.kernel << "," << l.stride
       << "," << l.downsample << ")";
  }
  os << "\n";
  os << "taps = ";
  for (std::size_t i = 0; i < cfg.net.taps.size(); ++i) os << (i ? ", " : "") << cfg.net.taps[i];
  os << "\n";
  os << "head_width = " << cfg.net.head_width << "\n";
  os << "samples_per_image = " << cfg.net.samples_per_image << "\n";
  os << "epochs = " << cfg.train.epochs << "\n";
  os << "batch_size = " << cfg.train.batch_size << "\n";
  os << "lr = " << fmt(cfg.train.lr) << "\n";
  os << "seed = " << cfg.train.seed << "\n";
  os << "rebalance = " << (cfg.train.rebalance ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace hcolor
