#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pierscour/error.hpp"
#include "pierscour/train.hpp"

namespace pierscour {

// Layout (version 1), whitespace separated, one logical item per line:
//
//   pierscour-model 1
//   layers <count>
//   layer <in> <out> <activation> <dropout>        (count lines)
//   scale <column> <center> <scale>                (8 lines, column order)
//   weights <k>  followed by <out> rows of <in> values
//   biases <k> <out values>
//   end

namespace {

constexpr std::string_view kMagic = "pierscour-model";
constexpr int kFormatVersion = 1;

class Reader {
 public:
  Reader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of file");
    return w;
  }

  void expect(std::string_view keyword) {
    const std::string w = word();
    if (w != keyword) fail("expected '" + std::string(keyword) + "', found '" + w + "'");
  }

  double number() {
    const std::string w = word();
    double x = 0.0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), x);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size())
      fail("'" + w + "' is not a number");
    return x;
  }

  std::size_t count() {
    const std::string w = word();
    std::size_t x = 0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), x);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size())
      fail("'" + w + "' is not a count");
    return x;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(std::string(source_) + ": model file: " + what);
  }

 private:
  std::istream& in_;
  std::string_view source_;
};

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  check_params(model.params, model.layers);
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "layers " << model.layers.size() << '\n';
  for (const auto& l : model.layers) {
    out << "layer " << l.input_width << ' ' << l.output_width << ' '
        << to_string(l.activation) << ' ' << format_double(l.dropout_rate) << '\n';
  }
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    const auto& s = model.standardizer.columns[c];
    out << "scale " << kColumns[c] << ' ' << format_double(s.center) << ' '
        << format_double(s.scale) << '\n';
  }
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    const auto& p = model.params.layers[k];
    out << "weights " << k << '\n';
    for (std::size_t r = 0; r < p.weights.rows(); ++r) {
      auto row = p.weights.row(r);
      for (std::size_t c = 0; c < row.size(); ++c)
        out << (c ? " " : "") << format_double(row[c]);
      out << '\n';
    }
    out << "biases " << k;
    for (double b : p.biases.data()) out << ' ' << format_double(b);
    out << '\n';
  }
  out << "end\n";
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Model load_model(std::istream& in, std::string_view source) {
  Reader rd(in, source);
  rd.expect(kMagic);
  const std::size_t version = rd.count();
  if (version != kFormatVersion)
    rd.fail("unsupported format version " + std::to_string(version));

  Model model;
  rd.expect("layers");
  const std::size_t n_layers = rd.count();
  if (n_layers == 0) rd.fail("model has no layers");
  for (std::size_t k = 0; k < n_layers; ++k) {
    rd.expect("layer");
    LayerSpec l;
    l.input_width = rd.count();
    l.output_width = rd.count();
    try {
      l.activation = parse_activation(rd.word());
    } catch (const ConfigError& e) {
      rd.fail(e.what());
    }
    l.dropout_rate = rd.number();
    model.layers.push_back(l);
  }
  try {
    validate_topology(model.layers);
  } catch (const ConfigError& e) {
    rd.fail(e.what());
  }

  for (std::size_t c = 0; c < kColumnCount; ++c) {
    rd.expect("scale");
    rd.expect(kColumns[c]);
    auto& s = model.standardizer.columns[c];
    s.center = rd.number();
    s.scale = rd.number();
    if (!(s.scale > 0.0)) rd.fail("scale for column " + std::string(kColumns[c]) + " must be positive");
  }

  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& l = model.layers[k];
    rd.expect("weights");
    if (rd.count() != k) rd.fail("layer blocks out of order");
    Layer layer{Matrix(l.output_width, l.input_width), Vector(l.output_width)};
    for (double& w : layer.weights.data()) w = rd.number();
    rd.expect("biases");
    if (rd.count() != k) rd.fail("layer blocks out of order");
    for (double& b : layer.biases.data()) b = rd.number();
    model.params.layers.push_back(std::move(layer));
  }
  rd.expect("end");
  return model;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return load_model(in, path.string());
}

}  // namespace pierscour
