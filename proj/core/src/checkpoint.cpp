#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "mpg/nn.hpp"

namespace mpg::nn {
namespace {

constexpr char kMagic[8] = {'M', 'P', 'G', 'N', 'E', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::vector<char>& out, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw std::runtime_error("checkpoint truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<char> serialize(const MlpParams& params) {
  std::vector<char> out(std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.layer_sizes.size()));
  for (int s : params.layer_sizes) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  for (std::size_t k = 0; k < params.num_layers(); ++k) {
    const Matrix& w = params.weights[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) put<double>(out, w(r, c));
    }
    for (Eigen::Index i = 0; i < params.biases[k].size(); ++i) put<double>(out, params.biases[k](i));
  }
  return out;
}

MlpParams deserialize(std::span<const char> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not an MPG network checkpoint");
  }
  Reader in(bytes.subspan(sizeof(kMagic)));
  const auto n = in.get<std::uint32_t>();
  if (n < 2 || n > 64) throw std::runtime_error("checkpoint has implausible layer count");
  std::vector<int> sizes(n);
  for (auto& s : sizes) {
    const auto v = in.get<std::uint32_t>();
    if (v == 0 || v > (1u << 20)) throw std::runtime_error("checkpoint has invalid layer size");
    s = static_cast<int>(v);
  }
  MlpParams p = init_params(sizes, 0);
  for (std::size_t k = 0; k < p.num_layers(); ++k) {
    Matrix& w = p.weights[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = in.get<double>();
    }
    for (Eigen::Index i = 0; i < p.biases[k].size(); ++i) p.biases[k](i) = in.get<double>();
  }
  if (!in.exhausted()) throw std::runtime_error("checkpoint has trailing bytes");
  return p;
}

void save_checkpoint(const MlpParams& params, const std::filesystem::path& path) {
  const auto bytes = serialize(params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace mpg::nn
