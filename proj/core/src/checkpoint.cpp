#include "gdkd/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gdkd {

namespace {

constexpr char kMagic[4] = {'G', 'D', 'K', 'D'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void save_checkpoint(const std::string& path, const Mlp& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(model.layer_count()));
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    write_u32(os, static_cast<std::uint32_t>(model.weight(l).rows()));
    write_u32(os, static_cast<std::uint32_t>(model.weight(l).cols()));
  }
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const Matrix& w = model.weight(l);
    for (std::size_t i = 0; i < w.size(); ++i) write_f64(os, w.data()[i]);
    for (double b : model.bias(l)) write_f64(os, b);
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

Mlp load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const std::uint32_t layers = read_u32(is);
  std::vector<std::size_t> dims;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes;
  for (std::uint32_t l = 0; l < layers; ++l) {
    const std::uint32_t in = read_u32(is);
    const std::uint32_t out = read_u32(is);
    if (!dims.empty() && dims.back() != in)
      throw std::runtime_error("checkpoint: layer dims do not chain in " + path);
    if (dims.empty()) dims.push_back(in);
    dims.push_back(out);
    shapes.emplace_back(in, out);
  }
  Rng rng(0);
  Mlp model(dims, rng);
  for (std::uint32_t l = 0; l < layers; ++l) {
    Matrix& w = model.mutable_weight(l);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = read_f64(is);
    Vec& b = model.mutable_bias(l);
    for (double& v : b) v = read_f64(is);
  }
  return model;
}

}  // namespace gdkd
