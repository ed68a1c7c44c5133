#pragma once

// P4DT tensor files: magic "P4DT", version u16, dtype u8 (f32 = 1), rank u8,
// rank x u32 dims, then the payload little-endian row-major. This is the wire
// format for depth maps, latent grids and the external-process handshake.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pano4d {

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t size() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

inline void write_tensor(const Tensor& t, const std::string& path) {
  if (t.values.size() != t.size()) throw std::invalid_argument("tensor payload/dims mismatch");
  if (t.dims.empty() || t.dims.size() > 255) throw std::invalid_argument("bad tensor rank");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);

  auto put_u16 = [&](std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    f.write(b, 2);
  };
  auto put_u32 = [&](std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    f.write(b, 4);
  };

  f.write("P4DT", 4);
  put_u16(1);                                       // version
  f.put(static_cast<char>(1));                      // dtype f32
  f.put(static_cast<char>(t.dims.size()));          // rank
  for (auto d : t.dims) put_u32(d);
  static_assert(sizeof(float) == 4);
  for (float v : t.values) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(bits);
  }
  if (!f) throw std::runtime_error("short write: " + path);
}

inline Tensor read_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);

  auto get_u16 = [&]() {
    unsigned char b[2];
    f.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  };
  auto get_u32 = [&]() {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };

  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "P4DT", 4) != 0)
    throw std::runtime_error("not a P4DT tensor file: " + path);
  std::uint16_t version = get_u16();
  if (version != 1) throw std::runtime_error("unsupported tensor version: " + path);
  int dtype = f.get();
  if (dtype != 1) throw std::runtime_error("unsupported tensor dtype: " + path);
  int rank = f.get();
  if (rank <= 0) throw std::runtime_error("bad tensor rank: " + path);

  Tensor t;
  t.dims.resize(rank);
  for (int i = 0; i < rank; ++i) t.dims[i] = get_u32();
  t.values.resize(t.size());
  for (auto& v : t.values) {
    std::uint32_t bits = get_u32();
    std::memcpy(&v, &bits, 4);
  }
  if (!f) throw std::runtime_error("truncated tensor file: " + path);
  return t;
}

}  // namespace pano4d
