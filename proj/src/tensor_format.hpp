#pragma once

// Shared little-endian header for cost-tensor and state-snapshot dumps.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace cqaoa::detail {

inline constexpr std::array<char, 4> kTensorMagic{'C', 'Q', 'T', 'N'};
inline constexpr std::uint32_t kTensorVersion = 1;

enum class EntryKind : std::uint32_t { real64 = 0, complex128 = 1 };

inline void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), 8);
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), 4);
}

inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  if (!in) throw std::runtime_error("truncated tensor file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw std::runtime_error("truncated tensor file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

struct TensorHeader {
  EntryKind kind = EntryKind::real64;
  std::vector<std::uint64_t> dims;
  std::uint64_t hash = 0;
};

inline void write_header(std::ostream& out, const TensorHeader& h) {
  out.write(kTensorMagic.data(), 4);
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(h.kind));
  put_u32(out, static_cast<std::uint32_t>(h.dims.size()));
  for (auto d : h.dims) put_u64(out, d);
  put_u64(out, h.hash);
}

inline TensorHeader read_header(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kTensorMagic) throw std::runtime_error("not a tensor file");
  if (get_u32(in) != kTensorVersion) throw std::runtime_error("unsupported tensor file version");
  TensorHeader h;
  h.kind = static_cast<EntryKind>(get_u32(in));
  const auto rank = get_u32(in);
  for (std::uint32_t i = 0; i < rank; ++i) h.dims.push_back(get_u64(in));
  h.hash = get_u64(in);
  return h;
}

}  // namespace cqaoa::detail
