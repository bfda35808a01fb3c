#pragma once

// Little-endian primitives for the checkpoint formats. Internal.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "fttc/error.hpp"

namespace fttc::byte_io {

[[noreturn]] inline void io_error(const std::string& what) {
  throw Error(ErrorKind::io, what);
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  std::array<char, sizeof(T)> buf{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(buf.data(), buf.size());
}

inline void put_f64(std::ostream& out, double v) {
  put_le(out, std::bit_cast<std::uint64_t>(v));
}

template <typename T>
T get_le(std::istream& in, const std::string& what) {
  std::array<unsigned char, sizeof(T)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    io_error("truncated stream while reading " + what);
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

inline double get_f64(std::istream& in, const std::string& what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in, what));
}

}  // namespace fttc::byte_io
