#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

#include "fttc/error.hpp"
#include "fttc/tensor_train.hpp"
#include "byte_io.hpp"

namespace fttc {

namespace {

// Refuse headers that would allocate absurd amounts of memory.
constexpr std::uint64_t kMaxOrder = 1u << 16;
constexpr std::uint64_t kMaxExtent = 1u << 24;
constexpr std::uint64_t kMaxCoreValues = 1ull << 26;

using byte_io::get_f64;
using byte_io::get_le;
using byte_io::io_error;
using byte_io::put_f64;
using byte_io::put_le;

}  // namespace

void tt_serialize(const TensorTrain& a, std::ostream& out) {
  out.write(reinterpret_cast<const char*>(kTtcMagic), 4);
  put_le(out, static_cast<std::uint32_t>(a.order()));
  for (std::size_t n : a.dims()) put_le(out, static_cast<std::uint64_t>(n));
  for (std::size_t r : a.ranks()) put_le(out, static_cast<std::uint64_t>(r));
  for (const TtCore& c : a.cores()) {
    for (const cplx& v : c.data()) {
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  }
  if (!out) io_error("TTC1: write failed");
}

TensorTrain tt_deserialize(std::istream& in) {
  std::array<unsigned char, 4> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), 4);
  if (in.gcount() != 4) io_error("TTC1: truncated stream while reading magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kTtcMagic))) {
    io_error("TTC1: bad magic");
  }
  const auto d = get_le<std::uint32_t>(in, "TTC1 order");
  if (d == 0 || d > kMaxOrder) io_error("TTC1: implausible order " + std::to_string(d));
  std::vector<std::uint64_t> dims(d), ranks(d + 1);
  for (auto& n : dims) {
    n = get_le<std::uint64_t>(in, "TTC1 mode sizes");
    if (n == 0 || n > kMaxExtent) io_error("TTC1: implausible mode size");
  }
  for (auto& r : ranks) {
    r = get_le<std::uint64_t>(in, "TTC1 ranks");
    if (r == 0 || r > kMaxExtent) io_error("TTC1: implausible rank");
  }
  if (ranks.front() != 1 || ranks.back() != 1) io_error("TTC1: boundary ranks must be 1");

  std::vector<TtCore> cores;
  cores.reserve(d);
  for (std::uint32_t k = 0; k < d; ++k) {
    const std::uint64_t count = ranks[k] * dims[k] * ranks[k + 1];
    if (count > kMaxCoreValues) io_error("TTC1: core too large");
    TtCore c(ranks[k], dims[k], ranks[k + 1]);
    for (cplx& v : c.data()) {
      const double re = get_f64(in, "TTC1 core values");
      const double im = get_f64(in, "TTC1 core values");
      v = {re, im};
    }
    cores.push_back(std::move(c));
  }
  try {
    return TensorTrain(std::move(cores));
  } catch (const Error& e) {
    io_error(std::string("TTC1: ") + e.what());
  }
}

std::vector<std::uint8_t> tt_serialize(const TensorTrain& a) {
  std::ostringstream out(std::ios::binary);
  tt_serialize(a, out);
  const std::string s = out.str();
  return {s.begin(), s.end()};
}

TensorTrain tt_deserialize(std::span<const std::uint8_t> bytes) {
  std::istringstream in(std::string(bytes.begin(), bytes.end()), std::ios::binary);
  TensorTrain a = tt_deserialize(in);
  if (in.peek() != std::char_traits<char>::eof()) io_error("TTC1: trailing bytes");
  return a;
}

void tt_save(const TensorTrain& a, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_error("cannot open " + tmp + " for writing");
    tt_serialize(a, out);
    out.flush();
    if (!out) io_error("write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) io_error("cannot rename " + tmp);
}

TensorTrain tt_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path);
  return tt_deserialize(in);
}

}  // namespace fttc
