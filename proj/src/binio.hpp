#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wakegate/error.hpp"

namespace wakegate::binio {

inline void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline uint32_t read_u32(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    raise(ErrorCode::TruncatedFile, std::string("short read in ") + what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

inline void write_f32(std::ostream& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(out, bits);
}

inline float read_f32(std::istream& in, const char* what) {
  uint32_t bits = read_u32(in, what);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline void write_f32_array(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) write_f32(out, static_cast<float>(v));
}

inline std::vector<double> read_f32_array(std::istream& in, size_t n, const char* what) {
  std::vector<double> values(n);
  for (size_t i = 0; i < n; ++i) values[i] = static_cast<double>(read_f32(in, what));
  return values;
}

inline void write_magic(std::ostream& out, const char magic[4]) {
  out.write(magic, 4);
}

inline void expect_magic(std::istream& in, const char magic[4], const char* what) {
  char buf[4];
  if (!in.read(buf, 4))
    raise(ErrorCode::TruncatedFile, std::string("short read in ") + what);
  if (std::memcmp(buf, magic, 4) != 0)
    raise(ErrorCode::UnsupportedFormat,
          std::string(what) + ": bad magic, expected " + std::string(magic, 4));
}

inline std::ofstream open_out(const std::filesystem::path& path, const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, std::string("cannot write ") + path.string() +
                                          " (" + what + ")");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, std::string("cannot read ") + path.string() +
                                         " (" + what + ")");
  return in;
}

}  // namespace wakegate::binio
