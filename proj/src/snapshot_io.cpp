#include "nl4s/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nl4s/error.hpp"

namespace nl4s {

namespace {

constexpr char kMagic[4] = {'N', 'L', '4', 'S'};

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& in, std::size_t& off) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + off, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  off += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void snapshot_save(const PhysicalField& u, const std::filesystem::path& path, const SnapshotMeta& meta) {
  const auto& g = u.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kSnapshotHeaderBytes + 16 * u.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kSnapshotVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n()));
  put<double>(buf, g.half_width());
  put<double>(buf, meta.time);
  put<double>(buf, meta.gamma);
  put<double>(buf, meta.N);
  for (const auto& z : u.values()) {
    put<double>(buf, z.real());
    put<double>(buf, z.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open snapshot for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error("failed writing snapshot: " + path.string());
}

Snapshot snapshot_load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open snapshot: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const auto where = path.string();
  if (buf.size() < kSnapshotHeaderBytes) {
    throw FormatError(where + ": truncated header: expected at least " +
                      std::to_string(kSnapshotHeaderBytes) + " bytes, got " + std::to_string(buf.size()));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (buf[i] != static_cast<unsigned char>(kMagic[i])) {
      throw FormatError(where + ": bad magic at byte offset " + std::to_string(i) +
                        " (expected \"NL4S\")");
    }
  }
  std::size_t off = 4;
  const auto version = get<std::uint32_t>(buf, off);
  if (version != kSnapshotVersion) {
    throw FormatError(where + ": version mismatch at byte offset 4: file has " + std::to_string(version) +
                      ", reader supports " + std::to_string(kSnapshotVersion));
  }
  const auto dim = get<std::uint32_t>(buf, off);
  const auto n = get<std::uint32_t>(buf, off);
  const double L = get<double>(buf, off);
  SnapshotMeta meta;
  meta.time = get<double>(buf, off);
  meta.gamma = get<double>(buf, off);
  meta.N = get<double>(buf, off);
  GridSpec grid = [&] {
    try {
      return GridSpec(static_cast<int>(dim), n, L);
    } catch (const Error& e) {
      throw FormatError(where + ": invalid grid header: " + e.what());
    }
  }();
  const std::size_t expected = kSnapshotHeaderBytes + 16 * grid.size();
  if (buf.size() != expected) {
    throw FormatError(where + ": payload length mismatch (truncated or padded): expected " +
                      std::to_string(expected - kSnapshotHeaderBytes) + " bytes, got " +
                      std::to_string(buf.size() - kSnapshotHeaderBytes));
  }
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double re = get<double>(buf, off);
    const double im = get<double>(buf, off);
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw FormatError(where + ": non-finite sample at index " + std::to_string(i) + " (byte offset " +
                        std::to_string(off - 16) + ")");
    }
    v[i] = Complex(re, im);
  }
  return {PhysicalField(grid, std::move(v)), meta};
}

}  // namespace nl4s
