#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>

#include "nl4s/field.hpp"

namespace nl4s {

inline constexpr std::uint32_t kSnapshotVersion = 1;
// magic(4) + version, d_sim, n (u32) + L, time, gamma, N (f64)
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 3 * 4 + 4 * 8;

struct SnapshotMeta {
  double time = 0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double N = std::numeric_limits<double>::quiet_NaN();
};

struct Snapshot {
  PhysicalField field;
  SnapshotMeta meta;
};

void snapshot_save(const PhysicalField& u, const std::filesystem::path& path,
                   const SnapshotMeta& meta = {});

// Throws FormatError on bad magic (naming the byte offset), version mismatch,
// truncated or oversized payload (expected vs actual bytes) and non-finite samples.
Snapshot snapshot_load(const std::filesystem::path& path);

}  // namespace nl4s
