#pragma once

// Binary ensemble snapshots, all fields little-endian:
//   "SRSP" | u32 version | u32 d | u32 N_1..N_d | u32 K | f64 m | f64 lambda[K]
//   | K x P x (f64 re, f64 im) in flat row-major mode order

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "srsp/ensemble.hpp"

namespace srsp {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::vector<std::uint32_t> modes;
  std::uint32_t count = 0;
  double mass = 0.0;
};

void write_snapshot(const Ensemble& e, const std::filesystem::path& path);
std::vector<unsigned char> encode_snapshot(const Ensemble& e);

/// Reads a snapshot onto the given basis; the stored d and N_i must match.
Ensemble read_snapshot(const std::filesystem::path& path, std::shared_ptr<const SineBasis> basis);
Ensemble decode_snapshot(const std::vector<unsigned char>& bytes, std::shared_ptr<const SineBasis> basis);
SnapshotHeader read_snapshot_header(const std::filesystem::path& path);

}  // namespace srsp
