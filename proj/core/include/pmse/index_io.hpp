#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "pmse/index.hpp"

namespace pmse {

inline constexpr char kIndexMagic[4] = {'P', 'M', 'S', 'E'};
inline constexpr std::uint32_t kIndexVersion = 1;

/// Binary index layout, all little-endian:
///
///   "PMSE" | u32 version | u32 side | u64 N_C | u32 K | u32 N_T | u32 L | f64 mean
///   f32 centroids[N_C * d] | u64 counts[N_C] | u32 neighbors[N_C * K]
///   N_T times: u64 node_count, then per node
///     u8 leaf; internal: u32 split_dim, f32 threshold, u64 left, u64 right
///              leaf:     u32 count, u32 indices[count]
///
/// Child links are node positions within the same tree.
void write_index(std::ostream& out, const DenoiseIndex& index);
void save_index(const DenoiseIndex& index, const std::filesystem::path& path);

/// Errors: kNotIndexFile (bad magic), kVersionMismatch, kUnexpectedEof
/// (truncated), kInconsistentIndex (sizes or links that do not agree).
DenoiseIndex read_index(std::istream& in);
DenoiseIndex load_index(const std::filesystem::path& path);

}  // namespace pmse
