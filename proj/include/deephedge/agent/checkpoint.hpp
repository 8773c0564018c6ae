#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "deephedge/agent/trainer.hpp"

namespace dhedge::agent {

// File layout: 8-byte magic "DHRLCKPT", u64 little-endian manifest length,
// JSON manifest (shapes, offsets, configs, fingerprints), then the parameter
// and optimizer arrays as contiguous little-endian float64.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Throws IncompatibleError when the checkpoint was trained on different
// features/normalization or a different observation shape.
void check_compatible(const Checkpoint& ckpt, const data::NormStats& stats, const env::EnvConfig& env_cfg);

}  // namespace dhedge::agent
