#pragma once

#include <string>

#include "gdm/flow.hpp"
#include "gdm/net.hpp"

namespace gdm {

// Container layout: magic "GDMC", u32 version, u64 JSON length, JSON header
// {layer_dims, activation, cond_embed_dim, flow config, param_count},
// then the raw little-endian float64 parameter block.
void save_checkpoint(const std::string& path, const VectorFieldNet& net, const FlowConfig& cfg);

struct Checkpoint {
    VectorFieldNet net;
    FlowConfig cfg;
};

Checkpoint load_checkpoint(const std::string& path);

// FNV-1a hash of the file bytes, hex-encoded; identifies checkpoints in
// manifests and benchmark reports.
std::string file_hash_hex(const std::string& path);

}  // namespace gdm
