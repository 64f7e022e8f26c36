#pragma once

#include "gdkd/mlp.hpp"

#include <string>

namespace gdkd {

// Versioned binary model file: magic "GDKD", u32 format version, u32 layer
// count, per-layer u32 (in, out) dims, then per layer the row-major f64
// weights followed by the f64 biases. All integers and floats little-endian.

void save_checkpoint(const std::string& path, const Mlp& model);
Mlp load_checkpoint(const std::string& path);

}  // namespace gdkd
