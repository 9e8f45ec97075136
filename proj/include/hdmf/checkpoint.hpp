#ifndef HDMF_CHECKPOINT_HPP
#define HDMF_CHECKPOINT_HPP

#include <string>
#include <variant>

#include "hdmf/train.hpp"

namespace hdmf {

// Binary checkpoint, little-endian throughout, trailing CRC32 over every
// preceding byte.
//
// Autoencoder: magic "HDMF", version (1 = tied, 2 = untied), K, input_dim,
// K layer sizes (all u32), then W_1..W_K and b_1..b_{2K} as 64-bit floats,
// row-major, in declaration order (version 2 repeats the parameter block
// for the item tower).
//
// MF baseline: magic "MFCP", version 1, k, |U|, |D| (u32), then the user
// and item factor matrices row-major.
void save_checkpoint(const HdmfModel& model, const std::string& path);
void save_checkpoint(const MfModel& model, const std::string& path);

using AnyModel = std::variant<HdmfModel, MfModel>;
AnyModel load_checkpoint(const std::string& path);

}  // namespace hdmf

#endif
