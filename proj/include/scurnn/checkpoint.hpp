#pragma once
#include <string>

#include "scurnn/rnn.hpp"

namespace scurnn {

// Binary container: magic "SCUR", version u32, n/m/p u32 (little-endian),
// then named float64 arrays (name length u32, name bytes, element count u64,
// raw little-endian payload). Round-trips are byte-identical.
void save_checkpoint(const std::string& path, const ScuRnnParams& params);
ScuRnnParams load_checkpoint(const std::string& path);

}  // namespace scurnn
