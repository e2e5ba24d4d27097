#include "rmlab/rng.hpp"

#include "rmlab/error.hpp"

namespace rmlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::MissingSupport: return "missing-support";
    case ErrorCode::ResourceLimit: return "resource-limit";
    case ErrorCode::UnsupportedTheory: return "unsupported-theory";
    case ErrorCode::NumericInput: return "numeric-input";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(splitmix64(root) ^ splitmix64(stream ^ 0xD1B54A32D192ED03ULL));
}

}  // namespace rmlab
