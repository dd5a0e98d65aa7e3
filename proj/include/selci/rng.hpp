#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace selci {

using Rng = std::mt19937_64;

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent 64-bit seed from a master seed and a path of stream
/// labels, e.g. {replication, purpose, b}. Pure function of its inputs.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master,
                                        std::initializer_list<std::uint64_t> path) noexcept;

[[nodiscard]] inline Rng make_rng(std::uint64_t master,
                                  std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(master, path));
}

// Stream purpose labels used with derive_seed.
enum StreamLabel : std::uint64_t {
  kStreamData = 0x64617461ULL,
  kStreamBootstrap = 0x626f6f74ULL,
};

}  // namespace selci
