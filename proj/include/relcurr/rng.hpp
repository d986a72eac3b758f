#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace relcurr {

using Rng = std::mt19937_64;

/// Independent generator for a (seed, stream...) tuple. Used wherever work is
/// split per sample so results do not depend on iteration order or threads.
Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

/// 64-bit FNV-1a. Stable across platforms; used for config hashes and
/// question-set keys.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string hash_hex(std::string_view bytes);

}  // namespace relcurr
