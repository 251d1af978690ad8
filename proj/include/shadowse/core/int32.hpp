#pragma once

#include <cstdint>

namespace shadowse::core {

// 32-bit two's-complement arithmetic with wrapping, JVM style.

inline std::int32_t wrap_add(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}

inline std::int32_t wrap_sub(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}

inline std::int32_t wrap_mul(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) * static_cast<std::uint32_t>(b));
}

inline std::int32_t wrap_neg(std::int32_t a) {
  return static_cast<std::int32_t>(0u - static_cast<std::uint32_t>(a));
}

/// Truncating division; INT_MIN / -1 wraps to INT_MIN. `b` must be nonzero.
inline std::int32_t wrap_div(std::int32_t a, std::int32_t b) {
  if (b == -1) return wrap_neg(a);
  return a / b;
}

/// Remainder with the sign of the dividend. `b` must be nonzero.
inline std::int32_t wrap_rem(std::int32_t a, std::int32_t b) {
  if (b == -1) return 0;
  return a % b;
}

}  // namespace shadowse::core
