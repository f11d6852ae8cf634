#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sfmin {

// All arithmetic in this library is exact signed 64-bit. Instances whose
// worst-case intermediates could leave the safe range are rejected at load.
using Value = std::int64_t;
using NodeId = std::int32_t;

// Magnitude ceiling used by the load-time overflow checks.
inline constexpr Value kValueBound = Value{1} << 62;

class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

class NormalizeError : public std::runtime_error {
 public:
  explicit NormalizeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sfmin
