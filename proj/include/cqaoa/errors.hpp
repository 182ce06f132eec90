#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cqaoa {

/// Default tensor size limit: 2^28 entries (4 GB of complex doubles).
inline constexpr std::uint64_t kDefaultMemoryCap = 1ULL << 28;

class MemoryCapExceeded : public std::runtime_error {
 public:
  MemoryCapExceeded(std::uint64_t entries, std::uint64_t cap)
      : std::runtime_error("memory cap: " + std::to_string(entries) + " tensor entries exceed cap of " +
                           std::to_string(cap)),
        entries_(entries) {}

  std::uint64_t entries() const { return entries_; }

 private:
  std::uint64_t entries_;
};

}  // namespace cqaoa
