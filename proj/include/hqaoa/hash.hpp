// hash.hpp
// Stable 64-bit fingerprints for specs and configs (FNV-1a).

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "hqaoa/problem_classes.hpp"

namespace hqaoa {

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Canonical text form of a spec; doubles are written as hex floats so the
/// key is exact.
inline std::string canonical_key(const ClassSpec& spec) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "kind=%s;n=%d;pe=%a;m=%d;k=%d;margin=%a;dir=%s",
                std::string(to_string(spec.kind)).c_str(), spec.n, spec.edge_probability, spec.m, spec.k,
                spec.margin, std::string(to_string(spec.direction)).c_str());
  return buf;
}

inline std::uint64_t spec_hash(const ClassSpec& spec) { return fnv1a(canonical_key(spec)); }

}  // namespace hqaoa
