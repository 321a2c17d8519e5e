// Usable under the terms in the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <cstring>
#include <string>

namespace acf {

// Elements are arbitrary byte strings. Network flow keys are the common case
// and travel as 8-byte strings.
using Element = std::string;

inline Element key_from_u64(uint64_t v) {
  Element e(8, '\0');
  std::memcpy(e.data(), &v, 8);
  return e;
}

}  // namespace acf
