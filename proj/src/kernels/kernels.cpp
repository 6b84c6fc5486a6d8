// SPDX-License-Identifier: Apache-2.0
#include "stcris/kernels.hpp"

#include <cstdlib>

#include "lanes.hpp"

// TODO: add a NEON lane once we have aarch64 hardware in CI to test against.

namespace stcris::kernels {
namespace {

const Dispatch* pick_default() {
  if (const char* env = std::getenv("STC_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &detail::scalar_table();
    if (want == "avx2") {
      if (const Dispatch* t = detail::avx2_table()) return t;
      throw ConfigError("STC_KERNELS=avx2 but this CPU or build lacks AVX2+FMA");
    }
    throw ConfigError("unknown STC_KERNELS value '" + want +
                      "' (expected scalar or avx2)");
  }
  if (const Dispatch* t = detail::avx2_table()) return t;
  return &detail::scalar_table();
}

const Dispatch*& current() {
  static const Dispatch* table = pick_default();
  return table;
}

}  // namespace

const Dispatch& active() { return *current(); }

const Dispatch& scalar() { return detail::scalar_table(); }

const Dispatch* avx2() { return detail::avx2_table(); }

void force(const std::string& name) {
  if (name == "scalar") {
    current() = &detail::scalar_table();
    return;
  }
  if (name == "avx2") {
    if (const Dispatch* t = detail::avx2_table()) {
      current() = t;
      return;
    }
    throw ConfigError("AVX2 kernels not available on this CPU or build");
  }
  throw ConfigError("unknown kernel lane '" + name + "' (expected scalar or avx2)");
}

}  // namespace stcris::kernels
