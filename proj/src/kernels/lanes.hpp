// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stcris/kernels.hpp"

namespace stcris::kernels::detail {

const Dispatch& scalar_table();

// Null when the build target or the running CPU lacks AVX2+FMA.
const Dispatch* avx2_table();

}  // namespace stcris::kernels::detail
