#pragma once

#include "fullersim/kernels.hpp"

namespace fullersim::kernels::detail {

// Defined in kernels_avx2.cpp when that translation unit is built.
const KernelTable* avx2_table() noexcept;

}  // namespace fullersim::kernels::detail
