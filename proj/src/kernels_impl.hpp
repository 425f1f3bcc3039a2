#pragma once

#include "ffsim/kernels.hpp"

namespace ffsim {

/// Defined in kernels_avx2.cpp; nullptr when that translation unit was
/// built without AVX2 codegen. Callers must still gate on runtime CPU
/// support (see avx2_batch()).
const BatchKernels* avx2_batch_impl();

} // namespace ffsim
