#pragma once

#include <vector>

#include "qwgw/types.hpp"

namespace qwgw::detail {

/// In-place 2D DFT of a row-major l1 x l2 array (l1 outer). sign = -1 is the
/// forward transform exp(-i k.p). No normalization is applied.
void fft2(std::vector<Complex>& data, int l1, int l2, int sign);

}  // namespace qwgw::detail
