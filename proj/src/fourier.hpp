#pragma once

#include <span>

namespace stablab::detail {

// out = real inverse DFT of (multiplier applied to the DFT of in), where the
// multiplier is -i sign(j) on modes 0 < |j| < n/2 and 0 on modes 0 and n/2.
// in and out may alias.
void conjugate_function(std::span<const double> in, std::span<double> out);

}  // namespace stablab::detail
