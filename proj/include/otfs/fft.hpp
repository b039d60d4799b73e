#pragma once

#include <span>

#include "otfs/types.hpp"

namespace otfs::fft {

// forward uses exp(-j 2 pi k n / L), inverse exp(+j ...). Both are scaled by
// 1/sqrt(L) so every transform here is unitary.
enum class Direction { forward, inverse };

void transform(std::span<const Complex> in, std::span<Complex> out, Direction dir);
void transform_inplace(std::span<Complex> x, Direction dir);

}  // namespace otfs::fft
