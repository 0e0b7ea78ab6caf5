#pragma once

#include <span>

#include "curvhom/tensor.hpp"

namespace curvhom {

/// Writes v at idx and at its images under the curvature symmetries of the
/// first four slots: (a,b,c,d) -> -(b,a,c,d), -(a,b,d,c), (c,d,a,b). Slots
/// past the fourth are carried along unchanged, so the same routine fills
/// R, nabla R and nabla^2 R tables.
///
/// Throws InvalidArgument if the orbit forces v to equal -v (v != 0), or if
/// a slot already holds a different nonzero value (beyond tol).
void set_with_images(Tensor& t, std::span<const int> idx, double v,
                     double tol = 0.0);

inline void set_with_images(Tensor& t, std::initializer_list<int> idx, double v,
                            double tol = 0.0) {
  set_with_images(t, std::span<const int>(idx.begin(), idx.size()), v, tol);
}

}  // namespace curvhom
