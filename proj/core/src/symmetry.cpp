#include "curvhom/symmetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace curvhom {

void set_with_images(Tensor& t, std::span<const int> idx, double v, double tol) {
  require(t.rank() >= 4 && static_cast<int>(idx.size()) == t.rank(),
          ErrorKind::DimensionMismatch, "symmetry expansion needs rank >= 4");
  struct Image {
    std::array<int, 4> perm;
    double sign;
  };
  static constexpr std::array<Image, 8> kImages{{
      {{0, 1, 2, 3}, 1.0},
      {{1, 0, 2, 3}, -1.0},
      {{0, 1, 3, 2}, -1.0},
      {{1, 0, 3, 2}, 1.0},
      {{2, 3, 0, 1}, 1.0},
      {{3, 2, 0, 1}, -1.0},
      {{2, 3, 1, 0}, -1.0},
      {{3, 2, 1, 0}, 1.0},
  }};

  std::vector<std::pair<std::size_t, double>> orbit;
  std::vector<int> j(idx.begin(), idx.end());
  for (const auto& im : kImages) {
    for (int s = 0; s < 4; ++s) j[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(im.perm[static_cast<std::size_t>(s)])];
    const std::size_t off = t.offset(j);
    const double val = im.sign * v;
    auto it = std::find_if(orbit.begin(), orbit.end(),
                           [&](const auto& e) { return e.first == off; });
    if (it == orbit.end()) {
      orbit.emplace_back(off, val);
    } else {
      require(it->second == val, ErrorKind::InvalidArgument,
              "component is forced to vanish by the curvature symmetries");
    }
  }
  auto comps = t.components();
  for (const auto& [off, val] : orbit) {
    const double old = comps[off];
    require(old == 0.0 || std::abs(old - val) <= tol * std::max(1.0, std::abs(val)),
            ErrorKind::InvalidArgument,
            "inconsistent value for a component already set by symmetry");
    comps[off] = val;
  }
}

}  // namespace curvhom
