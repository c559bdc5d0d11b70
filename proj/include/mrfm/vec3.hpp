#pragma once

#include <cmath>

namespace mrfm {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  double norm() const noexcept { return std::sqrt(dot(*this)); }
  Vec3 operator-() const noexcept { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;
};

}  // namespace mrfm
