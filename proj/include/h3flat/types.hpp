#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace h3flat {

using Cx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr Cx kI{0.0, 1.0};

// Exceptions thrown by the geometric kernel.  All derive from
// std::runtime_error so callers can catch broadly or by kind.

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateEdgeError : GeometryError {
    explicit DegenerateEdgeError(const std::string& what) : GeometryError(what) {}
};

struct SingularTransitionError : GeometryError {
    explicit SingularTransitionError(const std::string& what) : GeometryError(what) {}
};

struct PropagationError : GeometryError {
    explicit PropagationError(const std::string& what) : GeometryError(what) {}
};

struct ModelViolationError : GeometryError {
    explicit ModelViolationError(const std::string& what) : GeometryError(what) {}
};

struct NoIntersectionError : GeometryError {
    explicit NoIntersectionError(const std::string& what) : GeometryError(what) {}
};

inline Mat2c mat2c(Cx a, Cx b, Cx c, Cx d) {
    Mat2c m;
    m << a, b, c, d;
    return m;
}

} // namespace h3flat
