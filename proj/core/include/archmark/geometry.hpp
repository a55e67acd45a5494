#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace archmark {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Rigid motion x -> rotation * x + translation.
struct RigidMotion {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
};

/// Angle in degrees between two directions.
double angle_deg(const Vec3& a, const Vec3& b);

} // namespace archmark
