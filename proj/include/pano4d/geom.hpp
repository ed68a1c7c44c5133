#pragma once

// Spherical / equirectangular / perspective coordinate systems.
//
// Conventions used throughout the library:
//   - Directions are unit vectors on S^2. World +z is "up"; the equator
//     panorama center (u, v) = (0, 0) looks along +y.
//   - Equirect coordinates (u, v) live in [-1, 1]^2. u is the signed azimuth
//     scaled by 1/pi (positive toward +x, seam at u = +/-1 on the -y half
//     plane); v is the elevation scaled by 2/pi (v = +1 at +z).
//   - Normalized image-plane coordinates (x, y) live in [-1, 1]^2 with +x to
//     the camera's right and +y toward the camera's up vector.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pano4d/math.hpp"

namespace pano4d {

// Unit vector on S^2.
struct Direction {
  double x = 0.0, y = 1.0, z = 0.0;

  Direction() = default;
  Direction(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    double n = std::sqrt(x * x + y * y + z * z);
    x /= n;
    y /= n;
    z /= n;
  }
  explicit Direction(const Vec3& v) : Direction(v.x, v.y, v.z) {}

  Vec3 vec() const { return {x, y, z}; }
};

inline double dot(const Direction& a, const Direction& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double geodesic(const Direction& a, const Direction& b) {
  return angle_between(a.vec(), b.vec());
}

// Sphere direction -> equirect (u, v) in [-1,1]^2.
// v = (2/pi) asin(z). |u| = (1/pi) arccos(y / sqrt(1 - z^2)) with the sign of
// x, which atan2(x, y) produces directly; the seam (-y half plane) maps to
// u = +1 and the poles map to u = 0.
inline Vec2 dir_to_equirect(const Direction& d) {
  if (std::abs(d.z) >= 1.0 - 1e-15) return {0.0, d.z > 0 ? 1.0 : -1.0};
  double u = std::atan2(d.x, d.y) / kPi;
  if (u == -1.0) u = 1.0;
  double v = 2.0 / kPi * std::asin(std::clamp(d.z, -1.0, 1.0));
  return {u, v};
}

inline Direction equirect_to_dir(double u, double v) {
  double azim = u * kPi;
  double elev = v * kPi / 2.0;
  double ce = std::cos(elev);
  Direction d;
  d.x = ce * std::sin(azim);
  d.y = ce * std::cos(azim);
  d.z = std::sin(elev);
  return d;
}

// Pinhole camera at the origin. The image plane sits at distance `focal`
// along `axis` and has extent `plane_w` x `plane_h` in the same units; roll
// is fixed at zero, meaning the up vector lies in the plane spanned by axis
// and world z. Cameras pointing within 1e-6 of +/-z need an explicit up.
struct Camera {
  Direction axis;
  double focal = 0.6;
  double plane_w = 0.6, plane_h = 0.6;
  double roll = 0.0;
  int res_w = 512, res_h = 512;
  Vec3 right, up;  // derived orthonormal frame

  Camera() { set_frame(std::nullopt); }

  Camera(const Direction& axis_, double focal_, double plane_w_, double plane_h_, int res_w_,
         int res_h_, std::optional<Vec3> up_override = std::nullopt)
      : axis(axis_), focal(focal_), plane_w(plane_w_), plane_h(plane_h_), res_w(res_w_),
        res_h(res_h_) {
    if (focal <= 0.0) throw std::invalid_argument("camera focal must be positive");
    if (plane_w <= 0.0 || plane_h <= 0.0)
      throw std::invalid_argument("camera plane size must be positive");
    set_frame(up_override);
  }

 private:
  void set_frame(std::optional<Vec3> up_override) {
    const Vec3 a = axis.vec();
    if (up_override) {
      Vec3 u = *up_override - dot(*up_override, a) * a;
      if (norm(u) < 1e-9) throw std::invalid_argument("up override parallel to camera axis");
      up = normalized(u);
    } else {
      if (std::abs(std::abs(a.z) - 1.0) < 1e-6)
        throw std::invalid_argument("camera axis at a pole requires an explicit up override");
      Vec3 zw{0, 0, 1};
      up = normalized(zw - dot(zw, a) * a);
    }
    right = normalized(cross(a, up));
  }
};

// Camera with the given full field of view (applied to both plane axes).
// Focal length is pinned at the f = 0.6 convention and the plane size is
// derived from it.
inline Camera camera_from_fov(const Direction& axis, double fov_deg, int res,
                              std::optional<Vec3> up_override = std::nullopt) {
  if (fov_deg <= 0.0 || fov_deg >= 180.0) throw std::invalid_argument("fov must be in (0, 180)");
  double f = 0.6;
  double s = 2.0 * f * std::tan(deg_to_rad(fov_deg) / 2.0);
  return Camera(axis, f, s, s, res, res, up_override);
}

// Ray through normalized plane coordinates (x, y) in [-1, 1]^2.
inline Direction camera_ray(const Camera& cam, double x, double y) {
  Vec3 v = cam.axis.vec() * cam.focal + cam.right * (x * cam.plane_w / 2.0) +
           cam.up * (y * cam.plane_h / 2.0);
  return Direction(v);
}

// Inverse of camera_ray: normalized plane coordinates of a direction, or
// nullopt when outside the frustum (non-positive axis component or |x|,|y|>1).
inline std::optional<Vec2> dir_to_pixel(const Camera& cam, const Direction& d) {
  const Vec3 dv = d.vec();
  double t = dot(dv, cam.axis.vec());
  if (t <= 0.0) return std::nullopt;
  double scale = cam.focal / t;
  double x = dot(dv, cam.right) * scale / (cam.plane_w / 2.0);
  double y = dot(dv, cam.up) * scale / (cam.plane_h / 2.0);
  if (std::abs(x) > 1.0 || std::abs(y) > 1.0) return std::nullopt;
  return Vec2{x, y};
}

inline bool in_frustum(const Camera& cam, const Direction& d) {
  return dir_to_pixel(cam, d).has_value();
}

// Regular icosahedron (circumradius 1), canonical orientation.
struct Icosahedron {
  std::array<Vec3, 12> verts;
  std::array<std::array<int, 3>, 20> faces;

  Icosahedron() {
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    const double n = std::sqrt(1.0 + p * p);
    const double a = 1.0 / n, b = p / n;
    verts = {{{-a, b, 0},  {a, b, 0},  {-a, -b, 0}, {a, -b, 0}, {0, -a, b},  {0, a, b},
              {0, -a, -b}, {0, a, -b}, {b, 0, -a},  {b, 0, a},  {-b, 0, -a}, {-b, 0, a}}};
    faces = {{{0, 11, 5},  {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
              {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
              {3, 2, 6},   {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
              {8, 6, 7},   {9, 8, 1}}};
  }

  Direction face_centroid(int f) const {
    const auto& t = faces[f];
    return Direction((verts[t[0]] + verts[t[1]] + verts[t[2]]) / 3.0);
  }
};

// Uniform-ish point set on S^2 obtained by sampling each icosahedron face and
// projecting onto the sphere.
struct SphereSampling {
  std::vector<Direction> points;
  std::vector<int> face_id;  // [0, 20)

  // Mean nearest-neighbor geodesic spacing estimate for n points on S^2.
  double mean_spacing() const { return std::sqrt(4.0 * kPi / static_cast<double>(points.size())); }
};

namespace detail {

// Barycentric sample pattern for one triangular face.
//
// For per_face = n^2 the pattern is the centroids of the n^2 congruent
// sub-triangles, which is invariant under the face's C3 rotation, so the full
// point set is invariant under the icosahedral rotation group. Remaining
// points (per_face not a perfect square) are filled greedily from the next
// finer sub-triangle lattice, maximizing the minimum distance to points
// already placed; the fill is uniform but breaks exact group covariance.
inline std::vector<std::array<double, 3>> face_pattern(int per_face) {
  auto lattice = [](int n) {
    std::vector<std::array<double, 3>> pts;
    // Upright sub-triangles: centroid bary = ((3i+1), (3j+1), remainder)/3n
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n - i; ++j)
        pts.push_back({(3.0 * i + 1) / (3.0 * n), (3.0 * j + 1) / (3.0 * n),
                       (3.0 * (n - 1 - i - j) + 1) / (3.0 * n)});
    // Inverted sub-triangles: ((3i+2), (3j+2), remainder)/3n
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1 - i; ++j)
        pts.push_back({(3.0 * i + 2) / (3.0 * n), (3.0 * j + 2) / (3.0 * n),
                       (3.0 * (n - 2 - i - j) + 2) / (3.0 * n)});
    return pts;
  };

  int n = static_cast<int>(std::floor(std::sqrt(static_cast<double>(per_face)) + 1e-9));
  std::vector<std::array<double, 3>> base = n >= 1 ? lattice(n) : std::vector<std::array<double, 3>>{};
  int remainder = per_face - n * n;
  if (remainder == 0) return base;

  auto cand = lattice(n + 1);
  auto d2 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
  };
  std::vector<double> best(cand.size(), 1e30);
  for (std::size_t c = 0; c < cand.size(); ++c)
    for (const auto& p : base) best[c] = std::min(best[c], d2(cand[c], p));
  for (int r = 0; r < remainder; ++r) {
    std::size_t pick = 0;
    for (std::size_t c = 1; c < cand.size(); ++c)
      if (best[c] > best[pick]) pick = c;
    base.push_back(cand[pick]);
    for (std::size_t c = 0; c < cand.size(); ++c)
      best[c] = std::min(best[c], d2(cand[c], cand[pick]));
    best[pick] = -1.0;
  }
  return base;
}

}  // namespace detail

inline SphereSampling icosphere_samples(int per_face) {
  if (per_face < 1) throw std::invalid_argument("per_face must be >= 1");
  Icosahedron ico;
  auto pattern = detail::face_pattern(per_face);
  SphereSampling s;
  s.points.reserve(20 * per_face);
  s.face_id.reserve(20 * per_face);
  for (int f = 0; f < 20; ++f) {
    const auto& tri = ico.faces[f];
    for (const auto& b : pattern) {
      Vec3 p = ico.verts[tri[0]] * b[0] + ico.verts[tri[1]] * b[1] + ico.verts[tri[2]] * b[2];
      s.points.emplace_back(p);  // Direction constructor projects to the sphere
      s.face_id.push_back(f);
    }
  }
  return s;
}

// 20 cameras whose axes are the icosahedron face centroids, all with the
// given square field of view.
inline std::vector<Camera> camera_fan(double fov_deg, int res) {
  Icosahedron ico;
  std::vector<Camera> cams;
  cams.reserve(20);
  for (int f = 0; f < 20; ++f) cams.push_back(camera_from_fov(ico.face_centroid(f), fov_deg, res));
  return cams;
}

}  // namespace pano4d
