#pragma once

// K-nearest-neighbor index over unit vectors. Points are bucketed into a
// uniform 3D grid over [-1,1]^3; queries expand Chebyshev shells around the
// query cell until the k-th best chord distance beats the bound of any
// unexplored cell. Chord and geodesic distance are monotonically related, so
// chord-NN equals geodesic-NN.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "pano4d/geom.hpp"

namespace pano4d {

class SphereIndex {
 public:
  explicit SphereIndex(const std::vector<Direction>& points) : points_(&points) {
    int n = static_cast<int>(points.size());
    // ~2 points per occupied cell for typical sphere samplings
    res_ = std::max(2, static_cast<int>(std::cbrt(n / 2.0)));
    cell_ = 2.0 / res_;
    cells_.assign(static_cast<std::size_t>(res_) * res_ * res_, {});
    for (int i = 0; i < n; ++i) cells_[cell_of(points[i].vec())].push_back(i);
  }

  struct Neighbor {
    int index;
    double chord2;
  };

  // k nearest points to q, sorted by distance (ties by index).
  std::vector<Neighbor> knn(const Direction& q, int k) const {
    std::vector<Neighbor> best;
    best.reserve(k + 1);
    const Vec3 qv = q.vec();
    int cx = coord(qv.x), cy = coord(qv.y), cz = coord(qv.z);
    double worst = std::numeric_limits<double>::max();
    for (int shell = 0;; ++shell) {
      // Any point in a cell at Chebyshev distance > shell is at least
      // (shell)*cell_ - cell_ away along some axis.
      if (static_cast<int>(best.size()) == k) {
        double bound = (shell - 1) * cell_;
        if (bound > 0 && bound * bound > worst) break;
      }
      bool any_cell = false;
      for (int dx = -shell; dx <= shell; ++dx)
        for (int dy = -shell; dy <= shell; ++dy)
          for (int dz = -shell; dz <= shell; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != shell) continue;
            int x = cx + dx, y = cy + dy, z = cz + dz;
            if (x < 0 || y < 0 || z < 0 || x >= res_ || y >= res_ || z >= res_) continue;
            any_cell = true;
            for (int i : cells_[idx(x, y, z)]) {
              Vec3 d = (*points_)[i].vec() - qv;
              double c2 = dot(d, d);
              if (static_cast<int>(best.size()) < k || c2 < worst ||
                  (c2 == worst && !best.empty() && i < best.back().index)) {
                insert(best, {i, c2}, k);
                worst = best.size() == static_cast<std::size_t>(k)
                            ? best.back().chord2
                            : std::numeric_limits<double>::max();
              }
            }
          }
      if (!any_cell && shell > res_) break;  // grid exhausted
    }
    return best;
  }

 private:
  static void insert(std::vector<Neighbor>& best, Neighbor n, int k) {
    auto pos = best.begin();
    while (pos != best.end() &&
           (pos->chord2 < n.chord2 || (pos->chord2 == n.chord2 && pos->index < n.index)))
      ++pos;
    best.insert(pos, n);
    if (static_cast<int>(best.size()) > k) best.pop_back();
  }

  int coord(double v) const { return std::clamp(static_cast<int>((v + 1.0) / cell_), 0, res_ - 1); }
  std::size_t idx(int x, int y, int z) const {
    return (static_cast<std::size_t>(x) * res_ + y) * res_ + z;
  }
  std::size_t cell_of(const Vec3& p) const { return idx(coord(p.x), coord(p.y), coord(p.z)); }

  const std::vector<Direction>* points_;
  int res_ = 2;
  double cell_ = 1.0;
  std::vector<std::vector<int>> cells_;
};

}  // namespace pano4d
