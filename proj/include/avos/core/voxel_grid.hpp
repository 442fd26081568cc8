#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "avos/core/errors.hpp"
#include "avos/core/geometry.hpp"

namespace avos {

struct CellIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  friend constexpr bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Regular partition of the scene bounds. Indexing is half-open on the max
/// side of the bounds: a point exactly on bounds.max is out of range.
struct GridSpec {
  Aabb bounds;
  Vec3 cell{2.0, 2.0, 2.0};
  int nx = 0;
  int ny = 0;
  int nz = 0;

  static GridSpec make(const Aabb& bounds, Vec3 cell) {
    if (!(cell.x > 0 && cell.y > 0 && cell.z > 0)) throw Error("grid cell size must be positive");
    if (!bounds.valid()) throw Error("grid bounds must span positive volume");
    GridSpec s;
    s.bounds = bounds;
    s.cell = cell;
    s.nx = static_cast<int>(std::ceil((bounds.max.x - bounds.min.x) / cell.x));
    s.ny = static_cast<int>(std::ceil((bounds.max.y - bounds.min.y) / cell.y));
    s.nz = static_cast<int>(std::ceil((bounds.max.z - bounds.min.z) / cell.z));
    return s;
  }
  static GridSpec make(const Aabb& bounds, double cell_size) {
    return make(bounds, Vec3{cell_size, cell_size, cell_size});
  }

  int64_t cell_count() const { return static_cast<int64_t>(nx) * ny * nz; }
  bool in_range(CellIndex c) const {
    return c.i >= 0 && c.j >= 0 && c.k >= 0 && c.i < nx && c.j < ny && c.k < nz;
  }
  int64_t linear(CellIndex c) const {
    return (static_cast<int64_t>(c.k) * ny + c.j) * nx + c.i;
  }
  CellIndex unlinear(int64_t idx) const {
    CellIndex c;
    c.i = static_cast<int>(idx % nx);
    idx /= nx;
    c.j = static_cast<int>(idx % ny);
    c.k = static_cast<int>(idx / ny);
    return c;
  }

  std::optional<CellIndex> try_index(Vec3 p) const {
    if (!(p.x >= bounds.min.x && p.x < bounds.max.x && p.y >= bounds.min.y &&
          p.y < bounds.max.y && p.z >= bounds.min.z && p.z < bounds.max.z))
      return std::nullopt;
    CellIndex c{static_cast<int>(std::floor((p.x - bounds.min.x) / cell.x)),
                static_cast<int>(std::floor((p.y - bounds.min.y) / cell.y)),
                static_cast<int>(std::floor((p.z - bounds.min.z) / cell.z))};
    if (!in_range(c)) return std::nullopt;
    return c;
  }

  Vec3 cell_min(CellIndex c) const {
    return {bounds.min.x + c.i * cell.x, bounds.min.y + c.j * cell.y, bounds.min.z + c.k * cell.z};
  }
  Vec3 cell_center(CellIndex c) const { return cell_min(c) + cell * 0.5; }
  Aabb cell_box(CellIndex c) const { return {cell_min(c), cell_min(c) + cell}; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.bounds.min == b.bounds.min && a.bounds.max == b.bounds.max && a.cell == b.cell &&
           a.nx == b.nx && a.ny == b.ny && a.nz == b.nz;
  }
};

/// i = floor((X - x_min) / dx), likewise j, k. Throws OutOfRangeError.
inline CellIndex world_to_index(Vec3 p, const GridSpec& spec) {
  auto c = spec.try_index(p);
  if (!c) throw OutOfRangeError("point outside grid bounds");
  return *c;
}

/// Dense 3D container keyed by GridSpec.
template <typename T>
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const GridSpec& spec, T init)
      : spec_(spec), data_(static_cast<size_t>(spec.cell_count()), init) {}

  const GridSpec& spec() const { return spec_; }
  T& operator[](int64_t idx) { return data_[static_cast<size_t>(idx)]; }
  const T& operator[](int64_t idx) const { return data_[static_cast<size_t>(idx)]; }
  T& at(CellIndex c) { return data_.at(static_cast<size_t>(checked(c))); }
  const T& at(CellIndex c) const { return data_.at(static_cast<size_t>(checked(c))); }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }
  size_t size() const { return data_.size(); }

 private:
  int64_t checked(CellIndex c) const {
    if (!spec_.in_range(c)) throw OutOfRangeError("cell index out of range");
    return spec_.linear(c);
  }
  GridSpec spec_;
  std::vector<T> data_;
};

// Face order used everywhere: -x, +x, -y, +y, -z, +z.
inline constexpr int kFaceCount = 6;

inline Vec3 face_normal(int face) {
  Vec3 n;
  n[face / 2] = (face % 2 == 0) ? -1.0 : 1.0;
  return n;
}

inline Vec3 face_center(const GridSpec& spec, CellIndex c, int face) {
  Vec3 p = spec.cell_center(c);
  const int axis = face / 2;
  p[axis] += (face % 2 == 0 ? -0.5 : 0.5) * spec.cell[axis];
  return p;
}

}  // namespace avos
