#pragma once

#include <vector>

#include "espm/parameters.hpp"
#include "espm/types.hpp"

namespace espm {

/// Uniform finite-volume shells on a sphere of radius R. Volumes and face
/// areas carry the common 4*pi factor divided out.
struct SphericalGrid {
  double radius = 0.0;
  double dr = 0.0;
  Vector volume;     // (r_{i+1}^3 - r_i^3) / 3
  Vector face_area;  // r_{i+1}^2 at the N-1 interior faces

  static SphericalGrid uniform(double radius, int cells);

  int size() const { return static_cast<int>(volume.size()); }
  double surface_area() const { return radius * radius; }
  double total_volume() const { return radius * radius * radius / 3.0; }
};

/// Cell-centred axial grid across anode | separator | cathode, uniform within
/// each region.
struct AxialGrid {
  Vector dx;
  std::vector<Region> region;
  int n_neg = 0, n_sep = 0, n_pos = 0;

  static AxialGrid build(const CellParameters& params, const Mesh& mesh);

  int size() const { return static_cast<int>(dx.size()); }
  int begin(Region r) const;
  int count(Region r) const;
};

inline SphericalGrid SphericalGrid::uniform(double radius, int cells) {
  SphericalGrid g;
  g.radius = radius;
  g.dr = radius / cells;
  g.volume.resize(cells);
  g.face_area.resize(cells > 1 ? cells - 1 : 0);
  for (int i = 0; i < cells; ++i) {
    const double r0 = i * g.dr;
    const double r1 = (i + 1 == cells) ? radius : (i + 1) * g.dr;
    g.volume(i) = (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    if (i + 1 < cells) g.face_area(i) = r1 * r1;
  }
  return g;
}

inline AxialGrid AxialGrid::build(const CellParameters& params, const Mesh& mesh) {
  AxialGrid g;
  g.n_neg = mesh.N_x_n;
  g.n_sep = mesh.N_x_s;
  g.n_pos = mesh.N_x_p;
  const int n = g.n_neg + g.n_sep + g.n_pos;
  g.dx.resize(n);
  g.region.resize(n);
  int k = 0;
  auto fill = [&](Region r, int cells, double length) {
    for (int i = 0; i < cells; ++i, ++k) {
      g.dx(k) = length / cells;
      g.region[k] = r;
    }
  };
  fill(Region::Negative, g.n_neg, params.L_n);
  fill(Region::Separator, g.n_sep, params.L_s);
  fill(Region::Positive, g.n_pos, params.L_p);
  return g;
}

inline int AxialGrid::begin(Region r) const {
  switch (r) {
    case Region::Negative: return 0;
    case Region::Separator: return n_neg;
    case Region::Positive: return n_neg + n_sep;
  }
  return 0;
}

inline int AxialGrid::count(Region r) const {
  switch (r) {
    case Region::Negative: return n_neg;
    case Region::Separator: return n_sep;
    case Region::Positive: return n_pos;
  }
  return 0;
}

}  // namespace espm
