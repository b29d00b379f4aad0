#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nhse {

enum class Shape { chain, square, triangle };
enum class Boundary { open, periodic };

std::string to_string(Shape shape);
std::string to_string(Boundary boundary);
Shape parse_shape(const std::string& name);
Boundary parse_boundary(const std::string& name);

struct Site {
  int x;
  int y;
};

/// Finite lattice of unit cells, each carrying `orbitals` internal states.
///
/// Coordinates are 1-based. Sites are ordered by y, then x (x fastest), and
/// the matrix index of (site, orbital) is `orbitals * site + orbital`. A chain
/// is a single row y = 1. The triangle keeps 1 <= x, 1 <= y, x + y <= L + 1
/// and is always open.
class LatticeGeometry {
public:
  static LatticeGeometry chain(int length, Boundary boundary, int orbitals = 2);
  static LatticeGeometry square(int lx, int ly, Boundary bx, Boundary by, int orbitals = 2);
  static LatticeGeometry triangle(int length, int orbitals = 2);

  Shape shape() const { return shape_; }
  Boundary boundary_x() const { return bx_; }
  Boundary boundary_y() const { return by_; }
  int extent_x() const { return lx_; }
  int extent_y() const { return ly_; }
  int orbitals() const { return orbitals_; }

  int num_sites() const { return static_cast<int>(sites_.size()); }
  int dimension() const { return num_sites() * orbitals_; }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(int index) const { return sites_.at(static_cast<std::size_t>(index)); }

  /// Index of the site at (x, y) after applying periodic wrapping where the
  /// boundary allows it; nullopt when the site is absent.
  std::optional<int> site_index(int x, int y) const;

  int matrix_index(int site, int orbital) const { return orbitals_ * site + orbital; }

  /// Short identifier used in metadata and file names.
  std::string id() const;

private:
  LatticeGeometry(Shape shape, int lx, int ly, Boundary bx, Boundary by, int orbitals);
  bool contains(int x, int y) const;

  Shape shape_;
  int lx_;
  int ly_;
  Boundary bx_;
  Boundary by_;
  int orbitals_;
  std::vector<Site> sites_;
  std::vector<int> lookup_;  // (y-1)*lx + (x-1) -> site or -1
};

}  // namespace nhse
