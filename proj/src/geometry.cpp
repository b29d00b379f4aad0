#include "nhse/geometry.hpp"

#include "nhse/linalg.hpp"

namespace nhse {

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::chain: return "chain";
    case Shape::square: return "square";
    case Shape::triangle: return "triangle";
  }
  return "?";
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::open ? "open" : "periodic";
}

Shape parse_shape(const std::string& name) {
  if (name == "chain") return Shape::chain;
  if (name == "square") return Shape::square;
  if (name == "triangle") return Shape::triangle;
  throw ValidationError("geometry", "unknown shape '" + name + "'");
}

Boundary parse_boundary(const std::string& name) {
  if (name == "open" || name == "obc") return Boundary::open;
  if (name == "periodic" || name == "pbc") return Boundary::periodic;
  throw ValidationError("geometry", "unknown boundary '" + name + "'");
}

LatticeGeometry::LatticeGeometry(Shape shape, int lx, int ly, Boundary bx, Boundary by,
                                 int orbitals)
    : shape_(shape), lx_(lx), ly_(ly), bx_(bx), by_(by), orbitals_(orbitals) {
  if (orbitals < 1) throw ValidationError("geometry", "orbitals must be >= 1");
  lookup_.assign(static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly), -1);
  for (int y = 1; y <= ly; ++y) {
    for (int x = 1; x <= lx; ++x) {
      if (!contains(x, y)) continue;
      lookup_[static_cast<std::size_t>((y - 1) * lx + (x - 1))] = static_cast<int>(sites_.size());
      sites_.push_back({x, y});
    }
  }
}

bool LatticeGeometry::contains(int x, int y) const {
  if (x < 1 || y < 1 || x > lx_ || y > ly_) return false;
  if (shape_ == Shape::triangle) return x + y <= lx_ + 1;
  return true;
}

LatticeGeometry LatticeGeometry::chain(int length, Boundary boundary, int orbitals) {
  if (length < 2) throw ValidationError("geometry.chain", "L must be >= 2");
  return LatticeGeometry(Shape::chain, length, 1, boundary, Boundary::open, orbitals);
}

LatticeGeometry LatticeGeometry::square(int lx, int ly, Boundary bx, Boundary by, int orbitals) {
  if (lx < 2 || ly < 2) throw ValidationError("geometry.square", "Lx, Ly must be >= 2");
  return LatticeGeometry(Shape::square, lx, ly, bx, by, orbitals);
}

LatticeGeometry LatticeGeometry::triangle(int length, int orbitals) {
  if (length < 2) throw ValidationError("geometry.triangle", "L must be >= 2");
  return LatticeGeometry(Shape::triangle, length, length, Boundary::open, Boundary::open,
                         orbitals);
}

std::optional<int> LatticeGeometry::site_index(int x, int y) const {
  if (bx_ == Boundary::periodic) x = ((x - 1) % lx_ + lx_) % lx_ + 1;
  if (by_ == Boundary::periodic) y = ((y - 1) % ly_ + ly_) % ly_ + 1;
  if (!contains(x, y)) return std::nullopt;
  return lookup_[static_cast<std::size_t>((y - 1) * lx_ + (x - 1))];
}

std::string LatticeGeometry::id() const {
  std::string out = to_string(shape_) + "-" + std::to_string(lx_);
  if (shape_ == Shape::square) out += "x" + std::to_string(ly_);
  if (shape_ != Shape::triangle) {
    out += std::string("-") + (bx_ == Boundary::open ? "o" : "p");
    if (shape_ == Shape::square) out += (by_ == Boundary::open ? "o" : "p");
  }
  return out;
}

}  // namespace nhse
