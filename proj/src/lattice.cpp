#include "lattix/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lattix {

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Torus: return "torus";
    case LatticeKind::PlaneWindow: return "plane-window";
    case LatticeKind::Circle: return "circle";
    case LatticeKind::HalfLine: return "half-line";
  }
  throw std::logic_error("unknown lattice kind");
}

LatticeKind lattice_kind_from_string(const std::string& name) {
  if (name == "torus") return LatticeKind::Torus;
  if (name == "plane-window") return LatticeKind::PlaneWindow;
  if (name == "circle") return LatticeKind::Circle;
  if (name == "half-line") return LatticeKind::HalfLine;
  throw std::invalid_argument("unknown lattice kind: " + name);
}

Lattice::Lattice(LatticeKind kind, int dim, std::array<int, 2> extent)
    : kind_(kind), dim_(dim), extent_(extent) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("lattice dimension must be 1 or 2");
  }
  if (kind == LatticeKind::Torus && dim != 2) {
    throw std::invalid_argument("torus lattice requires d = 2 (use circle for d = 1)");
  }
  if ((kind == LatticeKind::Circle || kind == LatticeKind::HalfLine) && dim != 1) {
    throw std::invalid_argument("circle/half-line lattices are one-dimensional");
  }
  if (dim == 1) extent_[1] = 1;
  for (int a = 0; a < dim_; ++a) {
    if (extent_[a] <= 0) throw std::invalid_argument("lattice extents must be positive");
  }
  if (kind == LatticeKind::Circle && extent_[0] < 3) {
    throw std::invalid_argument("circle lattice needs at least 3 sites");
  }
  if (kind == LatticeKind::Torus && (extent_[0] < 3 || extent_[1] < 3)) {
    throw std::invalid_argument("torus lattice needs extent >= 3 per axis");
  }
  n_sites_ = extent_[0] * extent_[1];
}

bool Lattice::wraps(int axis) const {
  (void)axis;
  return kind_ == LatticeKind::Torus || kind_ == LatticeKind::Circle;
}

bool Lattice::has_boundary() const {
  return kind_ == LatticeKind::PlaneWindow || kind_ == LatticeKind::HalfLine;
}

std::array<int, 2> Lattice::coords(int site) const {
  if (site < 0 || site >= n_sites_) throw std::out_of_range("site index out of range");
  return {site % extent_[0], site / extent_[0]};
}

int Lattice::site(int x, int y) const {
  if (!in_range(x, y)) throw std::out_of_range("site coordinates out of range");
  return x + extent_[0] * y;
}

bool Lattice::in_range(int x, int y) const {
  return x >= 0 && x < extent_[0] && y >= 0 && y < extent_[1];
}

int Lattice::axis_dist(int a, int b, int axis) const {
  int d = std::abs(a - b);
  if (wraps(axis)) d = std::min(d, extent_[axis] - d);
  return d;
}

int Lattice::dist(int i, int j) const {
  auto ci = coords(i);
  auto cj = coords(j);
  int d = 0;
  for (int a = 0; a < dim_; ++a) d += axis_dist(ci[a], cj[a], a);
  return d;
}

int Lattice::cheb_dist(int i, int j) const {
  auto ci = coords(i);
  auto cj = coords(j);
  int d = 0;
  for (int a = 0; a < dim_; ++a) d = std::max(d, axis_dist(ci[a], cj[a], a));
  return d;
}

int Lattice::diameter() const {
  int d = 0;
  for (int a = 0; a < dim_; ++a) {
    d += wraps(a) ? extent_[a] / 2 : extent_[a] - 1;
  }
  return d;
}

std::vector<int> Lattice::neighbors(int site) const {
  std::vector<int> out;
  out.reserve(2 * dim_);
  for (int a = 0; a < dim_; ++a) {
    for (int step : {+1, -1}) {
      int n = hop(site, a, step);
      if (n >= 0) out.push_back(n);
    }
  }
  return out;
}

int Lattice::hop(int site, int axis, int step) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("hop axis out of range");
  if (step != 1 && step != -1) throw std::invalid_argument("hop step must be +1 or -1");
  auto c = coords(site);
  int v = c[axis] + step;
  if (wraps(axis)) {
    v = (v + extent_[axis]) % extent_[axis];
  } else if (v < 0 || v >= extent_[axis]) {
    return -1;
  }
  c[axis] = v;
  return c[0] + extent_[0] * c[1];
}

std::string Lattice::describe() const {
  std::string s = to_string(kind_) + " d=" + std::to_string(dim_) + " " +
                  std::to_string(extent_[0]);
  if (dim_ == 2) s += "x" + std::to_string(extent_[1]);
  return s;
}

Lattice build_lattice(LatticeKind kind, int dim, std::array<int, 2> extent) {
  return Lattice(kind, dim, extent);
}

std::shared_ptr<const Lattice> make_lattice(LatticeKind kind, int dim,
                                            std::array<int, 2> extent) {
  return std::make_shared<const Lattice>(kind, dim, extent);
}

}  // namespace lattix
