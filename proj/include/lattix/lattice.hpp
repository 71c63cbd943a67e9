#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace lattix {

enum class LatticeKind { Torus, PlaneWindow, Circle, HalfLine };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

// Finite set of integer sites with unit spacing.  Sites are enumerated
// lexicographically: site = x + extent[0] * y.  Adjacency is by unit hops
// (degree 2*dim at interior sites).  dist() is the hop-count (graph) metric,
// with per-axis wrap on Torus/Circle; cheb_dist() is the axis-max distance
// used for boxes and cover balls.
class Lattice {
 public:
  Lattice(LatticeKind kind, int dim, std::array<int, 2> extent);

  LatticeKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::array<int, 2>& extent() const { return extent_; }
  int n_sites() const { return n_sites_; }

  bool wraps(int axis) const;
  bool has_boundary() const;

  std::array<int, 2> coords(int site) const;
  int site(int x, int y = 0) const;
  bool in_range(int x, int y = 0) const;

  int axis_dist(int a, int b, int axis) const;
  int dist(int i, int j) const;
  int cheb_dist(int i, int j) const;
  int diameter() const;

  std::vector<int> neighbors(int site) const;
  int degree(int site) const { return static_cast<int>(neighbors(site).size()); }
  bool interior(int site) const { return degree(site) == 2 * dim_; }

  // Directed unit hop along +/-axis; returns -1 when the hop leaves the window.
  int hop(int site, int axis, int step) const;

  std::string describe() const;

 private:
  LatticeKind kind_;
  int dim_;
  std::array<int, 2> extent_;
  int n_sites_;
};

Lattice build_lattice(LatticeKind kind, int dim, std::array<int, 2> extent);

// Shared handle consumed by operators, bundles and sequences.
std::shared_ptr<const Lattice> make_lattice(LatticeKind kind, int dim,
                                            std::array<int, 2> extent);

}  // namespace lattix
