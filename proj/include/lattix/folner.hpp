#pragma once

#include <memory>
#include <vector>

#include "lattix/lattice.hpp"

namespace lattix {

// Nested exhaustion used for per-unit-volume traces.  Sets are sorted site
// lists, strictly increasing in size, each contained in the next.
class FolnerSequence {
 public:
  FolnerSequence(std::shared_ptr<const Lattice> lat,
                 std::vector<std::vector<int>> sets);

  static FolnerSequence whole_space(std::shared_ptr<const Lattice> lat);

  const Lattice& lattice() const { return *lat_; }
  std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }
  int size() const { return static_cast<int>(sets_.size()); }
  const std::vector<int>& set(int i) const { return sets_.at(i); }
  const std::vector<std::vector<int>>& sets() const { return sets_; }

 private:
  std::shared_ptr<const Lattice> lat_;
  std::vector<std::vector<int>> sets_;
};

// Nested axis-aligned boxes centered in the window.  `sizes` are side
// lengths; every box must keep `margin` sites between itself and the window
// edge.
FolnerSequence folner_boxes(std::shared_ptr<const Lattice> lat,
                            const std::vector<int>& sizes, int margin);

// Distance (hop metric) from every lattice site to the nearest site of
// `sources`; unreachable/empty source set gives n_sites (an unattainable
// distance, standing in for infinity).
std::vector<int> distances_to_set(const Lattice& lat, const std::vector<int>& sources);

// r-boundary of a subset: sites with d(x, set) < r and d(x, complement) <= r.
// The half-open collar reproduces the interval enumeration {0,1,L-2,L-1}
// inside plus {-1,L} outside at r=2, i.e. 6 sites for an interval of length L.
std::vector<int> folner_boundary(const Lattice& lat, const std::vector<int>& set, int r);

// #boundary / #set.  Zero when the complement is empty (whole space).
double folner_deficiency(const Lattice& lat, const std::vector<int>& set, int r);

}  // namespace lattix
