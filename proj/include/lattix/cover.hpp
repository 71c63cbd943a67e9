#pragma once

#include <memory>
#include <vector>

#include "lattix/lattice.hpp"

namespace lattix {

// Uniformly bounded cover by axis-max balls around a sublattice net, with a
// proper coloring of its intersection graph (members of one color are
// pairwise disjoint).
struct ColoredCover {
  std::shared_ptr<const Lattice> lat;
  int spacing = 0;
  double radius = 0.0;
  std::vector<int> net;                       // ball centers, lexicographic order
  std::vector<std::vector<int>> members;      // sorted site lists
  std::vector<std::vector<int>> intersection; // adjacency lists over members
  std::vector<int> color;                     // per member
  int n_colors = 0;
  int max_degree = 0;

  bool covers_all_sites() const;
};

// Greedy first-fit coloring in the given vertex order; never uses more than
// max_degree + 1 colors.
std::vector<int> greedy_coloring(const std::vector<std::vector<int>>& adjacency);

// require_cover enforces the covering condition (radius >= spacing/2 and a
// full-union check); disable it only to study colorings of sparse ball
// families.
ColoredCover build_colored_cover(std::shared_ptr<const Lattice> lat, int spacing,
                                 double radius, bool require_cover = true);

// Nonnegative weights subordinate to the cover: plateau 1 on the ball core,
// linear taper of width w, normalized site-wise.  Hop-to-hop variation of
// every weight stays below 1/w.
struct PartitionOfUnity {
  std::shared_ptr<const Lattice> lat;
  int taper = 0;
  std::vector<std::vector<double>> weight;  // weight[member][site]

  int n_members() const { return static_cast<int>(weight.size()); }
  double sum_at(int site) const;
  double max_hop_variation() const;
};

PartitionOfUnity partition_of_unity(const ColoredCover& cover, int taper);

}  // namespace lattix
