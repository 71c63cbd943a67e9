#include "lattix/cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lattix {

bool ColoredCover::covers_all_sites() const {
  std::vector<char> hit(lat->n_sites(), 0);
  for (const auto& m : members) {
    for (int s : m) hit[s] = 1;
  }
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::vector<int> greedy_coloring(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> color(n, -1);
  std::vector<char> used;
  for (int v = 0; v < n; ++v) {
    used.assign(n + 1, 0);
    for (int w : adjacency[v]) {
      if (w < 0 || w >= n) throw std::invalid_argument("adjacency index out of range");
      if (color[w] >= 0) used[color[w]] = 1;
    }
    int c = 0;
    while (used[c]) ++c;
    color[v] = c;
  }
  return color;
}

ColoredCover build_colored_cover(std::shared_ptr<const Lattice> lat, int spacing,
                                 double radius, bool require_cover) {
  if (!lat) throw std::invalid_argument("cover needs a lattice");
  if (spacing < 1) throw std::invalid_argument("net spacing must be >= 1");
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  if (require_cover && 2.0 * radius < static_cast<double>(spacing)) {
    throw std::invalid_argument("covering condition violated: need radius >= spacing/2");
  }

  ColoredCover cover;
  cover.lat = lat;
  cover.spacing = spacing;
  cover.radius = radius;

  for (int y = 0; y < lat->extent()[1]; y += (lat->dim() == 2 ? spacing : lat->extent()[1])) {
    for (int x = 0; x < lat->extent()[0]; x += spacing) {
      cover.net.push_back(lat->site(x, lat->dim() == 2 ? y : 0));
    }
  }
  std::sort(cover.net.begin(), cover.net.end());

  const int n = lat->n_sites();
  for (int c : cover.net) {
    std::vector<int> ball;
    for (int s = 0; s < n; ++s) {
      if (static_cast<double>(lat->cheb_dist(s, c)) <= radius) ball.push_back(s);
    }
    cover.members.push_back(std::move(ball));
  }

  if (require_cover && !cover.covers_all_sites()) {
    throw std::invalid_argument("covering condition violated: union of balls misses sites");
  }

  const int m = static_cast<int>(cover.members.size());
  cover.intersection.assign(m, {});
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const auto& a = cover.members[i];
      const auto& b = cover.members[j];
      bool meet = false;
      size_t p = 0, q = 0;
      while (p < a.size() && q < b.size()) {
        if (a[p] == b[q]) { meet = true; break; }
        if (a[p] < b[q]) ++p; else ++q;
      }
      if (meet) {
        cover.intersection[i].push_back(j);
        cover.intersection[j].push_back(i);
      }
    }
  }

  cover.max_degree = 0;
  for (const auto& adj : cover.intersection) {
    cover.max_degree = std::max(cover.max_degree, static_cast<int>(adj.size()));
  }
  cover.color = greedy_coloring(cover.intersection);
  cover.n_colors = cover.color.empty() ? 0 : 1 + *std::max_element(cover.color.begin(), cover.color.end());
  if (cover.n_colors > cover.max_degree + 1) {
    throw std::logic_error("greedy coloring exceeded max degree + 1");
  }
  for (int i = 0; i < m; ++i) {
    for (int j : cover.intersection[i]) {
      if (cover.color[i] == cover.color[j]) throw std::logic_error("coloring not proper");
    }
  }
  return cover;
}

double PartitionOfUnity::sum_at(int site) const {
  double s = 0.0;
  for (const auto& w : weight) s += w[site];
  return s;
}

double PartitionOfUnity::max_hop_variation() const {
  double worst = 0.0;
  const int n = lat->n_sites();
  for (const auto& w : weight) {
    for (int s = 0; s < n; ++s) {
      for (int nb : lat->neighbors(s)) {
        worst = std::max(worst, std::abs(w[s] - w[nb]));
      }
    }
  }
  return worst;
}

PartitionOfUnity partition_of_unity(const ColoredCover& cover, int taper) {
  if (taper < 1) throw std::invalid_argument("taper width must be >= 1");
  const auto& lat = *cover.lat;
  const int n = lat.n_sites();
  const int m = static_cast<int>(cover.members.size());

  // Raw bumps: 1 inside cheb_dist <= radius - taper, sloping by 1/(taper+1)
  // per unit distance, reaching 0 just outside the ball.
  std::vector<std::vector<double>> raw(m, std::vector<double>(n, 0.0));
  for (int i = 0; i < m; ++i) {
    const int c = cover.net[i];
    for (int s = 0; s < n; ++s) {
      const double d = static_cast<double>(lat.cheb_dist(s, c));
      if (d > cover.radius) continue;
      const double v = (cover.radius + 1.0 - d) / (static_cast<double>(taper) + 1.0);
      raw[i][s] = std::min(1.0, v);
    }
  }

  std::vector<double> total(n, 0.0);
  bool plateau_everywhere = true;
  for (int s = 0; s < n; ++s) {
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      total[s] += raw[i][s];
      best = std::max(best, raw[i][s]);
    }
    if (best < 1.0) plateau_everywhere = false;
    if (total[s] <= 0.0) throw std::invalid_argument("cover does not reach every site");
  }
  if (!plateau_everywhere) {
    throw std::invalid_argument(
        "overlap thinner than the taper: some site lies in no plateau (need radius >= spacing/2 + taper)");
  }

  PartitionOfUnity pou;
  pou.lat = cover.lat;
  pou.taper = taper;
  pou.weight.assign(m, std::vector<double>(n, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < n; ++s) pou.weight[i][s] = raw[i][s] / total[s];
  }
  return pou;
}

}  // namespace lattix
