#include "lattix/folner.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace lattix {

namespace {

bool is_sorted_unique(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace

FolnerSequence::FolnerSequence(std::shared_ptr<const Lattice> lat,
                               std::vector<std::vector<int>> sets)
    : lat_(std::move(lat)), sets_(std::move(sets)) {
  if (!lat_) throw std::invalid_argument("folner sequence needs a lattice");
  if (sets_.empty()) throw std::invalid_argument("folner sequence needs at least one set");
  for (auto& s : sets_) {
    if (s.empty()) throw std::invalid_argument("folner set must be nonempty");
    if (!is_sorted_unique(s)) std::sort(s.begin(), s.end());
    if (!is_sorted_unique(s)) throw std::invalid_argument("folner set has duplicate sites");
    if (s.front() < 0 || s.back() >= lat_->n_sites()) {
      throw std::invalid_argument("folner set site out of range");
    }
  }
  for (size_t i = 1; i < sets_.size(); ++i) {
    if (sets_[i].size() <= sets_[i - 1].size()) {
      throw std::invalid_argument("folner sets must strictly increase in size");
    }
    if (!std::includes(sets_[i].begin(), sets_[i].end(), sets_[i - 1].begin(),
                       sets_[i - 1].end())) {
      throw std::invalid_argument("folner sets must be nested");
    }
  }
}

FolnerSequence FolnerSequence::whole_space(std::shared_ptr<const Lattice> lat) {
  std::vector<int> all(lat->n_sites());
  for (int i = 0; i < lat->n_sites(); ++i) all[i] = i;
  return FolnerSequence(std::move(lat), {all});
}

FolnerSequence folner_boxes(std::shared_ptr<const Lattice> lat,
                            const std::vector<int>& sizes, int margin) {
  if (!lat) throw std::invalid_argument("folner_boxes needs a lattice");
  if (margin < 0) throw std::invalid_argument("margin must be nonnegative");
  const auto kind = lat->kind();
  if (kind != LatticeKind::PlaneWindow && kind != LatticeKind::HalfLine) {
    throw std::invalid_argument(
        "folner_boxes applies to windows; use FolnerSequence::whole_space for wrapped lattices");
  }
  if (sizes.empty()) throw std::invalid_argument("empty box schedule");
  std::vector<std::vector<int>> sets;
  sets.reserve(sizes.size());
  for (int L : sizes) {
    if (L <= 0) throw std::invalid_argument("box size must be positive");
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{1, 1};
    for (int a = 0; a < lat->dim(); ++a) {
      const int E = lat->extent()[a];
      if (L > E) throw std::invalid_argument("box size exceeds window extent");
      const int start = (E - L) / 2;
      lo[a] = start;
      hi[a] = start + L;
      if (lo[a] < margin || hi[a] > E - margin) {
        throw std::invalid_argument("box does not keep the requested margin");
      }
    }
    std::vector<int> box;
    box.reserve(static_cast<size_t>(L) * (lat->dim() == 2 ? L : 1));
    for (int y = lo[1]; y < hi[1]; ++y) {
      for (int x = lo[0]; x < hi[0]; ++x) box.push_back(lat->site(x, y));
    }
    std::sort(box.begin(), box.end());
    sets.push_back(std::move(box));
  }
  return FolnerSequence(std::move(lat), std::move(sets));
}

std::vector<int> distances_to_set(const Lattice& lat, const std::vector<int>& sources) {
  const int n = lat.n_sites();
  std::vector<int> dist(n, n);
  std::deque<int> queue;
  for (int s : sources) {
    if (s < 0 || s >= n) throw std::invalid_argument("source site out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int nb : lat.neighbors(cur)) {
      if (dist[nb] > dist[cur] + 1) {
        dist[nb] = dist[cur] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

std::vector<int> folner_boundary(const Lattice& lat, const std::vector<int>& set, int r) {
  if (r < 1) throw std::invalid_argument("boundary radius must be >= 1");
  if (set.empty()) throw std::invalid_argument("empty set has no boundary ratio");
  const int n = lat.n_sites();
  std::vector<char> inside(n, 0);
  for (int s : set) {
    if (s < 0 || s >= n) throw std::invalid_argument("set site out of range");
    inside[s] = 1;
  }
  std::vector<int> complement;
  complement.reserve(n - set.size());
  for (int i = 0; i < n; ++i) {
    if (!inside[i]) complement.push_back(i);
  }
  if (complement.empty()) return {};
  const auto d_set = distances_to_set(lat, set);
  const auto d_comp = distances_to_set(lat, complement);
  std::vector<int> boundary;
  for (int i = 0; i < n; ++i) {
    if (d_set[i] < r && d_comp[i] <= r) boundary.push_back(i);
  }
  return boundary;
}

double folner_deficiency(const Lattice& lat, const std::vector<int>& set, int r) {
  const auto boundary = folner_boundary(lat, set, r);
  return static_cast<double>(boundary.size()) / static_cast<double>(set.size());
}

}  // namespace lattix
