#include "lgllv/mesh/point_locator.hpp"

#include <algorithm>
#include <cmath>

namespace lgllv {

BarycentricMap barycentric_map(const Triangle& t) {
  const double twice = orient2d(t[0], t[1], t[2]);
  BarycentricMap m;
  for (int i = 0; i < 3; ++i) {
    const Point& a = t[(i + 1) % 3];
    const Point& b = t[(i + 2) % 3];
    // lambda_i(x) = orient2d(a, b, x) / twice
    m.g[i] = Point{a.x2 - b.x2, b.x1 - a.x1} * (1.0 / twice);
    m.c[i] = cross(a, b) / twice;
  }
  return m;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh), eps_(1e-10 * mesh.diameter()) {
  const int ne = mesh.num_elements();
  bary_.resize(ne);
  grad_norm_.resize(ne);
  boxes_.resize(ne);
  for (int k = 0; k < ne; ++k) {
    const Triangle t = mesh.triangle(k);
    bary_[k] = barycentric_map(t);
    for (int i = 0; i < 3; ++i) grad_norm_[k][i] = norm(bary_[k].g[i]);
    boxes_[k] = BoundingBox::of(t.data(), t.data() + 3);
  }

  const BoundingBox& box = mesh.bounding_box();
  cell_ = std::max(2.0 * mesh.h(), 1e-300);
  origin_ = box.lo;
  nx_ = std::max(1, static_cast<int>(std::ceil((box.hi.x1 - box.lo.x1) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((box.hi.x2 - box.lo.x2) / cell_)));

  std::vector<int> counts(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  auto for_cells = [&](int k, auto&& fn) {
    auto [i0, j0] = cell_of(boxes_[k].lo);
    auto [i1, j1] = cell_of(boxes_[k].hi);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) fn(cell_index(i, j));
  };
  for (int k = 0; k < ne; ++k) for_cells(k, [&](int c) { ++counts[c + 1]; });
  for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
  bucket_start_ = counts;
  bucket_items_.resize(counts.back());
  std::vector<int> fill(counts.begin(), counts.end() - 1);
  // Ascending element order within each bucket.
  for (int k = 0; k < ne; ++k) for_cells(k, [&](int c) { bucket_items_[fill[c]++] = k; });
}

std::pair<int, int> PointLocator::cell_of(const Point& p) const {
  int i = static_cast<int>(std::floor((p.x1 - origin_.x1) / cell_));
  int j = static_cast<int>(std::floor((p.x2 - origin_.x2) / cell_));
  return {std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1)};
}

double PointLocator::inside_margin(int k, const std::array<double, 3>& lambda) const {
  const auto& gn = grad_norm_[k];
  return std::min({lambda[0] / gn[0], lambda[1] / gn[1], lambda[2] / gn[2]});
}

bool PointLocator::contains(int k, const std::array<double, 3>& lambda) const {
  return inside_margin(k, lambda) >= -eps_;
}

std::optional<Location> PointLocator::locate(const Point& p, int hint) const {
  if (hint >= 0 && hint < static_cast<int>(bary_.size())) {
    auto lambda = bary_[hint](p);
    if (inside_margin(hint, lambda) > eps_) return Location{hint, lambda};
  }
  const BoundingBox& box = mesh_->bounding_box();
  if (p.x1 < box.lo.x1 - eps_ || p.x1 > box.hi.x1 + eps_ || p.x2 < box.lo.x2 - eps_ || p.x2 > box.hi.x2 + eps_)
    return std::nullopt;
  auto [i, j] = cell_of(p);
  const int c = cell_index(i, j);
  for (int idx = bucket_start_[c]; idx < bucket_start_[c + 1]; ++idx) {
    const int k = bucket_items_[idx];
    auto lambda = bary_[k](p);
    if (contains(k, lambda)) return Location{k, lambda};
  }
  return std::nullopt;
}

void PointLocator::candidates(const BoundingBox& box, std::vector<int>& out) const {
  out.clear();
  auto [i0, j0] = cell_of(box.lo);
  auto [i1, j1] = cell_of(box.hi);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const int c = cell_index(i, j);
      for (int idx = bucket_start_[c]; idx < bucket_start_[c + 1]; ++idx) {
        const int k = bucket_items_[idx];
        if (boxes_[k].overlaps(box)) out.push_back(k);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::optional<Location> locate_by_walk(const PointLocator& locator, const Point& p, int start) {
  const Mesh& mesh = locator.mesh();
  int k = start;
  int previous = -1;
  for (int steps = 0; steps <= mesh.num_elements(); ++steps) {
    auto lambda = locator.barycentric(k)(p);
    if (locator.contains(k, lambda)) return Location{k, lambda};
    // Cross the edge opposite the most negative coordinate, avoiding an
    // immediate step back.
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
    int next = -1;
    for (int i : order) {
      if (lambda[i] >= 0.0) break;
      const int nb = mesh.neighbor(k, (i + 1) % 3);
      if (nb >= 0 && nb != previous) {
        next = nb;
        break;
      }
    }
    if (next < 0) return std::nullopt;
    previous = k;
    k = next;
  }
  return std::nullopt;
}

}  // namespace lgllv
