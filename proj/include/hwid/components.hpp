#pragma once

#include <numeric>
#include <vector>

#include "hwid/image.hpp"

namespace hwid {

enum class Connectivity { Four, Eight };

struct Component {
  int label = 0;
  std::size_t area = 0;
  BoundingBox bbox;
  double centroid_x = 0.0;
  double centroid_y = 0.0;

  friend bool operator==(const Component&, const Component&) = default;
};

/// Per-pixel labels (0 = background) plus the component table.
struct Labeling {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<Component> components;

  int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

class DisjointSet {
 public:
  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::size_t size() const { return parent_.size(); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/**
 * Two-pass labeling. Final labels are 1..K in raster order of each
 * component's first pixel.
 */
inline Labeling label_image(const BinaryImage& img, Connectivity conn = Connectivity::Eight) {
  const int w = img.width();
  const int h = img.height();
  Labeling out;
  out.width = w;
  out.height = h;
  out.labels.assign(img.size(), 0);

  detail::DisjointSet sets;
  sets.add();  // provisional label 0 is background
  auto provisional = [&](int x, int y) -> int& {
    return out.labels[static_cast<std::size_t>(y) * w + x];
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.foreground(x, y)) continue;
      int label = 0;
      auto visit = [&](int nx, int ny) {
        if (nx < 0 || nx >= w || ny < 0) return;
        const int l = provisional(nx, ny);
        if (l == 0) return;
        if (label == 0) {
          label = l;
        } else {
          sets.unite(label, l);
        }
      };
      visit(x - 1, y);
      visit(x, y - 1);
      if (conn == Connectivity::Eight) {
        visit(x - 1, y - 1);
        visit(x + 1, y - 1);
      }
      provisional(x, y) = label != 0 ? label : sets.add();
    }
  }

  std::vector<int> final_label(sets.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int& l = provisional(x, y);
      if (l == 0) continue;
      const int root = sets.find(l);
      if (final_label[root] == 0) {
        final_label[root] = static_cast<int>(out.components.size()) + 1;
        Component c;
        c.label = final_label[root];
        c.bbox = {x, y, x, y};
        out.components.push_back(c);
      }
      l = final_label[root];
      Component& c = out.components[l - 1];
      ++c.area;
      c.bbox = c.bbox.united({x, y, x, y});
      c.centroid_x += x;
      c.centroid_y += y;
    }
  }
  for (auto& c : out.components) {
    c.centroid_x /= static_cast<double>(c.area);
    c.centroid_y /= static_cast<double>(c.area);
  }
  return out;
}

inline std::vector<Component> label_components(const BinaryImage& img,
                                               Connectivity conn = Connectivity::Eight) {
  return label_image(img, conn).components;
}

}  // namespace hwid
