#include "ctseg/regions.hpp"

namespace ctseg {

ComponentLabels label_nonzero_components_8(const Raster& img) {
  const int h = img.height();
  const int w = img.width();
  ComponentLabels out;
  out.labels.assign(img.size(), 0);

  std::vector<int> stack;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (img(r, c) == 0 || out.labels[static_cast<std::size_t>(r) * w + c] != 0) continue;
      const std::int32_t label = ++out.count;
      out.labels[static_cast<std::size_t>(r) * w + c] = label;
      stack.push_back(r * w + c);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int pr = idx / w;
        const int pc = idx % w;
        for (int nr = pr - 1; nr <= pr + 1; ++nr) {
          for (int nc = pc - 1; nc <= pc + 1; ++nc) {
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            const std::size_t ni = static_cast<std::size_t>(nr) * w + nc;
            if (img(nr, nc) == 0 || out.labels[ni] != 0) continue;
            out.labels[ni] = label;
            stack.push_back(nr * w + nc);
          }
        }
      }
    }
  }
  return out;
}

Raster flood_zero_from_border_4(const Raster& img) {
  const int h = img.height();
  const int w = img.width();
  Raster reached(w, h, 0);

  std::vector<int> stack;
  auto push = [&](int r, int c) {
    if (img(r, c) == 0 && reached(r, c) == 0) {
      reached(r, c) = 1;
      stack.push_back(r * w + c);
    }
  };
  for (int c = 0; c < w; ++c) {
    push(0, c);
    push(h - 1, c);
  }
  for (int r = 0; r < h; ++r) {
    push(r, 0);
    push(r, w - 1);
  }

  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int r = idx / w;
    const int c = idx % w;
    if (r > 0) push(r - 1, c);
    if (r + 1 < h) push(r + 1, c);
    if (c > 0) push(r, c - 1);
    if (c + 1 < w) push(r, c + 1);
  }
  return reached;
}

}  // namespace ctseg
