#pragma once

// Panorama / perspective pixel containers and the projection operator
// between them. Pixel data is float32 in [0,1] for color; latent grids reuse
// the same containers with arbitrary channel counts.
//
// Pixel <-> continuous coordinates: texel centers sit at half-integer
// offsets. For an equirect image, column c has u = 2*(c+0.5)/W - 1 and row r
// has v = 1 - 2*(r+0.5)/H (row 0 is +z). Perspective images map x,y in
// [-1,1]^2 the same way, with y = +1 at row 0.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pano4d/geom.hpp"
#include "pano4d/threading.hpp"

namespace pano4d {

namespace detail {

struct PixelBuffer {
  int width = 0, height = 0, channels = 0;
  std::vector<float> data;  // row-major, interleaved channels

  PixelBuffer() = default;
  PixelBuffer(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || c <= 0) throw std::invalid_argument("image dims must be positive");
  }

  float* at(int x, int y) { return data.data() + (static_cast<std::size_t>(y) * width + x) * channels; }
  const float* at(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
  }
  bool same_dims(const PixelBuffer& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

}  // namespace detail

struct EquirectImage : detail::PixelBuffer {
  using PixelBuffer::PixelBuffer;
  bool is_panorama() const { return width == 2 * height; }
};

struct PerspectiveImage : detail::PixelBuffer {
  using PixelBuffer::PixelBuffer;
};

// List of equirect frames of equal dimensions.
struct PanoVideo {
  std::vector<EquirectImage> frames;

  int length() const { return static_cast<int>(frames.size()); }
  void validate() const {
    if (frames.empty()) throw std::invalid_argument("video must have at least one frame");
    for (const auto& f : frames)
      if (!f.same_dims(frames.front())) throw std::invalid_argument("video frames differ in dims");
  }
};

namespace detail {

// Bilinear read in continuous pixel coordinates; horizontal wrap, vertical
// clamp (equirect) or full clamp (perspective).
template <bool WrapX>
inline void bilinear_read(const PixelBuffer& img, double px, double py, float* out) {
  int x0 = static_cast<int>(std::floor(px));
  int y0 = static_cast<int>(std::floor(py));
  double fx = px - x0, fy = py - y0;
  int x1 = x0 + 1, y1 = y0 + 1;
  if constexpr (WrapX) {
    x0 = ((x0 % img.width) + img.width) % img.width;
    x1 = ((x1 % img.width) + img.width) % img.width;
  } else {
    x0 = std::clamp(x0, 0, img.width - 1);
    x1 = std::clamp(x1, 0, img.width - 1);
  }
  y0 = std::clamp(y0, 0, img.height - 1);
  y1 = std::clamp(y1, 0, img.height - 1);
  const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy);
  const double w01 = (1 - fx) * fy, w11 = fx * fy;
  const float* p00 = img.at(x0, y0);
  const float* p10 = img.at(x1, y0);
  const float* p01 = img.at(x0, y1);
  const float* p11 = img.at(x1, y1);
  for (int c = 0; c < img.channels; ++c)
    out[c] = static_cast<float>(w00 * p00[c] + w10 * p10[c] + w01 * p01[c] + w11 * p11[c]);
}

}  // namespace detail

// Continuous pixel coordinates of an equirect (u,v) position.
inline Vec2 equirect_pixel_coords(const EquirectImage& img, double u, double v) {
  return {(u + 1.0) * 0.5 * img.width - 0.5, (1.0 - v) * 0.5 * img.height - 0.5};
}

// Equirect (u,v) of a texel center.
inline Vec2 equirect_uv(const EquirectImage& img, int x, int y) {
  return {2.0 * (x + 0.5) / img.width - 1.0, 1.0 - 2.0 * (y + 0.5) / img.height};
}

inline void sample_equirect(const EquirectImage& img, const Direction& d, float* out) {
  Vec2 uv = dir_to_equirect(d);
  Vec2 p = equirect_pixel_coords(img, uv.x, uv.y);
  detail::bilinear_read<true>(img, p.x, p.y, out);
}

inline std::vector<float> sample_equirect(const EquirectImage& img, const Direction& d) {
  std::vector<float> out(img.channels);
  sample_equirect(img, d, out.data());
  return out;
}

inline void sample_perspective(const PerspectiveImage& img, double x, double y, float* out) {
  double px = (x + 1.0) * 0.5 * img.width - 0.5;
  double py = (1.0 - y) * 0.5 * img.height - 0.5;
  detail::bilinear_read<false>(img, px, py, out);
}

// gamma(I, u): pinhole projection of a panorama.
inline PerspectiveImage project_perspective(const EquirectImage& img, const Camera& cam) {
  PerspectiveImage out(cam.res_w, cam.res_h, img.channels);
  parallel_for(cam.res_h, [&](std::int64_t y) {
    double py = 1.0 - 2.0 * (y + 0.5) / cam.res_h;
    for (int x = 0; x < cam.res_w; ++x) {
      double px = 2.0 * (x + 0.5) / cam.res_w - 1.0;
      sample_equirect(img, camera_ray(cam, px, py), out.at(static_cast<int>(x), static_cast<int>(y)));
    }
  });
  return out;
}

// Weight-normalized inverse of project_perspective: every output texel is the
// average of bilinear reads from all views whose frustum contains its
// direction. The weight map carries per-texel coverage counts; uncovered
// texels are zero-filled with weight 0, except near the poles (|v| > 0.999)
// where texels inherit the nearest covered row of the same column.
struct SplatBackResult {
  EquirectImage image;
  EquirectImage weight;  // 1 channel
};

inline SplatBackResult splat_back(const std::vector<std::pair<const PerspectiveImage*, Camera>>& views,
                                  int out_w, int out_h) {
  if (views.empty()) throw std::invalid_argument("splat_back needs at least one view");
  int channels = views.front().first->channels;
  for (auto& [img, cam] : views) {
    if (img->channels != channels) throw std::invalid_argument("splat_back channel mismatch");
    (void)cam;
  }
  SplatBackResult r{EquirectImage(out_w, out_h, channels), EquirectImage(out_w, out_h, 1)};
  parallel_for(out_h, [&](std::int64_t y) {
    std::vector<float> tmp(channels);
    std::vector<double> acc(channels);
    for (int x = 0; x < out_w; ++x) {
      Vec2 uv = equirect_uv(r.image, x, static_cast<int>(y));
      Direction d = equirect_to_dir(uv.x, uv.y);
      std::fill(acc.begin(), acc.end(), 0.0);
      double w = 0.0;
      for (const auto& [img, cam] : views) {
        auto p = dir_to_pixel(cam, d);
        if (!p) continue;
        sample_perspective(*img, p->x, p->y, tmp.data());
        for (int c = 0; c < channels; ++c) acc[c] += tmp[c];
        w += 1.0;
      }
      float* out = r.image.at(x, static_cast<int>(y));
      if (w > 0.0)
        for (int c = 0; c < channels; ++c) out[c] = static_cast<float>(acc[c] / w);
      *r.weight.at(x, static_cast<int>(y)) = static_cast<float>(w);
    }
  });

  // Pole rows (|v| > 0.999) are geometrically degenerate; uncovered texels
  // there inherit the nearest covered row of the same column.
  auto row_v = [&](int y) { return 1.0 - 2.0 * (y + 0.5) / out_h; };
  for (int x = 0; x < out_w; ++x) {
    for (int y = 0; y < out_h; ++y) {
      if (std::abs(row_v(y)) <= 0.999 || *r.weight.at(x, y) != 0.0f) continue;
      int step = row_v(y) > 0 ? 1 : -1;  // scan toward the equator
      for (int src = y + step; src >= 0 && src < out_h; src += step) {
        if (*r.weight.at(x, src) == 0.0f) continue;
        for (int c = 0; c < channels; ++c) r.image.at(x, y)[c] = r.image.at(x, src)[c];
        *r.weight.at(x, y) = *r.weight.at(x, src);
        break;
      }
    }
  }
  return r;
}

// Bilinear resize (used by the latent codec and synthetic helpers).
template <typename Img>
inline Img resize_bilinear(const Img& src, int w, int h) {
  Img out(w, h, src.channels);
  parallel_for(h, [&](std::int64_t y) {
    double sy = (y + 0.5) * src.height / static_cast<double>(h) - 0.5;
    for (int x = 0; x < w; ++x) {
      double sx = (x + 0.5) * src.width / static_cast<double>(w) - 0.5;
      detail::bilinear_read<false>(src, sx, sy, out.at(x, static_cast<int>(y)));
    }
  });
  return out;
}

}  // namespace pano4d
