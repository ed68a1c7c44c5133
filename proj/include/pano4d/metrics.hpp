#pragma once

// Non-neural quality metrics: PSNR, SSIM (11x11 Gaussian window, sigma 1.5,
// K1 = 0.01, K2 = 0.03 on unit dynamic range), temporal flicker and
// cross-view overlap consistency. SSIM also exposes its analytic gradient,
// which the lifting loss needs.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pano4d/image.hpp"

namespace pano4d {

constexpr double kPsnrCap = 99.0;

template <typename Img>
inline double psnr(const Img& a, const Img& b) {
  if (!a.same_dims(b)) throw std::invalid_argument("psnr: dimension mismatch");
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = static_cast<double>(a.data[i]) - b.data[i];
    se += d * d;
  }
  double mse = se / a.data.size();
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

namespace detail {

inline const std::vector<double>& ssim_kernel() {
  static const std::vector<double> k = [] {
    std::vector<double> v(11);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
      double d = i - 5.0;
      v[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
      sum += v[i];
    }
    for (auto& x : v) x /= sum;
    return v;
  }();
  return k;
}

// Valid-region separable convolution of a single-channel double image.
inline std::vector<double> conv_valid(const std::vector<double>& in, int w, int h, int& ow,
                                      int& oh) {
  const auto& k = ssim_kernel();
  ow = w - 10;
  oh = h - 10;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < 11; ++i) s += k[i] * in[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < 11; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

// Transpose of conv_valid: scatters a valid-grid field back to the full grid.
inline void conv_valid_transpose(const std::vector<double>& g, int ow, int oh,
                                 std::vector<double>& out, int w, int h) {
  const auto& k = ssim_kernel();
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double v = g[static_cast<std::size_t>(y) * ow + x];
      if (v == 0.0) continue;
      for (int i = 0; i < 11; ++i) tmp[static_cast<std::size_t>(y + i) * ow + x] += k[i] * v;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double v = tmp[static_cast<std::size_t>(y) * ow + x];
      if (v == 0.0) continue;
      for (int i = 0; i < 11; ++i) out[static_cast<std::size_t>(y) * w + x + i] += k[i] * v;
    }
}

}  // namespace detail

// Mean SSIM over valid window positions and channels. If grad_a is non-null
// it receives d(mean SSIM)/d(a) with the same layout as a.data.
template <typename Img>
inline double ssim(const Img& a, const Img& b, std::vector<double>* grad_a = nullptr) {
  if (!a.same_dims(b)) throw std::invalid_argument("ssim: dimension mismatch");
  if (a.width < 11 || a.height < 11) throw std::invalid_argument("ssim: image smaller than window");
  constexpr double C1 = 0.01 * 0.01, C2 = 0.03 * 0.03;
  const int w = a.width, h = a.height, nc = a.channels;
  if (grad_a) grad_a->assign(a.data.size(), 0.0);

  double total = 0.0;
  std::vector<double> x(static_cast<std::size_t>(w) * h), y(x.size()), xx(x.size()), yy(x.size()),
      xy(x.size());
  for (int c = 0; c < nc; ++c) {
    for (int p = 0; p < w * h; ++p) {
      double xv = a.data[static_cast<std::size_t>(p) * nc + c];
      double yv = b.data[static_cast<std::size_t>(p) * nc + c];
      x[p] = xv;
      y[p] = yv;
      xx[p] = xv * xv;
      yy[p] = yv * yv;
      xy[p] = xv * yv;
    }
    int ow, oh;
    auto mx = detail::conv_valid(x, w, h, ow, oh);
    auto my = detail::conv_valid(y, w, h, ow, oh);
    auto mxx = detail::conv_valid(xx, w, h, ow, oh);
    auto myy = detail::conv_valid(yy, w, h, ow, oh);
    auto mxy = detail::conv_valid(xy, w, h, ow, oh);
    const std::size_t n = mx.size();
    const double inv_n = 1.0 / (static_cast<double>(n) * nc);

    std::vector<double> gmu, gsx, gsxy;
    if (grad_a) {
      gmu.assign(n, 0.0);
      gsx.assign(n, 0.0);
      gsxy.assign(n, 0.0);
    }
    for (std::size_t p = 0; p < n; ++p) {
      double sx = mxx[p] - mx[p] * mx[p];
      double sy = myy[p] - my[p] * my[p];
      double sxy = mxy[p] - mx[p] * my[p];
      double a1 = 2.0 * mx[p] * my[p] + C1;
      double a2 = 2.0 * sxy + C2;
      double b1 = mx[p] * mx[p] + my[p] * my[p] + C1;
      double b2 = sx + sy + C2;
      double s = (a1 * a2) / (b1 * b2);
      total += s * inv_n;
      if (grad_a) {
        gmu[p] = inv_n * 2.0 * (my[p] * a2 * b1 - mx[p] * a1 * a2) / (b1 * b1 * b2);
        gsx[p] = inv_n * (-s / b2);
        gsxy[p] = inv_n * 2.0 * a1 / (b1 * b2);
      }
    }
    if (grad_a) {
      // mu path: conv^T(gmu). sigma_x^2 path: 2x conv^T(gsx) - 2 conv^T(gsx*mu_x).
      // sigma_xy path: y conv^T(gsxy) - conv^T(gsxy*mu_y).
      std::vector<double> t1(x.size(), 0.0), t2(x.size(), 0.0), t3(x.size(), 0.0);
      std::vector<double> gsx_mx(n), gsxy_my(n), mix(n);
      for (std::size_t p = 0; p < n; ++p) {
        gsx_mx[p] = gsx[p] * mx[p];
        gsxy_my[p] = gsxy[p] * my[p];
        mix[p] = gmu[p] - 2.0 * gsx_mx[p] - gsxy_my[p];
      }
      detail::conv_valid_transpose(mix, ow, oh, t1, w, h);
      detail::conv_valid_transpose(gsx, ow, oh, t2, w, h);
      detail::conv_valid_transpose(gsxy, ow, oh, t3, w, h);
      for (int p = 0; p < w * h; ++p)
        (*grad_a)[static_cast<std::size_t>(p) * nc + c] +=
            t1[p] + 2.0 * x[p] * t2[p] + y[p] * t3[p];
    }
  }
  return total;
}

// Mean absolute difference between consecutive frames.
template <typename Img>
inline double flicker(const std::vector<Img>& frames) {
  if (frames.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < frames.size(); ++t) {
    if (!frames[t].same_dims(frames[t + 1]))
      throw std::invalid_argument("flicker: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < frames[t].data.size(); ++i)
      s += std::abs(static_cast<double>(frames[t + 1].data[i]) - frames[t].data[i]);
    acc += s / frames[t].data.size();
  }
  return acc / (frames.size() - 1);
}

// RMS disagreement between overlapping perspective videos. For each view
// pair, pixels of one view that land in the other's frustum are compared
// against a bilinear read; both directions are pooled per pair.
struct OverlapReport {
  std::map<std::string, double> pair_rms;  // "i-j" -> RMS
  double mean_rms = 0.0;
  double max_rms = 0.0;
};

inline OverlapReport overlap_consistency(const std::vector<std::vector<PerspectiveImage>>& videos,
                                         const std::vector<Camera>& cams) {
  if (videos.size() != cams.size()) throw std::invalid_argument("overlap: views/cams mismatch");
  const int nviews = static_cast<int>(videos.size());
  OverlapReport rep;
  double sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < nviews; ++i)
    for (int j = i + 1; j < nviews; ++j) {
      double se = 0.0;
      std::size_t count = 0;
      for (auto [src, dst] : {std::pair{i, j}, std::pair{j, i}}) {
        for (std::size_t t = 0; t < videos[src].size(); ++t) {
          const auto& a = videos[src][t];
          const auto& bimg = videos[dst][t];
          std::vector<float> tmp(a.channels);
          for (int y = 0; y < a.height; ++y) {
            double ny = 1.0 - 2.0 * (y + 0.5) / a.height;
            for (int x = 0; x < a.width; ++x) {
              double nx = 2.0 * (x + 0.5) / a.width - 1.0;
              auto p = dir_to_pixel(cams[dst], camera_ray(cams[src], nx, ny));
              if (!p) continue;
              sample_perspective(bimg, p->x, p->y, tmp.data());
              for (int c = 0; c < a.channels; ++c) {
                double d = static_cast<double>(a.at(x, y)[c]) - tmp[c];
                se += d * d;
              }
              count += a.channels;
            }
          }
        }
      }
      if (count == 0) continue;
      double rms = std::sqrt(se / count);
      rep.pair_rms[std::to_string(i) + "-" + std::to_string(j)] = rms;
      rep.max_rms = std::max(rep.max_rms, rms);
      sum += rms;
      ++pairs;
    }
  rep.mean_rms = pairs > 0 ? sum / pairs : 0.0;
  return rep;
}

struct MetricsReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double flicker = 0.0;
  OverlapReport overlap;
};

}  // namespace pano4d
