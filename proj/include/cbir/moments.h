#pragma once

#include "cbir/image_io.h"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cbir {

/// Central moments mu_pq for p + q <= 3, with intensity used as mass and
/// 0-based pixel indices as coordinates (x = column, y = row).
struct CentralMoments {
    std::array<std::array<double, 4>, 4> mu{};  // mu[p][q]; entries with p + q > 3 stay 0
    double centroid_x = 0.0;
    double centroid_y = 0.0;

    double mass() const noexcept { return mu[0][0]; }
    double operator()(int p, int q) const { return mu[p][q]; }
    /// eta_pq = mu_pq / mu00^(1 + (p+q)/2)
    double normalized(int p, int q) const;
};

/// Throws DegenerateImage for an all-zero image.
CentralMoments central_moments(const GrayImage& image);

/// The seven Hu invariants M1..M7.
struct HuVector {
    std::array<double, 7> m{};

    double operator[](std::size_t i) const { return m[i]; }
    friend bool operator==(const HuVector&, const HuVector&) = default;
};

HuVector hu_moments(const CentralMoments& moments);
HuVector hu_moments(const GrayImage& image);

/// Half-widths (w1, w2) of a (2*w1 + 1) x (2*w2 + 1) window.
struct MomentWindow {
    int half_width_x = 1;
    int half_width_y = 1;
};

/// Local moment M_mn evaluated on the interior pixels where the window fits.
/// Element (i, j) belongs to image pixel (i + w1, j + w2).
class MomentMap {
public:
    MomentMap(int order_m, int order_n, MomentWindow window, int width, int height);

    int order_m() const noexcept { return order_m_; }
    int order_n() const noexcept { return order_n_; }
    MomentWindow window() const noexcept { return window_; }
    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * width_ + i]; }
    double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * width_ + i]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    int order_m_;
    int order_n_;
    MomentWindow window_;
    int width_;
    int height_;
    std::vector<double> values_;
};

/// M_mn(x, y) = sum_{u=-w1..w1} sum_{v=-w2..w2} I(x+u, y+v) u^m v^n, m + n <= 3.
/// Computed separably: a horizontal pass with weights u^m, then a vertical
/// pass with weights v^n.
MomentMap local_moments(const GrayImage& image, int order_m, int order_n, MomentWindow window);

/// Binary edge grid aligned like a MomentMap (offset by the window half-widths).
struct EdgeMap {
    int width = 0;
    int height = 0;
    int offset_x = 0;
    int offset_y = 0;
    std::vector<std::uint8_t> edges;  // 1 = edge

    bool at(int i, int j) const { return edges[static_cast<std::size_t>(j) * width + i] != 0; }
    std::size_t count() const;
    /// 0 for background, 255 for edges.
    GrayImage to_image() const;
};

/// Edge where sqrt(M10^2 + M01^2) > threshold_factor * mean gradient.
EdgeMap moment_edge_map(const GrayImage& image, MomentWindow window, double threshold_factor = 1.0);

}  // namespace cbir
