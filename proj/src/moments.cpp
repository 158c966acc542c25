#include "cbir/moments.h"

#include "cbir/error.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbir {

namespace {

void check_window(const GrayImage& image, int order_m, int order_n, MomentWindow window) {
    if (order_m < 0 || order_n < 0 || order_m + order_n > 3) {
        throw InvalidArgument("local moment order must satisfy m, n >= 0 and m + n <= 3");
    }
    if (window.half_width_x < 0 || window.half_width_y < 0) {
        throw InvalidArgument("window half-widths must be non-negative");
    }
    if (image.width() < 2 * window.half_width_x + 1 || image.height() < 2 * window.half_width_y + 1) {
        throw ImageTooSmall("window " + std::to_string(2 * window.half_width_x + 1) + "x" +
                            std::to_string(2 * window.half_width_y + 1) + " larger than image " +
                            std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }
}

double ipow(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

double CentralMoments::normalized(int p, int q) const {
    return mu[p][q] / std::pow(mu[0][0], 1.0 + (p + q) / 2.0);
}

CentralMoments central_moments(const GrayImage& image) {
    // Third-order moments can be tiny differences of large terms, so both
    // passes accumulate in extended precision.
    using Acc = long double;
    Acc m00 = 0.0L;
    Acc m10 = 0.0L;
    Acc m01 = 0.0L;
    for (int y = 0; y < image.height(); ++y) {
        Acc row_mass = 0.0L;
        Acc row_x = 0.0L;
        for (int x = 0; x < image.width(); ++x) {
            const Acc v = image.at(x, y);
            row_mass += v;
            row_x += v * x;
        }
        m00 += row_mass;
        m10 += row_x;
        m01 += row_mass * y;
    }
    if (m00 <= 0.0L) throw DegenerateImage("image has zero total intensity; centroid undefined");

    const Acc cx = m10 / m00;
    const Acc cy = m01 / m00;
    CentralMoments out;
    out.centroid_x = static_cast<double>(cx);
    out.centroid_y = static_cast<double>(cy);

    // Second pass around the centroid: per-row sums of I * dx^p, then weighted by dy^q.
    Acc mu[4][4] = {};
    for (int y = 0; y < image.height(); ++y) {
        std::array<Acc, 4> row{};
        for (int x = 0; x < image.width(); ++x) {
            const Acc v = image.at(x, y);
            if (v == 0.0L) continue;
            const Acc dx = x - cx;
            row[0] += v;
            row[1] += v * dx;
            row[2] += v * dx * dx;
            row[3] += v * dx * dx * dx;
        }
        const Acc dy = y - cy;
        const std::array<Acc, 4> dyq = {1.0L, dy, dy * dy, dy * dy * dy};
        for (int p = 0; p <= 3; ++p) {
            for (int q = 0; p + q <= 3; ++q) mu[p][q] += row[p] * dyq[q];
        }
    }
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; p + q <= 3; ++q) out.mu[p][q] = static_cast<double>(mu[p][q]);
    }
    return out;
}

HuVector hu_moments(const CentralMoments& c) {
    const double n20 = c.normalized(2, 0);
    const double n02 = c.normalized(0, 2);
    const double n11 = c.normalized(1, 1);
    const double n30 = c.normalized(3, 0);
    const double n03 = c.normalized(0, 3);
    const double n21 = c.normalized(2, 1);
    const double n12 = c.normalized(1, 2);

    const double a = n30 + n12;
    const double b = n21 + n03;
    const double s = n30 - 3.0 * n12;
    const double t = 3.0 * n21 - n03;

    HuVector hu;
    hu.m[0] = n20 + n02;
    hu.m[1] = (n20 - n02) * (n20 - n02) + 4.0 * n11 * n11;
    hu.m[2] = s * s + t * t;
    hu.m[3] = a * a + b * b;
    hu.m[4] = s * a * (a * a - 3.0 * b * b) + t * b * (3.0 * a * a - b * b);
    hu.m[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    hu.m[6] = t * a * (a * a - 3.0 * b * b) - s * b * (3.0 * a * a - b * b);
    return hu;
}

HuVector hu_moments(const GrayImage& image) { return hu_moments(central_moments(image)); }

MomentMap::MomentMap(int order_m, int order_n, MomentWindow window, int width, int height)
    : order_m_(order_m), order_n_(order_n), window_(window), width_(width), height_(height),
      values_(static_cast<std::size_t>(width) * height, 0.0) {}

MomentMap local_moments(const GrayImage& image, int order_m, int order_n, MomentWindow window) {
    check_window(image, order_m, order_n, window);
    const int w1 = window.half_width_x;
    const int w2 = window.half_width_y;
    const int out_w = image.width() - 2 * w1;
    const int out_h = image.height() - 2 * w2;

    std::vector<double> weight_u(2 * w1 + 1);
    for (int u = -w1; u <= w1; ++u) weight_u[u + w1] = ipow(u, order_m);
    std::vector<double> weight_v(2 * w2 + 1);
    for (int v = -w2; v <= w2; ++v) weight_v[v + w2] = ipow(v, order_n);

    // Horizontal pass over every row: H(i, y) = sum_u u^m I(i + w1 + u, y).
    std::vector<double> horizontal(static_cast<std::size_t>(out_w) * image.height(), 0.0);
    for (int y = 0; y < image.height(); ++y) {
        const auto row = image.row(y);
        double* dst = horizontal.data() + static_cast<std::size_t>(y) * out_w;
        if (order_m == 0) {
            // Running box sum.
            double sum = 0.0;
            for (int x = 0; x < 2 * w1 + 1; ++x) sum += row[x];
            dst[0] = sum;
            for (int i = 1; i < out_w; ++i) {
                sum += static_cast<double>(row[i + 2 * w1]) - row[i - 1];
                dst[i] = sum;
            }
        } else {
            for (int i = 0; i < out_w; ++i) {
                double sum = 0.0;
                for (int k = 0; k <= 2 * w1; ++k) sum += weight_u[k] * row[i + k];
                dst[i] = sum;
            }
        }
    }

    MomentMap out(order_m, order_n, window, out_w, out_h);
    for (int j = 0; j < out_h; ++j) {
        for (int k = 0; k <= 2 * w2; ++k) {
            const double wv = weight_v[k];
            if (wv == 0.0) continue;
            const double* src = horizontal.data() + static_cast<std::size_t>(j + k) * out_w;
            for (int i = 0; i < out_w; ++i) out.at(i, j) += wv * src[i];
        }
    }
    return out;
}

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(edges.begin(), edges.end(), std::uint8_t{1}));
}

GrayImage EdgeMap::to_image() const {
    std::vector<std::uint8_t> pixels(edges.size());
    std::transform(edges.begin(), edges.end(), pixels.begin(),
                   [](std::uint8_t e) { return e ? std::uint8_t{255} : std::uint8_t{0}; });
    return GrayImage(width, height, std::move(pixels));
}

EdgeMap moment_edge_map(const GrayImage& image, MomentWindow window, double threshold_factor) {
    if (!std::isfinite(threshold_factor) || threshold_factor < 0.0) {
        throw InvalidArgument("threshold factor must be a non-negative finite number");
    }
    const MomentMap mx = local_moments(image, 1, 0, window);
    const MomentMap my = local_moments(image, 0, 1, window);

    std::vector<double> gradient(mx.values().size());
    double sum = 0.0;
    for (std::size_t i = 0; i < gradient.size(); ++i) {
        gradient[i] = std::hypot(mx.values()[i], my.values()[i]);
        sum += gradient[i];
    }
    const double threshold = threshold_factor * (sum / static_cast<double>(gradient.size()));

    EdgeMap out;
    out.width = mx.width();
    out.height = mx.height();
    out.offset_x = window.half_width_x;
    out.offset_y = window.half_width_y;
    out.edges.resize(gradient.size());
    for (std::size_t i = 0; i < gradient.size(); ++i) out.edges[i] = gradient[i] > threshold ? 1 : 0;
    return out;
}

}  // namespace cbir
