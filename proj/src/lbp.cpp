#include "cbir/lbp.h"

#include "cbir/error.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace cbir {

namespace {

// Offsets closer than this to a grid line are snapped onto it.
constexpr double kSnapTolerance = 1e-9;
// Interpolated differences within this of zero count as ties (f(0) = 1).
constexpr double kTieTolerance = 1e-9;

// Bit weight of each raster position in the classic 3x3 operator (center unused).
constexpr std::array<LbpCode, 9> kClassicWeights = {8, 4, 2, 16, 0, 1, 32, 64, 128};

struct CircularSample {
    int dx = 0;  // floor of the x offset
    int dy = 0;  // floor of the y offset
    double fx = 0.0;
    double fy = 0.0;
};

double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < kSnapTolerance ? r : v;
}

std::vector<CircularSample> sampling_pattern(const LbpParams& params) {
    std::vector<CircularSample> samples(params.neighbors());
    for (int i = 0; i < params.neighbors(); ++i) {
        const double angle = 2.0 * std::numbers::pi * i / params.neighbors();
        // Image rows grow downwards, so counter-clockwise means y - R sin.
        const double ox = snap(params.radius() * std::cos(angle));
        const double oy = snap(-params.radius() * std::sin(angle));
        auto& s = samples[i];
        s.dx = static_cast<int>(std::floor(ox));
        s.dy = static_cast<int>(std::floor(oy));
        s.fx = ox - s.dx;
        s.fy = oy - s.dy;
    }
    return samples;
}

// Bilinear interpolation of (I - center) at one sample. Corners with zero
// weight are never read, so integer offsets may touch the image border.
double interpolated_difference(const GrayImage& image, int x, int y, const CircularSample& s) {
    const int x0 = x + s.dx;
    const int y0 = y + s.dy;
    const double center = image.at(x, y);
    auto d = [&](int px, int py) { return static_cast<double>(image.at(px, py)) - center; };

    double top = d(x0, y0);
    if (s.fx > 0.0) top = top * (1.0 - s.fx) + d(x0 + 1, y0) * s.fx;
    if (s.fy == 0.0) return top;
    double bottom = d(x0, y0 + 1);
    if (s.fx > 0.0) bottom = bottom * (1.0 - s.fx) + d(x0 + 1, y0 + 1) * s.fx;
    return top * (1.0 - s.fy) + bottom * s.fy;
}

LbpCode circular_code(const GrayImage& image, int x, int y, const std::vector<CircularSample>& pattern) {
    LbpCode code = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (interpolated_difference(image, x, y, pattern[i]) >= -kTieTolerance) code |= LbpCode{1} << i;
    }
    return code;
}

void require_size(const GrayImage& image, int margin, const char* what) {
    const int needed = 2 * margin + 1;
    if (image.width() < needed || image.height() < needed) {
        throw ImageTooSmall(std::string(what) + " needs at least " + std::to_string(needed) + "x" +
                            std::to_string(needed) + " pixels, got " + std::to_string(image.width()) +
                            "x" + std::to_string(image.height()));
    }
}

}  // namespace

LbpParams::LbpParams(int neighbors, double radius) : neighbors_(neighbors), radius_(radius) {
    if (neighbors < 4 || neighbors > 16) {
        throw InvalidArgument("LBP neighbor count must be in [4, 16], got " + std::to_string(neighbors));
    }
    if (!std::isfinite(radius) || radius < 1.0) {
        throw InvalidArgument("LBP radius must be >= 1, got " + std::to_string(radius));
    }
}

int LbpParams::margin() const noexcept {
    return static_cast<int>(std::ceil(radius_ - kSnapTolerance));
}

Window3x3 window_at(const GrayImage& image, int x, int y) {
    Window3x3 w{};
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) w[(dy + 1) * 3 + (dx + 1)] = image.at(x + dx, y + dy);
    }
    return w;
}

LbpCode lbp_code_3x3(const Window3x3& window) {
    const std::uint8_t center = window[4];
    LbpCode code = 0;
    for (std::size_t k = 0; k < 9; ++k) {
        if (k != 4 && window[k] >= center) code |= kClassicWeights[k];
    }
    return code;
}

LbpCode lbp_code_circular(const GrayImage& image, int x, int y, const LbpParams& params) {
    const int m = params.margin();
    if (x - m < 0 || y - m < 0 || x + m >= image.width() || y + m >= image.height()) {
        throw InvalidArgument("circular neighborhood of radius " + std::to_string(params.radius()) +
                              " around (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") leaves the image");
    }
    return circular_code(image, x, y, sampling_pattern(params));
}

LbpCode rotate_code(LbpCode code, int shift, int neighbors) {
    const LbpCode mask = (LbpCode{1} << neighbors) - 1;
    shift = ((shift % neighbors) + neighbors) % neighbors;
    code &= mask;
    if (shift == 0) return code;
    return ((code >> shift) | (code << (neighbors - shift))) & mask;
}

LbpCode rotation_invariant(LbpCode code, int neighbors) {
    LbpCode best = code;
    for (int s = 1; s < neighbors; ++s) best = std::min(best, rotate_code(code, s, neighbors));
    return best;
}

LbpCode classic_to_raster_order(LbpCode code) {
    LbpCode out = 0;
    int raster_bit = 0;
    for (std::size_t k = 0; k < 9; ++k) {
        if (k == 4) continue;
        if (code & kClassicWeights[k]) out |= LbpCode{1} << raster_bit;
        ++raster_bit;
    }
    return out;
}

std::array<LbpCode, 9> gmlbp_patterns(const Window3x3& window) {
    std::array<LbpCode, 9> codes{};
    for (std::size_t k = 0; k < 9; ++k) {
        const std::uint8_t threshold = window[k];
        LbpCode code = 0;
        int bit = 0;
        for (std::size_t j = 0; j < 9; ++j) {
            if (j == k) continue;
            if (window[j] >= threshold) code |= LbpCode{1} << bit;
            ++bit;
        }
        codes[k] = code;
    }
    return codes;
}

double LbpHistogram::total() const noexcept {
    return std::accumulate(bins_.begin(), bins_.end(), 0.0);
}

void LbpHistogram::merge(const LbpHistogram& other) {
    if (other.size() != size() || other.normalized_ || normalized_) {
        throw InvalidArgument("can only merge unnormalized histograms of equal size");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i] += other.bins_[i];
}

LbpHistogram LbpHistogram::normalized_copy() const {
    LbpHistogram out = *this;
    out.normalized_ = true;
    const double sum = total();
    if (sum > 0.0) {
        for (double& b : out.bins_) b /= sum;
    }
    return out;
}

LbpHistogram lbp_histogram(const GrayImage& image, LbpMode mode, const LbpParams& params) {
    if (mode == LbpMode::Classic3x3) {
        require_size(image, 1, "classic LBP");
        LbpHistogram hist(256);
        for (int y = 1; y + 1 < image.height(); ++y) {
            for (int x = 1; x + 1 < image.width(); ++x) hist.add(lbp_code_3x3(window_at(image, x, y)));
        }
        return hist;
    }

    const int m = params.margin();
    require_size(image, m, "circular LBP");
    const auto pattern = sampling_pattern(params);
    const int p = params.neighbors();
    LbpHistogram hist(params.bins());
    for (int y = m; y + m < image.height(); ++y) {
        for (int x = m; x + m < image.width(); ++x) {
            LbpCode code = circular_code(image, x, y, pattern);
            if (mode == LbpMode::RotationInvariant) code = rotation_invariant(code, p);
            hist.add(code);
        }
    }
    return hist;
}

std::array<LbpHistogram, 9> gmlbp_histograms(const GrayImage& image) {
    require_size(image, 1, "GMLBP");
    std::array<LbpHistogram, 9> hists = {
        LbpHistogram(256), LbpHistogram(256), LbpHistogram(256), LbpHistogram(256), LbpHistogram(256),
        LbpHistogram(256), LbpHistogram(256), LbpHistogram(256), LbpHistogram(256),
    };
    for (int y = 1; y + 1 < image.height(); ++y) {
        for (int x = 1; x + 1 < image.width(); ++x) {
            const auto codes = gmlbp_patterns(window_at(image, x, y));
            for (std::size_t k = 0; k < 9; ++k) hists[k].add(codes[k]);
        }
    }
    return hists;
}

}  // namespace cbir
