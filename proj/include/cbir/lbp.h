#pragma once

#include "cbir/image_io.h"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cbir {

using LbpCode = std::uint32_t;

/// Neighbor count P and radius R of a circular neighborhood.
/// 4 <= P <= 16 keeps the histogram at most 65536 bins; R >= 1.
class LbpParams {
public:
    LbpParams() = default;
    LbpParams(int neighbors, double radius);

    int neighbors() const noexcept { return neighbors_; }
    double radius() const noexcept { return radius_; }
    std::size_t bins() const noexcept { return std::size_t{1} << neighbors_; }
    /// Border width excluded from scans: ceil(R).
    int margin() const noexcept;
    bool is_classic() const noexcept { return neighbors_ == 8 && radius_ == 1.0; }

    friend bool operator==(const LbpParams&, const LbpParams&) = default;

private:
    int neighbors_ = 8;
    double radius_ = 1.0;
};

/// 3x3 intensity window in raster order; element 4 is the center.
using Window3x3 = std::array<std::uint8_t, 9>;

Window3x3 window_at(const GrayImage& image, int x, int y);

/// Classic 3x3 LBP. Neighbors >= center set their bit, weighted
///
///      8   4   2
///     16   .   1
///     32  64 128
LbpCode lbp_code_3x3(const Window3x3& window);

/// Circular LBP at (x, y). Sample i sits at angle 2*pi*i/P counter-clockwise
/// from (x + R, y) and carries weight 2^i. Off-grid samples are bilinearly
/// interpolated on gray differences to the center, so the code depends only
/// on g_i - g_c. For (8, 1) the bit weights coincide with lbp_code_3x3; the
/// diagonal samples are interpolated instead of read from the corners.
LbpCode lbp_code_circular(const GrayImage& image, int x, int y, const LbpParams& params);

/// Rotates a P-bit code right by `shift` positions.
LbpCode rotate_code(LbpCode code, int shift, int neighbors);

/// Minimum over all P circular bit rotations.
LbpCode rotation_invariant(LbpCode code, int neighbors);

/// Maps a lbp_code_3x3 value onto the raster bit order used by the GMLBP
/// pattern at the center position (neighbors in raster order weighted 2^0..2^7).
LbpCode classic_to_raster_order(LbpCode code);

/// One code per threshold position k (raster order). For code k, pixel k is the
/// threshold and the other eight pixels, in raster order skipping k, are
/// weighted 2^0..2^7.
std::array<LbpCode, 9> gmlbp_patterns(const Window3x3& window);

/// Histogram of codes. Unnormalized bins hold exact integer counts.
class LbpHistogram {
public:
    explicit LbpHistogram(std::size_t bins) : bins_(bins, 0.0) {}

    std::size_t size() const noexcept { return bins_.size(); }
    const std::vector<double>& bins() const noexcept { return bins_; }
    double operator[](std::size_t i) const { return bins_[i]; }
    bool normalized() const noexcept { return normalized_; }
    double total() const noexcept;

    void add(LbpCode code) { bins_[code] += 1.0; }
    void merge(const LbpHistogram& other);
    /// Returns the L1-normalized histogram. An empty histogram stays all zero.
    LbpHistogram normalized_copy() const;

    friend bool operator==(const LbpHistogram&, const LbpHistogram&) = default;

private:
    std::vector<double> bins_;
    bool normalized_ = false;
};

enum class LbpMode { Classic3x3, Circular, RotationInvariant };

/// Accumulates codes over every pixel whose neighborhood fits inside the
/// image. Classic mode ignores `params` and yields 256 bins; the other modes
/// yield 2^P bins.
LbpHistogram lbp_histogram(const GrayImage& image, LbpMode mode, const LbpParams& params = {});

/// Nine 256-bin histograms, histogram k accumulating gmlbp_patterns(...)[k]
/// over every interior pixel.
std::array<LbpHistogram, 9> gmlbp_histograms(const GrayImage& image);

}  // namespace cbir
