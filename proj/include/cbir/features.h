#pragma once

#include "cbir/image_io.h"
#include "cbir/lbp.h"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbir {

enum class FeatureMode { Lbp, Gmlbp, Hu, Combined };

std::string_view to_string(FeatureMode mode);
/// Accepts "lbp", "gmlbp", "hu", "combined". Throws InvalidArgument otherwise.
FeatureMode parse_feature_mode(std::string_view name);

inline constexpr std::size_t kHuDim = 7;
inline constexpr std::size_t kGmlbpSegments = 9;

/// Dimensionality of a mode: 2^P, 9 * 256, 7, 9 * 256 + 7.
/// gmlbp and combined are defined on 3x3 windows and require P = 8, R = 1.
std::size_t feature_dim(FeatureMode mode, const LbpParams& params);

/// Whether `dim` is a possible dimensionality for `mode` under some valid P.
bool is_valid_dim(FeatureMode mode, std::size_t dim);

/// Flat descriptor tagged with its mode. Values are finite and histogram
/// parts are non-negative.
class FeatureVector {
public:
    FeatureVector(FeatureMode mode, std::vector<double> values);

    FeatureMode mode() const noexcept { return mode_; }
    std::size_t dim() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    FeatureMode mode_;
    std::vector<double> values_;
};

struct ExtractOptions {
    LbpParams params;
    /// Scale applied to the Hu segment in combined mode.
    double hu_weight = 1.0;
};

/// h -> sign(h) * log10(1 + |h| * 1e7).
double hu_log_compress(double h);

/// lbp: one L1-normalized histogram (classic 3x3 for P=8, R=1, circular otherwise).
/// gmlbp: nine L1-normalized GMLBP histograms in threshold-position order.
/// hu: log-compressed Hu invariants of the whole image.
/// combined: gmlbp followed by hu_weight * (log-compressed Hu invariants of the
/// interior that the GMLBP scan covers).
FeatureVector extract(const GrayImage& image, FeatureMode mode, const ExtractOptions& options = {});

/// `<mode> <dim> <v1> ... <vdim>`, shortest round-trip decimals, no newline.
std::string serialize(const FeatureVector& fv);
FeatureVector deserialize(std::string_view record);

}  // namespace cbir
