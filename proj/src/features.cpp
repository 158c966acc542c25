#include "cbir/features.h"

#include "cbir/error.h"
#include "cbir/moments.h"
#include "number_format.h"

#include <bit>
#include <cmath>

namespace cbir {

namespace {

constexpr std::size_t kGmlbpBins = 256;
constexpr std::size_t kGmlbpDim = kGmlbpSegments * kGmlbpBins;

void append_histogram(std::vector<double>& out, const LbpHistogram& hist) {
    const auto norm = hist.normalized_copy();
    out.insert(out.end(), norm.bins().begin(), norm.bins().end());
}

void append_hu(std::vector<double>& out, const GrayImage& image, double weight) {
    const HuVector hu = hu_moments(image);
    for (double h : hu.m) out.push_back(weight * hu_log_compress(h));
}

// Number of leading values that are histogram bins and must be non-negative.
std::size_t histogram_prefix(FeatureMode mode, std::size_t dim) {
    switch (mode) {
        case FeatureMode::Lbp:
        case FeatureMode::Gmlbp: return dim;
        case FeatureMode::Combined: return dim - kHuDim;
        case FeatureMode::Hu: return 0;
    }
    return 0;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) tokens.push_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace

std::string_view to_string(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::Lbp: return "lbp";
        case FeatureMode::Gmlbp: return "gmlbp";
        case FeatureMode::Hu: return "hu";
        case FeatureMode::Combined: return "combined";
    }
    return "?";
}

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "lbp") return FeatureMode::Lbp;
    if (name == "gmlbp") return FeatureMode::Gmlbp;
    if (name == "hu") return FeatureMode::Hu;
    if (name == "combined") return FeatureMode::Combined;
    throw InvalidArgument("unknown feature mode '" + std::string(name) + "'");
}

std::size_t feature_dim(FeatureMode mode, const LbpParams& params) {
    switch (mode) {
        case FeatureMode::Lbp: return params.bins();
        case FeatureMode::Hu: return kHuDim;
        case FeatureMode::Gmlbp:
        case FeatureMode::Combined:
            if (!params.is_classic()) {
                throw InvalidArgument(std::string(to_string(mode)) +
                                      " is defined on 3x3 windows and requires P = 8, R = 1");
            }
            return mode == FeatureMode::Gmlbp ? kGmlbpDim : kGmlbpDim + kHuDim;
    }
    return 0;
}

bool is_valid_dim(FeatureMode mode, std::size_t dim) {
    switch (mode) {
        case FeatureMode::Lbp: return std::has_single_bit(dim) && dim >= (1u << 4) && dim <= (1u << 16);
        case FeatureMode::Gmlbp: return dim == kGmlbpDim;
        case FeatureMode::Hu: return dim == kHuDim;
        case FeatureMode::Combined: return dim == kGmlbpDim + kHuDim;
    }
    return false;
}

FeatureVector::FeatureVector(FeatureMode mode, std::vector<double> values)
    : mode_(mode), values_(std::move(values)) {
    if (!is_valid_dim(mode_, values_.size())) {
        throw InvalidArgument("dimension " + std::to_string(values_.size()) + " is not valid for mode " +
                              std::string(to_string(mode_)));
    }
    const std::size_t hist = histogram_prefix(mode_, values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw InvalidArgument("feature value " + std::to_string(i) + " is not finite");
        if (i < hist && values_[i] < 0.0) {
            throw InvalidArgument("histogram feature value " + std::to_string(i) + " is negative");
        }
    }
}

double hu_log_compress(double h) {
    if (h == 0.0) return 0.0;
    return std::copysign(std::log10(1.0 + std::abs(h) * 1e7), h);
}

FeatureVector extract(const GrayImage& image, FeatureMode mode, const ExtractOptions& options) {
    const LbpParams& params = options.params;
    std::vector<double> values;
    values.reserve(feature_dim(mode, params));

    switch (mode) {
        case FeatureMode::Lbp:
            append_histogram(values, params.is_classic() ? lbp_histogram(image, LbpMode::Classic3x3)
                                                         : lbp_histogram(image, LbpMode::Circular, params));
            break;
        case FeatureMode::Gmlbp:
            for (const auto& h : gmlbp_histograms(image)) append_histogram(values, h);
            break;
        case FeatureMode::Hu:
            append_hu(values, image, 1.0);
            break;
        case FeatureMode::Combined: {
            if (!std::isfinite(options.hu_weight) || options.hu_weight < 0.0) {
                throw InvalidArgument("hu weight must be a non-negative finite number");
            }
            for (const auto& h : gmlbp_histograms(image)) append_histogram(values, h);
            const GrayImage interior = crop(image, 1, 1, image.width() - 2, image.height() - 2);
            append_hu(values, interior, options.hu_weight);
            break;
        }
    }
    return FeatureVector(mode, std::move(values));
}

std::string serialize(const FeatureVector& fv) {
    std::string out(to_string(fv.mode()));
    out += ' ';
    out += std::to_string(fv.dim());
    for (double v : fv.values()) {
        out += ' ';
        detail::append_double(out, v);
    }
    return out;
}

FeatureVector deserialize(std::string_view record) {
    while (!record.empty() && (record.back() == '\n' || record.back() == '\r')) record.remove_suffix(1);
    const auto tokens = split_spaces(record);
    if (tokens.size() < 2) throw FeatureFormatError("feature record needs '<mode> <dim> <values...>'");

    FeatureMode mode;
    try {
        mode = parse_feature_mode(tokens[0]);
    } catch (const InvalidArgument& e) {
        throw FeatureFormatError(e.what());
    }
    const auto dim = detail::parse_integer(tokens[1]);
    if (!dim || *dim <= 0) throw FeatureFormatError("invalid dimension '" + std::string(tokens[1]) + "'");
    if (static_cast<std::size_t>(*dim) != tokens.size() - 2) {
        throw FeatureFormatError("declared dimension " + std::to_string(*dim) + " but found " +
                                 std::to_string(tokens.size() - 2) + " values");
    }
    if (!is_valid_dim(mode, static_cast<std::size_t>(*dim))) {
        throw FeatureFormatError("dimension " + std::to_string(*dim) + " does not match mode " +
                                 std::string(tokens[0]));
    }

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(*dim));
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        const auto v = detail::parse_double(tokens[i]);
        if (!v) throw FeatureFormatError("invalid value '" + std::string(tokens[i]) + "'");
        if (!std::isfinite(*v)) throw FeatureFormatError("non-finite value '" + std::string(tokens[i]) + "'");
        values.push_back(*v);
    }
    try {
        return FeatureVector(mode, std::move(values));
    } catch (const InvalidArgument& e) {
        throw FeatureFormatError(e.what());
    }
}

}  // namespace cbir
