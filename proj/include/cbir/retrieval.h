#pragma once

#include "cbir/features.h"
#include "cbir/image_io.h"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbir {

/// d1 distance: sum_i |(t_i - q_i) / (1 + t_i + q_i)|.
///
/// A component whose denominator is exactly zero contributes 0 when t_i == q_i
/// and +inf otherwise. That only happens for negative (Hu) components.
double d1_distance(std::span<const double> q, std::span<const double> t);
/// Throws InvalidArgument on mode or dimension mismatch.
double d1_distance(const FeatureVector& q, const FeatureVector& t);

struct IndexEntry {
    std::string image_id;
    std::string group_label;
    FeatureVector features;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// Immutable database of descriptors sharing one mode, parameter set and
/// dimensionality. Ids are unique and free of tabs and line breaks.
class FeatureIndex {
public:
    FeatureIndex(FeatureMode mode, LbpParams params, std::vector<IndexEntry> entries);

    FeatureMode mode() const noexcept { return mode_; }
    const LbpParams& params() const noexcept { return params_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<IndexEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;

private:
    FeatureMode mode_;
    LbpParams params_;
    std::size_t dim_;
    std::vector<IndexEntry> entries_;
};

struct BuildOptions {
    ExtractOptions extract;
    /// Relative manifest paths are resolved against this directory.
    std::filesystem::path base_dir;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

/// One entry per manifest row, in manifest order. Any decode or extraction
/// failure is rethrown as BuildError naming the offending path.
FeatureIndex build_index(const DatasetManifest& manifest, FeatureMode mode, const BuildOptions& options = {});

struct RankedEntry {
    std::string image_id;
    std::string group_label;
    double distance = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

using RankedResult = std::vector<RankedEntry>;

/// Linear scan sorted by (distance, image_id), truncated to min(k, size).
/// When `self_id` names an indexed image, that image wins ties against every
/// other entry at the same distance; this is how a query image that belongs
/// to the database is guaranteed rank 1.
RankedResult query(const FeatureIndex& index, const FeatureVector& q, std::size_t k,
                   std::string_view self_id = {});

/// Text format:
///   CBIRIDX 1 <mode> <P> <R> <dim> <count>
///   <image_id>\t<group_label>\t<v1> ... <vdim>      (count lines)
///   END <count> <fnv1a-64 of all preceding bytes, 16 hex digits>
void save_index(const FeatureIndex& index, std::ostream& out);
std::string format_index(const FeatureIndex& index);
void save_index(const FeatureIndex& index, const std::filesystem::path& path);

/// Throws IndexFormatError (Version, Checksum or Malformed).
FeatureIndex parse_index(std::string_view text);
FeatureIndex load_index(std::istream& in);
FeatureIndex load_index(const std::filesystem::path& path);

}  // namespace cbir
