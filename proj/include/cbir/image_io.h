#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbir {

/// 8-bit grayscale raster, row-major, origin at the top-left corner.
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    std::uint8_t at(int x, int y) const noexcept {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t& at(int x, int y) noexcept {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<const std::uint8_t> row(int y) const noexcept {
        return std::span(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Crops the rectangle [x0, x0+width) x [y0, y0+height).
GrayImage crop(const GrayImage& image, int x0, int y0, int width, int height);

/// Decodes a PGM (P2/P5) or PPM (P3/P6) file with maxval <= 255.
///
/// Color pixels are reduced with Rec. 601 luma, rounded half up. Samples are
/// kept on their stored scale; maxval only bounds them. Throws ParseError.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

/// Binary P5 encoding with maxval 255.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

GrayImage read_image(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

struct ManifestEntry {
    std::string image_id;
    std::string path;
    std::string group_label;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Ordered list of labelled images. Ids are unique and labels non-empty.
class DatasetManifest {
public:
    DatasetManifest() = default;
    explicit DatasetManifest(std::vector<ManifestEntry> entries);

    const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Group label -> member count, ordered by label.
    std::map<std::string, std::size_t> group_sizes() const;

private:
    std::vector<ManifestEntry> entries_;
};

/// Parses `path,group_label[,image_id]` lines. Blank lines and lines starting
/// with '#' are skipped; LF and CRLF are both accepted. When no id is given it
/// is the file name without directory or extension.
DatasetManifest load_manifest(std::string_view text);

}  // namespace cbir
