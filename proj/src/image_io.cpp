#include "cbir/image_io.h"

#include "cbir/error.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>

namespace cbir {

namespace {

constexpr int kMaxSide = 1 << 16;

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
        throw InvalidArgument("image dimensions must be in [1, 65536], got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Header and ASCII-raster tokenizer. '#' starts a comment running to end of line.
class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    // Returns nullopt at end of input; throws `bad` on a non-numeric token.
    std::optional<long> next_number(ParseErrorKind bad, const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) return std::nullopt;
        std::size_t end = pos_;
        while (end < bytes_.size() && !is_space(bytes_[end]) && bytes_[end] != '#') ++end;
        const char* first = reinterpret_cast<const char*>(bytes_.data() + pos_);
        const char* last = reinterpret_cast<const char*>(bytes_.data() + end);
        long value = 0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || value < 0) {
            throw ParseError(bad, std::string("invalid ") + what + " '" + std::string(first, last) + "'");
        }
        pos_ = end;
        return value;
    }

    long header_number(const char* what) {
        auto v = next_number(ParseErrorKind::MalformedHeader, what);
        if (!v) throw ParseError(ParseErrorKind::MalformedHeader, std::string("missing ") + what);
        return *v;
    }

    // Binary rasters start after exactly one whitespace byte following maxval.
    void expect_single_space() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError(ParseErrorKind::MalformedHeader, "missing whitespace after maxval");
        }
        ++pos_;
    }

    std::span<const std::uint8_t> remaining() const { return bytes_.subspan(pos_); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint8_t luma(unsigned r, unsigned g, unsigned b) {
    // round-half-up of 0.299 R + 0.587 G + 0.114 B in exact integer arithmetic
    return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    check_dimensions(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dimensions(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidArgument("pixel count " + std::to_string(pixels_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

GrayImage crop(const GrayImage& image, int x0, int y0, int width, int height) {
    if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > image.width() ||
        y0 + height > image.height()) {
        throw InvalidArgument("crop rectangle outside image");
    }
    std::vector<std::uint8_t> pixels;
    pixels.reserve(static_cast<std::size_t>(width) * height);
    for (int y = y0; y < y0 + height; ++y) {
        auto row = image.row(y).subspan(x0, width);
        pixels.insert(pixels.end(), row.begin(), row.end());
    }
    return GrayImage(width, height, std::move(pixels));
}

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw ParseError(ParseErrorKind::UnknownMagic, "not a PGM/PPM file");
    }
    const char kind = static_cast<char>(bytes[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
        throw ParseError(ParseErrorKind::UnknownMagic,
                         std::string("unsupported magic number P") + kind);
    }
    if (bytes.size() > 2 && !is_space(bytes[2]) && bytes[2] != '#') {
        throw ParseError(ParseErrorKind::UnknownMagic, "unsupported magic number");
    }
    const bool color = kind == '3' || kind == '6';
    const bool binary = kind == '5' || kind == '6';

    Reader reader(bytes.subspan(2));
    const long width = reader.header_number("width");
    const long height = reader.header_number("height");
    const long maxval = reader.header_number("maxval");
    if (width <= 0 || height <= 0 || width > kMaxSide || height > kMaxSide) {
        throw ParseError(ParseErrorKind::MalformedHeader,
                         "image dimensions out of range: " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
    if (maxval > 255) {
        throw ParseError(ParseErrorKind::UnsupportedMaxval,
                         "maxval " + std::to_string(maxval) + " exceeds 255 (16-bit samples are not supported)");
    }
    if (maxval < 1) throw ParseError(ParseErrorKind::MalformedHeader, "maxval must be positive");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t channels = color ? 3 : 1;
    std::vector<std::uint8_t> samples(count * channels);

    if (binary) {
        reader.expect_single_space();
        auto raster = reader.remaining();
        if (raster.size() < samples.size()) {
            throw ParseError(ParseErrorKind::TruncatedData,
                             "expected " + std::to_string(samples.size()) + " raster bytes, found " +
                                 std::to_string(raster.size()));
        }
        std::copy_n(raster.begin(), samples.size(), samples.begin());
    } else {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            auto v = reader.next_number(ParseErrorKind::InvalidSample, "sample");
            if (!v) {
                throw ParseError(ParseErrorKind::TruncatedData,
                                 "expected " + std::to_string(samples.size()) + " samples, found " +
                                     std::to_string(i));
            }
            if (*v > 255) throw ParseError(ParseErrorKind::InvalidSample, "sample exceeds maxval");
            samples[i] = static_cast<std::uint8_t>(*v);
        }
    }
    if (std::any_of(samples.begin(), samples.end(), [&](std::uint8_t s) { return s > maxval; })) {
        throw ParseError(ParseErrorKind::InvalidSample, "sample exceeds maxval");
    }

    if (!color) return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(samples));

    std::vector<std::uint8_t> gray(count);
    for (std::size_t i = 0; i < count; ++i) {
        gray[i] = luma(samples[3 * i], samples[3 * i + 1], samples[3 * i + 2]);
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(gray));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header =
        "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels().begin(), image.pixels().end());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

GrayImage read_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return decode_image(bytes);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    write_file(path, encode_pgm(image));
}

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string_view> ids;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.image_id.empty()) throw ManifestError(i + 1, "empty image id");
        if (e.group_label.empty()) throw ManifestError(i + 1, "empty group label");
        if (!ids.insert(e.image_id).second) throw ManifestError(i + 1, "duplicate image id '" + e.image_id + "'");
    }
}

std::map<std::string, std::size_t> DatasetManifest::group_sizes() const {
    std::map<std::string, std::size_t> sizes;
    for (const auto& e : entries_) ++sizes[e.group_label];
    return sizes;
}

DatasetManifest load_manifest(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<ManifestEntry> entries;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.ends_with('\r')) line.remove_suffix(1);

        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;

        std::vector<std::string> fields;
        std::string_view rest = trimmed;
        for (;;) {
            auto comma = rest.find(',');
            fields.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() < 2 || fields.size() > 3) {
            throw ManifestError(line_no, "expected 'path,group_label', got '" + trimmed + "'");
        }
        ManifestEntry entry;
        entry.path = fields[0];
        entry.group_label = fields[1];
        if (entry.path.empty()) throw ManifestError(line_no, "empty path");
        if (entry.group_label.empty()) throw ManifestError(line_no, "empty group label");
        entry.image_id = fields.size() == 3 ? fields[2] : std::filesystem::path(entry.path).stem().string();
        if (entry.image_id.empty()) throw ManifestError(line_no, "empty image id");
        if (!ids.insert(entry.image_id).second) {
            throw ManifestError(line_no, "duplicate image id '" + entry.image_id + "'");
        }
        entries.push_back(std::move(entry));
    }
    return DatasetManifest(std::move(entries));
}

}  // namespace cbir
