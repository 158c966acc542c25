#pragma once

// Deterministic synthetic images and datasets for tests.

#include "cbir/image_io.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

namespace synth {

namespace fs = std::filesystem;

inline cbir::GrayImage random_image(int w, int h, std::mt19937& rng, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    for (auto& p : px) p = static_cast<std::uint8_t>(dist(rng));
    return cbir::GrayImage(w, h, std::move(px));
}

/// 90 degrees clockwise.
inline cbir::GrayImage rotate90(const cbir::GrayImage& img) {
    cbir::GrayImage out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(img.height() - 1 - y, x) = img.at(x, y);
    return out;
}

inline cbir::GrayImage flip_horizontal(const cbir::GrayImage& img) {
    cbir::GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(img.width() - 1 - x, y) = img.at(x, y);
    return out;
}

inline cbir::GrayImage zero_pad(const cbir::GrayImage& img, int left, int top, int right, int bottom) {
    cbir::GrayImage out(img.width() + left + right, img.height() + top + bottom, 0);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(x + left, y + top) = img.at(x, y);
    return out;
}

inline cbir::GrayImage add_constant(const cbir::GrayImage& img, int c) {
    cbir::GrayImage out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.at(x, y) = static_cast<std::uint8_t>(img.at(x, y) + c);
    return out;
}

inline cbir::GrayImage block_replicate(const cbir::GrayImage& img, int factor) {
    cbir::GrayImage out(img.width() * factor, img.height() * factor);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out.at(x, y) = img.at(x / factor, y / factor);
    return out;
}

/// Square cells of side `period` alternating between `low` and `high`.
inline cbir::GrayImage checkerboard(int size, int period, int low, int high) {
    cbir::GrayImage out(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            out.at(x, y) = static_cast<std::uint8_t>(((x / period + y / period) % 2) ? high : low);
    return out;
}

/// Two anisotropic Gaussian lobes, off-center, so that all seven Hu
/// invariants are clearly non-zero.
inline cbir::GrayImage gaussian_blob(int size) {
    cbir::GrayImage out(size, size);
    const double s = size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double u = (x - 0.42 * s), v = (y - 0.47 * s);
            const double ur = 0.8 * u + 0.6 * v, vr = -0.6 * u + 0.8 * v;
            double g = 200.0 * std::exp(-(ur * ur / (2 * 0.16 * 0.16 * s * s) + vr * vr / (2 * 0.08 * 0.08 * s * s)));
            const double a = x - 0.65 * s, b = y - 0.3 * s;
            g += 90.0 * std::exp(-(a * a + b * b) / (2 * 0.06 * 0.06 * s * s));
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(std::min(255.0, g)));
        }
    }
    return out;
}

/// Removes the directory on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("cbir_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline constexpr int kSeparableGroups = 4;
inline constexpr int kSeparableGroupSize = 10;

/// 4 groups x 10 images. Group g is a checkerboard with cell period
/// {2, 3, 5, 7}[g]; members differ only by a non-clipping gray offset.
/// Images go to `dir/images`, the manifest to `dir/manifest.txt`.
inline fs::path write_separable_dataset(const fs::path& dir, int size = 48) {
    static const int periods[kSeparableGroups] = {2, 3, 5, 7};
    fs::create_directories(dir / "images");
    std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
    manifest << "# separable checkerboard dataset\n";
    for (int g = 0; g < kSeparableGroups; ++g) {
        const auto base = checkerboard(size, periods[g], 40, 130);
        for (int i = 0; i < kSeparableGroupSize; ++i) {
            const std::string name = "p" + std::to_string(periods[g]) + "_" + std::to_string(i) + ".pgm";
            cbir::write_pgm(dir / "images" / name, add_constant(base, 12 * i));
            manifest << "images/" << name << ",period" << periods[g] << "\n";
        }
    }
    return dir / "manifest.txt";
}

}  // namespace synth
