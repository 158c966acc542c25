#include "cbir/retrieval.h"

#include "cbir/error.h"
#include "number_format.h"
#include "parallel.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace cbir {

namespace {

constexpr std::string_view kMagic = "CBIRIDX";
constexpr long long kFormatVersion = 1;

bool has_separator(std::string_view s) {
    return s.find_first_of("\t\n\r") != std::string_view::npos;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    for (;;) {
        auto pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

[[noreturn]] void malformed(const std::string& what) {
    throw IndexFormatError(IndexErrorKind::Malformed, "malformed index: " + what);
}

}  // namespace

double d1_distance(std::span<const double> q, std::span<const double> t) {
    if (q.size() != t.size()) {
        throw InvalidArgument("d1 distance of vectors with different dimensions (" + std::to_string(q.size()) +
                              " vs " + std::to_string(t.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double num = t[i] - q[i];
        const double den = 1.0 + (t[i] + q[i]);  // grouped so that swapping q and t is exact
        if (den == 0.0) {
            if (num != 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        sum += std::abs(num / den);
    }
    return sum;
}

double d1_distance(const FeatureVector& q, const FeatureVector& t) {
    if (q.mode() != t.mode()) {
        throw InvalidArgument("d1 distance between " + std::string(to_string(q.mode())) + " and " +
                              std::string(to_string(t.mode())) + " vectors");
    }
    return d1_distance(q.span(), t.span());
}

FeatureIndex::FeatureIndex(FeatureMode mode, LbpParams params, std::vector<IndexEntry> entries)
    : mode_(mode), params_(params), dim_(feature_dim(mode, params)), entries_(std::move(entries)) {
    std::set<std::string_view> ids;
    for (const auto& e : entries_) {
        if (e.image_id.empty() || has_separator(e.image_id)) {
            throw InvalidArgument("invalid image id '" + e.image_id + "'");
        }
        if (e.group_label.empty() || has_separator(e.group_label)) {
            throw InvalidArgument("invalid group label '" + e.group_label + "' for " + e.image_id);
        }
        if (e.features.mode() != mode_ || e.features.dim() != dim_) {
            throw InvalidArgument("entry " + e.image_id + " has a " + std::string(to_string(e.features.mode())) +
                                  " vector of dimension " + std::to_string(e.features.dim()) + ", index expects " +
                                  std::string(to_string(mode_)) + "/" + std::to_string(dim_));
        }
        if (!ids.insert(e.image_id).second) throw InvalidArgument("duplicate image id '" + e.image_id + "'");
    }
}

FeatureIndex build_index(const DatasetManifest& manifest, FeatureMode mode, const BuildOptions& options) {
    // Validates the mode/params combination even for an empty manifest.
    (void)feature_dim(mode, options.extract.params);

    const auto& rows = manifest.entries();
    std::vector<std::optional<FeatureVector>> vectors(rows.size());
    detail::parallel_for(rows.size(), options.threads, [&](std::size_t i) {
        const auto& row = rows[i];
        std::filesystem::path path(row.path);
        if (path.is_relative() && !options.base_dir.empty()) path = options.base_dir / path;
        try {
            vectors[i] = extract(read_image(path), mode, options.extract);
        } catch (const std::exception& e) {
            throw BuildError(row.path, e.what());
        }
    });

    std::vector<IndexEntry> entries;
    entries.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        entries.push_back({rows[i].image_id, rows[i].group_label, std::move(*vectors[i])});
    }
    return FeatureIndex(mode, options.extract.params, std::move(entries));
}

RankedResult query(const FeatureIndex& index, const FeatureVector& q, std::size_t k, std::string_view self_id) {
    if (k == 0) throw InvalidArgument("k must be at least 1");
    if (q.mode() != index.mode() || q.dim() != index.dim()) {
        throw InvalidArgument("query vector " + std::string(to_string(q.mode())) + "/" + std::to_string(q.dim()) +
                              " is incompatible with index " + std::string(to_string(index.mode())) + "/" +
                              std::to_string(index.dim()));
    }

    const auto& entries = index.entries();
    struct Scored {
        double distance;
        bool self;
        std::size_t pos;
    };
    std::vector<Scored> scored(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        scored[i] = {d1_distance(q.span(), entries[i].features.span()),
                     !self_id.empty() && entries[i].image_id == self_id, i};
    }
    auto before = [&](const Scored& a, const Scored& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.self != b.self) return a.self;
        return entries[a.pos].image_id < entries[b.pos].image_id;
    };
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), before);

    RankedResult result;
    result.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = entries[scored[i].pos];
        result.push_back({e.image_id, e.group_label, scored[i].distance});
    }
    return result;
}

std::string format_index(const FeatureIndex& index) {
    std::string out;
    out += kMagic;
    out += ' ';
    out += std::to_string(kFormatVersion);
    out += ' ';
    out += to_string(index.mode());
    out += ' ';
    out += std::to_string(index.params().neighbors());
    out += ' ';
    detail::append_double(out, index.params().radius());
    out += ' ';
    out += std::to_string(index.dim());
    out += ' ';
    out += std::to_string(index.size());
    out += '\n';
    for (const auto& e : index.entries()) {
        out += e.image_id;
        out += '\t';
        out += e.group_label;
        out += '\t';
        bool first = true;
        for (double v : e.features.values()) {
            if (!first) out += ' ';
            first = false;
            detail::append_double(out, v);
        }
        out += '\n';
    }
    const std::uint64_t checksum = detail::fnv1a64(out);
    out += "END " + std::to_string(index.size()) + " " + hex64(checksum) + "\n";
    return out;
}

void save_index(const FeatureIndex& index, std::ostream& out) {
    const std::string text = format_index(index);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed to write index");
}

void save_index(const FeatureIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    save_index(index, out);
}

FeatureIndex parse_index(std::string_view text) {
    // Header.
    const auto header_end = text.find('\n');
    if (header_end == std::string_view::npos) malformed("missing header line");
    const auto header = split(text.substr(0, header_end), ' ');
    if (header.size() != 7 || header[0] != kMagic) malformed("bad header line");
    const auto version = detail::parse_integer(header[1]);
    if (!version) malformed("bad version field");
    if (*version != kFormatVersion) {
        throw IndexFormatError(IndexErrorKind::Version, "unsupported index version " + std::to_string(*version) +
                                                            " (expected " + std::to_string(kFormatVersion) + ")");
    }
    FeatureMode mode;
    std::optional<LbpParams> params;
    try {
        mode = parse_feature_mode(header[2]);
        const auto p = detail::parse_integer(header[3]);
        const auto r = detail::parse_double(header[4]);
        if (!p || !r) malformed("bad P/R fields");
        params.emplace(static_cast<int>(*p), *r);
    } catch (const InvalidArgument& e) {
        malformed(e.what());
    }
    const auto dim = detail::parse_integer(header[5]);
    const auto count = detail::parse_integer(header[6]);
    if (!dim || !count || *count < 0) malformed("bad dim/count fields");
    std::size_t expected_dim = 0;
    try {
        expected_dim = feature_dim(mode, *params);
    } catch (const InvalidArgument& e) {
        malformed(e.what());
    }
    if (static_cast<std::size_t>(*dim) != expected_dim) malformed("dimension does not match mode");

    // Locate entry lines and the trailer.
    std::vector<std::string_view> lines;
    std::size_t pos = header_end + 1;
    const auto wanted = static_cast<std::size_t>(*count);
    while (lines.size() < wanted) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) malformed("truncated: expected " + std::to_string(wanted) + " entries");
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    const auto body = text.substr(0, pos);
    const auto trailer_end = text.find('\n', pos);
    if (trailer_end == std::string_view::npos) malformed("truncated: missing END line");
    if (trailer_end + 1 != text.size()) malformed("trailing data after END line");
    const auto trailer = split(text.substr(pos, trailer_end - pos), ' ');
    if (trailer.size() != 3 || trailer[0] != "END") malformed("bad END line");
    const auto trailer_count = detail::parse_integer(trailer[1]);
    if (!trailer_count || *trailer_count != *count) malformed("END line count does not match header");
    if (trailer[2] != hex64(detail::fnv1a64(body))) {
        throw IndexFormatError(IndexErrorKind::Checksum, "index checksum mismatch");
    }

    std::vector<IndexEntry> entries;
    entries.reserve(wanted);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split(lines[i], '\t');
        if (fields.size() != 3) malformed("entry " + std::to_string(i + 1) + " needs 3 tab-separated fields");
        const auto tokens = split(fields[2], ' ');
        if (tokens.size() != expected_dim) {
            malformed("entry " + std::to_string(i + 1) + " has " + std::to_string(tokens.size()) + " values");
        }
        std::vector<double> values;
        values.reserve(tokens.size());
        for (auto tok : tokens) {
            const auto v = detail::parse_double(tok);
            if (!v || !std::isfinite(*v)) malformed("bad value '" + std::string(tok) + "'");
            values.push_back(*v);
        }
        try {
            entries.push_back({std::string(fields[0]), std::string(fields[1]), FeatureVector(mode, std::move(values))});
        } catch (const InvalidArgument& e) {
            malformed(e.what());
        }
    }
    try {
        return FeatureIndex(mode, *params, std::move(entries));
    } catch (const InvalidArgument& e) {
        malformed(e.what());
    }
}

FeatureIndex load_index(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_index(text);
}

FeatureIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return load_index(in);
}

}  // namespace cbir
