#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace cbir {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates an operation's contract (bad P/R, k < 1, mismatched dims).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The image is too small for the requested neighborhood or window.
class ImageTooSmall : public Error {
public:
    using Error::Error;
};

/// The image has zero total mass, so its centroid is undefined.
class DegenerateImage : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind {
    UnknownMagic,
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedData,
    InvalidSample,
};

/// Netpbm decoding failure.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    ParseErrorKind kind() const noexcept { return kind_; }

private:
    ParseErrorKind kind_;
};

/// Manifest parse failure; line is 1-based.
class ManifestError : public Error {
public:
    ManifestError(std::size_t line, const std::string& what)
        : Error("manifest line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Malformed feature record (text serialization of a single vector).
class FeatureFormatError : public Error {
public:
    using Error::Error;
};

enum class IndexErrorKind { Version, Checksum, Malformed };

class IndexFormatError : public Error {
public:
    IndexFormatError(IndexErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    IndexErrorKind kind() const noexcept { return kind_; }

private:
    IndexErrorKind kind_;
};

/// Index construction failed on one manifest entry.
class BuildError : public Error {
public:
    BuildError(std::string path, const std::string& cause)
        : Error(path + ": " + cause), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace cbir
