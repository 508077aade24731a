#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace graphtrack {

/// Base class of every error raised by the tracking library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A frame file could not be read or decoded.
class IngestionError : public Error {
public:
    IngestionError(const std::filesystem::path& path, const std::string& what);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// Arguments violate a documented precondition (sizes, ranges, parameters).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// An object with zero total intensity reached centroid computation.
class DegenerateObjectError : public Error {
public:
    using Error::Error;
};

/// No Sobel mass inside the edge annulus of an object.
class RadiusUndefinedError : public Error {
public:
    using Error::Error;
};

/// Dominant angle requested for an empty edge list.
class NoDominantAngleError : public Error {
public:
    using Error::Error;
};

/// A segment has s + R = 0, so its error model is singular.
class DegenerateErrorModelError : public Error {
public:
    using Error::Error;
};

/// Synthetic placement could not reach the requested density.
class GenerationError : public Error {
public:
    GenerationError(const std::string& what, double achieved_density);
    double achieved_density() const noexcept { return achieved_density_; }

private:
    double achieved_density_;
};

/// A configuration key or value is malformed.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& what);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace graphtrack
