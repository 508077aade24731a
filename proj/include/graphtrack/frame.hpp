#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphtrack {

/// Sub-pixel position in frame coordinates; x grows to the right, y downwards.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b) noexcept;

/**
 * Row-major 2-D intensity raster.
 *
 * Width and height are at least 1 and every value is finite and nonnegative.
 * Constructors validate; mutable element access does not re-check.
 */
class GrayFrame {
public:
    GrayFrame(std::size_t width, std::size_t height, double fill = 0.0);
    GrayFrame(std::size_t width, std::size_t height, std::vector<double> values);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(std::size_t x, std::size_t y) const noexcept { return values_[y * width_ + x]; }
    double& operator()(std::size_t x, std::size_t y) noexcept { return values_[y * width_ + x]; }

    std::span<const double> row(std::size_t y) const noexcept {
        return {values_.data() + y * width_, width_};
    }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double max_value() const noexcept;

    friend bool operator==(const GrayFrame&, const GrayFrame&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> values_;
};

/// Gradient magnitude of a frame; same dimensions as its source.
class SobelFrame {
public:
    SobelFrame(std::size_t width, std::size_t height, std::vector<double> magnitude);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    double operator()(std::size_t x, std::size_t y) const noexcept { return magnitude_[y * width_ + x]; }
    std::span<const double> values() const noexcept { return magnitude_; }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> magnitude_;
};

}  // namespace graphtrack
