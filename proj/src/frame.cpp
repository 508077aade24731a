#include "graphtrack/frame.hpp"

#include "graphtrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphtrack {

double distance(const Point& a, const Point& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

void check_dimensions(std::size_t width, std::size_t height, std::size_t count) {
    if (width == 0 || height == 0) {
        throw InvalidInputError("frame dimensions must be at least 1x1");
    }
    if (count != width * height) {
        throw InvalidInputError("frame data has " + std::to_string(count) + " values, expected " +
                                std::to_string(width * height));
    }
}

}  // namespace

GrayFrame::GrayFrame(std::size_t width, std::size_t height, double fill)
    : GrayFrame(width, height, std::vector<double>(width * height, fill)) {}

GrayFrame::GrayFrame(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_dimensions(width_, height_, values_.size());
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInputError("frame intensities must be finite and nonnegative");
        }
    }
}

double GrayFrame::max_value() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

SobelFrame::SobelFrame(std::size_t width, std::size_t height, std::vector<double> magnitude)
    : width_(width), height_(height), magnitude_(std::move(magnitude)) {
    check_dimensions(width_, height_, magnitude_.size());
}

}  // namespace graphtrack
