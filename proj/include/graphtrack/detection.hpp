#pragma once

#include "graphtrack/frame.hpp"
#include "graphtrack/imaging.hpp"
#include "graphtrack/kernels.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace graphtrack::detection {

enum class Shape { circle, ring };

std::string_view to_string(Shape shape) noexcept;
Shape parse_shape(std::string_view text);

struct Pixel {
    int x = 0;
    int y = 0;
    double intensity = 0.0;
};

/// A 4-connected set of nonzero pixels. Labels follow raster scan order.
struct PixelSet {
    int label = 0;
    std::vector<Pixel> pixels;
};

struct Centroid {
    Point center;
    std::vector<double> distances;  ///< r_k per pixel, same order as the PixelSet
};

struct DetectedObject {
    int frame_index = 0;
    int id = 0;  ///< position within its frame's object list
    Point centroid;
    double radius = 0.0;
    std::size_t pixel_count = 0;
    double match_index = 0.0;
    std::vector<double> pixel_distances;
};

struct ShapeFilterParams {
    Shape shape = Shape::circle;
    double r_min = 1.25;
    double r_max = 5.0;
    double delta_a = 0.3;  ///< circularity tolerance
    double delta_c = 5.0;  ///< ring dark-center ratio bound
    double delta_i = 0.5;  ///< match index lower bound

    void validate() const;
};

struct DetectionParams {
    imaging::BandpassParams bandpass;
    ShapeFilterParams shape;
    /// Sobel pixels up to this far beyond the outermost object pixel take part
    /// in the radius estimate. Thresholding trims the faint outer rim of an
    /// object, so its gradient sits just outside max r_k.
    double edge_margin = 0.75;
    bool discard_border_objects = true;

    void validate() const;
};

enum class Rejection { none, border, degenerate, radius_undefined, size, circularity, ring_center, match_index };

std::string_view to_string(Rejection reason) noexcept;

struct FilterResult {
    bool accepted = false;
    Rejection reason = Rejection::none;
};

/// 4-connected components of the nonzero pixels, scanned row by row.
std::vector<PixelSet> label_components(const GrayFrame& frame);

/// Intensity-weighted centroid and per-pixel distances. Throws
/// DegenerateObjectError when the total intensity is not positive.
Centroid compute_centroid(const PixelSet& pixels);

/// 3x3 Sobel gradient magnitude with replicate borders; frame must be >= 3x3.
SobelFrame sobel(const GrayFrame& frame, const kernels::KernelTable& table = kernels::active());

/**
 * Sobel-weighted mean distance of edge pixels from the centroid.
 *
 * Edge pixels are all Sobel pixels with mean(r_k) < r < max(r_k) + edge_margin.
 * The lower bound drops the inner edge of rings, the upper bound drops edges of
 * neighboring objects. Throws RadiusUndefinedError on an empty or massless annulus.
 */
double compute_radius(const Centroid& centroid, const SobelFrame& sobel, double edge_margin = 0.75);

/// Normalized interior/exterior contrast penalized by empty interior pixels,
/// evaluated on the filtered frame inside the object's box dilated by R.
double compute_match_index(const PixelSet& pixels, const Point& center, double radius, const GrayFrame& filtered,
                           Shape shape);

/// Size range always; circularity for circles, dark center for rings; match index for both.
FilterResult shape_filter(const DetectedObject& object, const ShapeFilterParams& params);

bool touches_border(const PixelSet& pixels, std::size_t width, std::size_t height) noexcept;

struct Candidate {
    DetectedObject object;
    FilterResult verdict;
};

/// Every component of a frame with its features and filter verdict.
std::vector<Candidate> analyze_frame(const GrayFrame& frame, int frame_index, const DetectionParams& params,
                                     const kernels::KernelTable& table = kernels::active());

/// Accepted objects only, ids renumbered 0..n-1 in scan order.
std::vector<DetectedObject> detect_objects(const GrayFrame& frame, int frame_index, const DetectionParams& params,
                                           const kernels::KernelTable& table = kernels::active());

}  // namespace graphtrack::detection
