#pragma once

#include "graphtrack/frame.hpp"
#include "graphtrack/kernels.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace graphtrack::imaging {

/// Luminance weights applied to RGB inputs (ITU-R BT.601, as used by most
/// image decoders for RGB to gray conversion).
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

struct BandpassParams {
    int object_size_w = 5;       ///< approximate object width W, px; boxcar is 2W+1 wide
    double noise_level_n = 1.0;  ///< Gaussian standard deviation N, px
    double threshold = 0.15;     ///< fraction of the post-filter frame maximum, [0, 1)
    bool invert = false;         ///< complement intensities first (dark objects on bright ground)

    /// Checks parameter ranges; with a frame, also that the boxcar fits inside it.
    void validate() const;
    void validate_for(const GrayFrame& frame) const;
};

/// Reads a PNG or TIFF (8/16-bit, gray/gray+alpha/RGB/RGBA) into [0, 1].
/// RGB is reduced with the BT.601 weights above; alpha is ignored.
GrayFrame load_frame(const std::filesystem::path& source);

/// Writes a gray PNG (.png) or TIFF (.tif/.tiff). Values are clamped to [0, 1]
/// and quantized to `bit_depth` (8 or 16).
void save_frame(const GrayFrame& frame, const std::filesystem::path& target, int bit_depth = 16);

/**
 * Expands input specifications into an ordered list of frame files.
 *
 * A single directory yields its .png/.tif/.tiff files; a single pattern with
 * wildcards is globbed; in both cases the order is lexicographic by file name.
 * Several specifications are taken as an explicit list, in the given order.
 */
std::vector<std::filesystem::path> resolve_inputs(const std::vector<std::string>& specs);

/// 1 - v per value. Loaded frames hold multiples of 2^-53, on which this is
/// an exact involution.
GrayFrame invert(const GrayFrame& frame);

/// Normalized Gaussian taps for offsets -ceil(3N) .. ceil(3N).
std::vector<double> gaussian_taps(double noise_level);

/// Normalized boxcar taps of width 2W+1.
std::vector<double> boxcar_taps(int object_size_w);

/// Separable convolution with replicate-edge padding: rows with `taps_x`,
/// then columns with `taps_y`. Both tap counts must be odd.
std::vector<double> convolve_separable(const GrayFrame& frame, const std::vector<double>& taps_x,
                                       const std::vector<double>& taps_y,
                                       const kernels::KernelTable& table = kernels::active());

/// max(frame * Gaussian(N) - frame * Box(2W+1), 0), replicate borders.
GrayFrame bandpass(const GrayFrame& frame, const BandpassParams& params,
                   const kernels::KernelTable& table = kernels::active());

/// Zeroes values below threshold * max; keeps the rest unchanged.
GrayFrame apply_threshold(const GrayFrame& frame, double threshold);

/// Band-pass followed by thresholding; inversion is applied by the caller.
GrayFrame filter_frame(const GrayFrame& source, const BandpassParams& params,
                       const kernels::KernelTable& table = kernels::active());

}  // namespace graphtrack::imaging
