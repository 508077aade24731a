#include "graphtrack/imaging.hpp"

#include "graphtrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphtrack::imaging {

void BandpassParams::validate() const {
    if (object_size_w < 1) {
        throw InvalidInputError("object size W must be >= 1, got " + std::to_string(object_size_w));
    }
    if (!(noise_level_n > 0.0) || !std::isfinite(noise_level_n)) {
        throw InvalidInputError("noise level N must be > 0");
    }
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw InvalidInputError("threshold must lie in [0, 1)");
    }
}

void BandpassParams::validate_for(const GrayFrame& frame) const {
    validate();
    const auto support = static_cast<std::size_t>(2 * object_size_w + 1);
    if (support > std::min(frame.width(), frame.height())) {
        throw InvalidInputError("boxcar support " + std::to_string(support) + " exceeds frame " +
                                std::to_string(frame.width()) + "x" + std::to_string(frame.height()));
    }
}

GrayFrame invert(const GrayFrame& frame) {
    GrayFrame out = frame;
    for (double& v : out.values()) {
        v = std::max(1.0 - v, 0.0);
    }
    return out;
}

std::vector<double> gaussian_taps(double noise_level) {
    if (!(noise_level > 0.0)) {
        throw InvalidInputError("noise level N must be > 0");
    }
    const int half = static_cast<int>(std::ceil(3.0 * noise_level));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double v = std::exp(-(k * k) / (2.0 * noise_level * noise_level));
        taps[static_cast<std::size_t>(k + half)] = v;
        sum += v;
    }
    for (double& t : taps) {
        t /= sum;
    }
    return taps;
}

std::vector<double> boxcar_taps(int object_size_w) {
    if (object_size_w < 1) {
        throw InvalidInputError("object size W must be >= 1");
    }
    const auto n = static_cast<std::size_t>(2 * object_size_w + 1);
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> convolve_separable(const GrayFrame& frame, const std::vector<double>& taps_x,
                                       const std::vector<double>& taps_y, const kernels::KernelTable& table) {
    if (taps_x.size() % 2 == 0 || taps_y.size() % 2 == 0) {
        throw InvalidInputError("convolution taps must have odd length");
    }
    const std::size_t w = frame.width();
    const std::size_t h = frame.height();
    const std::size_t rx = taps_x.size() / 2;
    const std::size_t ry = taps_y.size() / 2;

    // Horizontal pass on replicate-padded rows.
    std::vector<double> horizontal(w * h);
    std::vector<double> padded(w + 2 * rx);
    for (std::size_t y = 0; y < h; ++y) {
        const auto row = frame.row(y);
        std::fill(padded.begin(), padded.begin() + static_cast<std::ptrdiff_t>(rx), row.front());
        std::copy(row.begin(), row.end(), padded.begin() + static_cast<std::ptrdiff_t>(rx));
        std::fill(padded.end() - static_cast<std::ptrdiff_t>(rx), padded.end(), row.back());
        table.convolve_row(padded.data(), w, taps_x.data(), taps_x.size(), horizontal.data() + y * w);
    }

    // Vertical pass as a weighted sum of clamped rows.
    std::vector<double> out(w * h, 0.0);
    const auto last = static_cast<std::ptrdiff_t>(h) - 1;
    for (std::size_t y = 0; y < h; ++y) {
        double* dst = out.data() + y * w;
        for (std::size_t k = 0; k < taps_y.size(); ++k) {
            const auto src_y = std::clamp(static_cast<std::ptrdiff_t>(y + k) - static_cast<std::ptrdiff_t>(ry),
                                          std::ptrdiff_t{0}, last);
            table.axpy(taps_y[k], horizontal.data() + static_cast<std::size_t>(src_y) * w, dst, w);
        }
    }
    return out;
}

GrayFrame bandpass(const GrayFrame& frame, const BandpassParams& params, const kernels::KernelTable& table) {
    params.validate_for(frame);
    const auto gauss = gaussian_taps(params.noise_level_n);
    const auto box = boxcar_taps(params.object_size_w);
    const auto smoothed = convolve_separable(frame, gauss, gauss, table);
    const auto background = convolve_separable(frame, box, box, table);

    std::vector<double> out(frame.size());
    table.diff_clamp(smoothed.data(), background.data(), out.size(), out.data());
    return GrayFrame(frame.width(), frame.height(), std::move(out));
}

GrayFrame apply_threshold(const GrayFrame& frame, double threshold) {
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw InvalidInputError("threshold must lie in [0, 1)");
    }
    GrayFrame out = frame;
    const double cutoff = threshold * frame.max_value();
    for (double& v : out.values()) {
        if (v < cutoff) {
            v = 0.0;
        }
    }
    return out;
}

GrayFrame filter_frame(const GrayFrame& source, const BandpassParams& params, const kernels::KernelTable& table) {
    return apply_threshold(bandpass(source, params, table), params.threshold);
}

}  // namespace graphtrack::imaging
