#include "graphtrack/errors.hpp"
#include "graphtrack/imaging.hpp"

#include <png.h>
#include <tiffio.h>

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace fs = std::filesystem;

namespace graphtrack::imaging {

namespace {

std::string lower_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

bool is_frame_file(const fs::path& p) {
    const auto ext = lower_extension(p);
    return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Converts interleaved samples (gray, gray+alpha, RGB or RGBA) to luminance in [0, 1].
template <typename Sample>
void samples_to_luma(const Sample* src, std::size_t count, int channels, double scale, double* dst) {
    for (std::size_t i = 0; i < count; ++i) {
        const Sample* px = src + i * static_cast<std::size_t>(channels);
        if (channels >= 3) {
            dst[i] = (kLumaRed * px[0] + kLumaGreen * px[1] + kLumaBlue * px[2]) * scale;
        } else {
            dst[i] = px[0] * scale;
        }
        // Snap to multiples of 2^-53: 1 - v is then exact, so invert is an involution.
        dst[i] = std::ldexp(std::nearbyint(std::ldexp(std::clamp(dst[i], 0.0, 1.0), 53)), -53);
    }
}

struct PngImage {
    std::vector<unsigned char> buffer;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int channels = 0;
};

// libpng reports errors through longjmp; keep every object touched after
// setjmp outside this frame so nothing here needs unwinding.
bool decode_png(png_structp png, png_infop info, std::FILE* file, PngImage& image) {
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_init_io(png, file);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    int color_type = 0;
    png_get_IHDR(png, info, &image.width, &image.height, &image.bit_depth, &color_type, nullptr, nullptr,
                 nullptr);
    if (image.width == 0 || image.height == 0) {
        return true;
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && image.bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (image.bit_depth == 16) {
        png_set_swap(png);  // host-order uint16 on little-endian machines
    }
    png_read_update_info(png, info);
    image.bit_depth = png_get_bit_depth(png, info);
    image.channels = png_get_channels(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    image.buffer.resize(stride * image.height);
    image.rows.resize(image.height);
    for (png_uint_32 y = 0; y < image.height; ++y) {
        image.rows[y] = image.buffer.data() + y * stride;
    }
    png_read_image(png, image.rows.data());
    png_read_end(png, nullptr);
    return true;
}

GrayFrame load_png(const fs::path& source) {
    FilePtr file(std::fopen(source.c_str(), "rb"));
    if (!file) {
        throw IngestionError(source, "cannot open file");
    }
    png_byte signature[8];
    if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
        throw IngestionError(source, "not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IngestionError(source, "libpng initialization failed");
    }
    PngImage image;
    const bool ok = decode_png(png, info, file.get(), image);
    png_destroy_read_struct(&png, &info, nullptr);
    if (!ok) {
        throw IngestionError(source, "corrupt PNG data");
    }
    if (image.width == 0 || image.height == 0) {
        throw InvalidInputError(source.string() + ": zero-dimension image");
    }

    const std::size_t width = image.width;
    std::vector<double> values(width * image.height);
    std::vector<std::uint16_t> tmp(width * static_cast<std::size_t>(image.channels));
    for (png_uint_32 y = 0; y < image.height; ++y) {
        double* dst = values.data() + static_cast<std::size_t>(y) * width;
        if (image.bit_depth == 16) {
            std::memcpy(tmp.data(), image.rows[y], tmp.size() * sizeof(std::uint16_t));
            samples_to_luma(tmp.data(), width, image.channels, 1.0 / 65535.0, dst);
        } else {
            samples_to_luma(image.rows[y], width, image.channels, 1.0 / 255.0, dst);
        }
    }
    return GrayFrame(width, image.height, std::move(values));
}

struct TiffCloser {
    void operator()(TIFF* t) const noexcept { TIFFClose(t); }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

GrayFrame load_tiff(const fs::path& source) {
    TIFFSetWarningHandler(nullptr);
    TiffPtr tif(TIFFOpen(source.c_str(), "r"));
    if (!tif) {
        throw IngestionError(source, "cannot open TIFF file");
    }
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t bits = 8;
    std::uint16_t channels = 1;
    std::uint16_t planar = PLANARCONFIG_CONTIG;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &width);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &height);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &channels);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
    if (width == 0 || height == 0) {
        throw InvalidInputError(source.string() + ": zero-dimension image");
    }
    if (bits != 8 && bits != 16) {
        throw IngestionError(source, "unsupported TIFF bit depth " + std::to_string(bits));
    }
    if (planar != PLANARCONFIG_CONTIG || channels < 1 || channels > 4) {
        throw IngestionError(source, "unsupported TIFF sample layout");
    }

    std::vector<unsigned char> line(static_cast<std::size_t>(TIFFScanlineSize(tif.get())));
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    for (std::uint32_t y = 0; y < height; ++y) {
        if (TIFFReadScanline(tif.get(), line.data(), y) < 0) {
            throw IngestionError(source, "failed reading scanline " + std::to_string(y));
        }
        double* dst = values.data() + static_cast<std::size_t>(y) * width;
        if (bits == 16) {
            std::vector<std::uint16_t> tmp(static_cast<std::size_t>(width) * channels);
            std::memcpy(tmp.data(), line.data(), tmp.size() * sizeof(std::uint16_t));
            samples_to_luma(tmp.data(), width, channels, 1.0 / 65535.0, dst);
        } else {
            samples_to_luma(line.data(), width, channels, 1.0 / 255.0, dst);
        }
    }
    return GrayFrame(width, height, std::move(values));
}

std::uint16_t quantize(double v, double levels) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * levels));
}

bool encode_png(png_structp png, png_infop info, std::FILE* file, const GrayFrame& frame, int bit_depth,
                std::vector<unsigned char>& row) {
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    const std::size_t w = frame.width();
    png_init_io(png, file);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(frame.height()), bit_depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < frame.height(); ++y) {
        const auto src = frame.row(y);
        for (std::size_t x = 0; x < w; ++x) {
            if (bit_depth == 16) {
                const auto q = quantize(src[x], 65535.0);
                row[2 * x] = static_cast<unsigned char>(q >> 8);  // PNG is big-endian
                row[2 * x + 1] = static_cast<unsigned char>(q & 0xff);
            } else {
                row[x] = static_cast<unsigned char>(quantize(src[x], 255.0));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    return true;
}

void save_png(const GrayFrame& frame, const fs::path& target, int bit_depth) {
    FilePtr file(std::fopen(target.c_str(), "wb"));
    if (!file) {
        throw IngestionError(target, "cannot open file for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IngestionError(target, "libpng initialization failed");
    }
    std::vector<unsigned char> row(frame.width() * (bit_depth == 16 ? 2 : 1));
    const bool ok = encode_png(png, info, file.get(), frame, bit_depth, row);
    png_destroy_write_struct(&png, &info);
    if (!ok) {
        throw IngestionError(target, "PNG encoding failed");
    }
}

void save_tiff(const GrayFrame& frame, const fs::path& target, int bit_depth) {
    TiffPtr tif(TIFFOpen(target.c_str(), "w"));
    if (!tif) {
        throw IngestionError(target, "cannot open TIFF for writing");
    }
    const auto w = static_cast<std::uint32_t>(frame.width());
    const auto h = static_cast<std::uint32_t>(frame.height());
    TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, w);
    TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, h);
    TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, static_cast<std::uint16_t>(bit_depth));
    TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(1));
    TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, h);
    std::vector<std::uint16_t> row16(w);
    std::vector<std::uint8_t> row8(w);
    for (std::uint32_t y = 0; y < h; ++y) {
        const auto src = frame.row(y);
        void* data = nullptr;
        if (bit_depth == 16) {
            for (std::uint32_t x = 0; x < w; ++x) row16[x] = quantize(src[x], 65535.0);
            data = row16.data();
        } else {
            for (std::uint32_t x = 0; x < w; ++x) row8[x] = static_cast<std::uint8_t>(quantize(src[x], 255.0));
            data = row8.data();
        }
        if (TIFFWriteScanline(tif.get(), data, y) < 0) {
            throw IngestionError(target, "failed writing scanline");
        }
    }
}

}  // namespace

GrayFrame load_frame(const fs::path& source) {
    std::error_code ec;
    if (!fs::is_regular_file(source, ec)) {
        throw IngestionError(source, "no such file");
    }
    const auto ext = lower_extension(source);
    if (ext == ".png") {
        return load_png(source);
    }
    if (ext == ".tif" || ext == ".tiff") {
        return load_tiff(source);
    }
    throw IngestionError(source, "unsupported image format '" + ext + "'");
}

void save_frame(const GrayFrame& frame, const fs::path& target, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw InvalidInputError("bit depth must be 8 or 16");
    }
    const auto ext = lower_extension(target);
    if (ext == ".png") {
        save_png(frame, target, bit_depth);
    } else if (ext == ".tif" || ext == ".tiff") {
        save_tiff(frame, target, bit_depth);
    } else {
        throw IngestionError(target, "unsupported image format '" + ext + "'");
    }
}

std::vector<fs::path> resolve_inputs(const std::vector<std::string>& specs) {
    if (specs.size() > 1) {
        return {specs.begin(), specs.end()};
    }
    std::vector<fs::path> out;
    if (specs.empty()) {
        return out;
    }
    const fs::path spec = specs.front();
    std::error_code ec;
    if (fs::is_directory(spec, ec)) {
        for (const auto& entry : fs::directory_iterator(spec)) {
            if (entry.is_regular_file() && is_frame_file(entry.path())) {
                out.push_back(entry.path());
            }
        }
    } else if (specs.front().find_first_of("*?[") != std::string::npos) {
        glob_t matches{};
        if (glob(specs.front().c_str(), 0, nullptr, &matches) == 0) {
            for (std::size_t i = 0; i < matches.gl_pathc; ++i) {
                out.emplace_back(matches.gl_pathv[i]);
            }
        }
        globfree(&matches);
    } else {
        out.push_back(spec);
    }
    std::sort(out.begin(), out.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return out;
}

}  // namespace graphtrack::imaging
