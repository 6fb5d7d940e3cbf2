#include "panofuse/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace pnf {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return f;
}

// Owns the libpng read or write structs; longjmp from libpng unwinds to the
// caller's setjmp block, after which this still destroys the structs.
struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw std::runtime_error("libpng allocation failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw std::runtime_error("libpng allocation failed");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

}  // namespace

FeatureMap read_rgb8(const std::string& path) {
    FilePtr file = open_file(path, "rb");
    PngReader ctx;
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("failed to decode PNG '" + path + "'");
    png_init_io(ctx.png, file.get());
    png_read_info(ctx.png, ctx.info);

    // Normalize every color layout to 8-bit RGB.
    png_set_expand(ctx.png);
    png_set_strip_16(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_set_gray_to_rgb(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    const int height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    if (png_get_channels(ctx.png, ctx.info) != 3)
        throw std::runtime_error("failed to normalize '" + path + "' to RGB");

    std::vector<png_byte> raw(static_cast<std::size_t>(height) * width * 3);
    std::vector<png_bytep> rows(height);
    for (int i = 0; i < height; ++i)
        rows[i] = raw.data() + static_cast<std::size_t>(i) * width * 3;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    FeatureMap out(3, height, width);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            for (int c = 0; c < 3; ++c)
                out.at(c, i, j) = raw[(static_cast<std::size_t>(i) * width + j) * 3 + c];
    return out;
}

void write_rgb8(const std::string& path, const FeatureMap& image) {
    if (image.channels != 3 && image.channels != 1)
        throw std::invalid_argument("write_rgb8: image must have 1 or 3 channels");
    const int ch = image.channels;
    std::vector<png_byte> raw(static_cast<std::size_t>(image.height) * image.width * ch);
    for (int i = 0; i < image.height; ++i)
        for (int j = 0; j < image.width; ++j)
            for (int c = 0; c < ch; ++c) {
                const long v = std::lround(image.at(c, i, j));
                raw[(static_cast<std::size_t>(i) * image.width + j) * ch + c] =
                    static_cast<png_byte>(std::clamp(v, 0L, 255L));
            }

    FilePtr file = open_file(path, "wb");
    PngWriter ctx;
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("failed to encode PNG '" + path + "'");
    png_init_io(ctx.png, file.get());
    png_set_IHDR(ctx.png, ctx.info, image.width, image.height, 8,
                 ch == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    std::vector<png_bytep> rows(image.height);
    for (int i = 0; i < image.height; ++i)
        rows[i] = raw.data() + static_cast<std::size_t>(i) * image.width * ch;
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

DepthMap read_depth_png16(const std::string& path, double scale) {
    FilePtr file = open_file(path, "rb");
    PngReader ctx;
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("failed to decode PNG '" + path + "'");
    png_init_io(ctx.png, file.get());
    png_read_info(ctx.png, ctx.info);

    if (png_get_bit_depth(ctx.png, ctx.info) != 16 ||
        png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
        throw std::runtime_error("'" + path + "' is not a 16-bit grayscale depth PNG");
    png_read_update_info(ctx.png, ctx.info);

    const int width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    const int height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    std::vector<png_byte> raw(static_cast<std::size_t>(height) * width * 2);
    std::vector<png_bytep> rows(height);
    for (int i = 0; i < height; ++i)
        rows[i] = raw.data() + static_cast<std::size_t>(i) * width * 2;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    DepthMap out(height, width);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            const std::size_t p = (static_cast<std::size_t>(i) * width + j) * 2;
            const unsigned raw16 = (static_cast<unsigned>(raw[p]) << 8) | raw[p + 1];
            out.at(i, j) = raw16 * scale;
            out.valid[out.index(i, j)] = raw16 != 0;
        }
    return out;
}

void write_depth_png16(const std::string& path, const DepthMap& depth, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("write_depth_png16: scale must be positive");
    std::vector<png_byte> raw(static_cast<std::size_t>(depth.height) * depth.width * 2);
    for (int i = 0; i < depth.height; ++i)
        for (int j = 0; j < depth.width; ++j) {
            unsigned raw16 = 0;
            if (depth.is_valid(i, j)) {
                const long q = std::lround(depth.at(i, j) / scale);
                raw16 = static_cast<unsigned>(std::clamp(q, 1L, 65535L));
            }
            const std::size_t p = (static_cast<std::size_t>(i) * depth.width + j) * 2;
            raw[p] = static_cast<png_byte>(raw16 >> 8);  // PNG is big-endian
            raw[p + 1] = static_cast<png_byte>(raw16 & 0xff);
        }

    FilePtr file = open_file(path, "wb");
    PngWriter ctx;
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("failed to encode PNG '" + path + "'");
    png_init_io(ctx.png, file.get());
    png_set_IHDR(ctx.png, ctx.info, depth.width, depth.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    std::vector<png_bytep> rows(depth.height);
    for (int i = 0; i < depth.height; ++i)
        rows[i] = raw.data() + static_cast<std::size_t>(i) * depth.width * 2;
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

}  // namespace pnf
