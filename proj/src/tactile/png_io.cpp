#include "tacsim/tactile/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <memory>

namespace tacsim {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void io_fail(const std::string& path, const char* what) {
    throw IoError(std::string(what) + ": " + path);
}

}  // namespace

void save_png_rgb(const std::string& path, const ImageRgb& img) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) io_fail(path, "cannot open PNG for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        io_fail(path, "PNG write error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.pixels[3 * size_t(y) * img.width]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

ImageRgb load_png_rgb(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) io_fail(path, "cannot open PNG");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "PNG read error");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    png_set_expand(png);       // palette/gray -> 8-bit
    png_set_strip_16(png);     // 16-bit -> 8-bit
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    ImageRgb img(int(png_get_image_width(png, info)), int(png_get_image_height(png, info)));
    if (png_get_rowbytes(png, info) != size_t(3 * img.width)) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "unexpected PNG row layout");
    }
    for (int y = 0; y < img.height; ++y)
        png_read_row(png, &img.pixels[3 * size_t(y) * img.width], nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png_gray16(const std::string& path, const ImageGray16& img) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) io_fail(path, "cannot open PNG for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        io_fail(path, "PNG write error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<uint8_t> row(2 * size_t(img.width));  // PNG is big-endian
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const uint16_t v = img.at(x, y);
            row[2 * x] = uint8_t(v >> 8);
            row[2 * x + 1] = uint8_t(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

ImageGray16 load_png_gray16(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) io_fail(path, "cannot open PNG");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "PNG read error");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY ||
        png_get_bit_depth(png, info) != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "expected a 16-bit grayscale PNG");
    }
    ImageGray16 img(int(png_get_image_width(png, info)), int(png_get_image_height(png, info)));
    std::vector<uint8_t> row(2 * size_t(img.width));
    for (int y = 0; y < img.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < img.width; ++x)
            img.at(x, y) = uint16_t((row[2 * x] << 8) | row[2 * x + 1]);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_heightmap_png(const std::string& path, const HeightMap& hm) {
    double max_h = 0;
    for (size_t i = 0; i < hm.values.size(); ++i)
        if (hm.mask[i]) max_h = std::max(max_h, hm.values[i]);
    const double meters_per_unit = (max_h > 0) ? max_h / 65535.0 : 1.0;

    ImageGray16 img(hm.width, hm.height);
    for (int y = 0; y < hm.height; ++y)
        for (int x = 0; x < hm.width; ++x)
            if (hm.covered(x, y))
                img.at(x, y) = uint16_t(std::lround(hm.at(x, y) / meters_per_unit));
    save_png_gray16(path, img);

    nlohmann::json sidecar;
    sidecar["meters_per_unit"] = meters_per_unit;
    sidecar["origin"] = {hm.origin.x(), hm.origin.y()};
    sidecar["pixel_size"] = hm.pixel_size;
    sidecar["width"] = hm.width;
    sidecar["height"] = hm.height;
    std::ofstream out(path + ".json");
    if (!out) io_fail(path + ".json", "cannot write height-map sidecar");
    out << sidecar.dump(2) << "\n";
}

}  // namespace tacsim
