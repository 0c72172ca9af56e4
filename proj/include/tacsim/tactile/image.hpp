#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

struct ImageRgb {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;  // row-major, 3 bytes per pixel

    ImageRgb() = default;
    ImageRgb(int w, int h) : width(w), height(h), pixels(3 * size_t(w) * h, 0) {}

    uint8_t& at(int x, int y, int c) { return pixels[3 * (size_t(y) * width + x) + c]; }
    uint8_t at(int x, int y, int c) const { return pixels[3 * (size_t(y) * width + x) + c]; }
};

struct ImageGray16 {
    int width = 0, height = 0;
    std::vector<uint16_t> pixels;

    ImageGray16() = default;
    ImageGray16(int w, int h) : width(w), height(h), pixels(size_t(w) * h, 0) {}

    uint16_t& at(int x, int y) { return pixels[size_t(y) * width + x]; }
    uint16_t at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

// ITU-R BT.601 luma of one pixel on the [0, 1] scale.
inline double luma601(uint8_t r, uint8_t g, uint8_t b) {
    return (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
}

}  // namespace tacsim
