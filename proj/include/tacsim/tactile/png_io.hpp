#pragma once

#include <string>

#include "tacsim/tactile/heightmap.hpp"
#include "tacsim/tactile/image.hpp"

namespace tacsim {

void save_png_rgb(const std::string& path, const ImageRgb& img);
ImageRgb load_png_rgb(const std::string& path);  // grayscale/alpha inputs expanded to RGB

void save_png_gray16(const std::string& path, const ImageGray16& img);
ImageGray16 load_png_gray16(const std::string& path);

// 16-bit gray PNG of the height map plus a JSON sidecar (path + ".json")
// recording meters_per_unit, origin, and pixel_size so values round-trip to
// meters.
void save_heightmap_png(const std::string& path, const HeightMap& hm);

}  // namespace tacsim
