#pragma once

#include "tacsim/tactile/image.hpp"

namespace tacsim {

// out = clamp(real_ref + (sim - sim_ref), 0, 255) per channel, exact integer
// arithmetic. Throws ConfigError on dimension mismatch.
ImageRgb composite_with_reference(const ImageRgb& sim, const ImageRgb& sim_ref,
                                  const ImageRgb& real_ref);

struct Metrics {
    double ssim = 0;
    double mae = 0;
    double psnr = 0;  // dB
};

// All three metrics on the BT.601 luma of the images, [0, 1] scale.
// SSIM: 11x11 Gaussian window sigma = 1.5, constants C1 = 0.01^2,
// C2 = 0.03^2, window truncated and renormalized at image borders, mean over
// all pixels. PSNR with MAX = 1, capped at `psnr_cap` dB for identical
// images. Throws ConfigError on dimension mismatch.
Metrics image_metrics(const ImageRgb& a, const ImageRgb& b, double psnr_cap = 100.0);

}  // namespace tacsim
