#include "tacsim/tactile/metrics.hpp"

#include <cmath>

namespace tacsim {

ImageRgb composite_with_reference(const ImageRgb& sim, const ImageRgb& sim_ref,
                                  const ImageRgb& real_ref) {
    if (sim.width != sim_ref.width || sim.height != sim_ref.height ||
        sim.width != real_ref.width || sim.height != real_ref.height)
        throw ConfigError("composite_with_reference: image dimensions differ");
    ImageRgb out(sim.width, sim.height);
    for (size_t i = 0; i < out.pixels.size(); ++i) {
        const int v = int(real_ref.pixels[i]) + int(sim.pixels[i]) - int(sim_ref.pixels[i]);
        out.pixels[i] = static_cast<uint8_t>(std::clamp(v, 0, 255));
    }
    return out;
}

namespace {

std::vector<double> to_luma(const ImageRgb& img) {
    std::vector<double> out(size_t(img.width) * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out[size_t(y) * img.width + x] = luma601(img.at(x, y, 0), img.at(x, y, 1),
                                                     img.at(x, y, 2));
    return out;
}

}  // namespace

Metrics image_metrics(const ImageRgb& a, const ImageRgb& b, double psnr_cap) {
    if (a.width != b.width || a.height != b.height)
        throw ConfigError("image_metrics: image dimensions differ");
    const int w = a.width, h = a.height;
    const auto la = to_luma(a), lb = to_luma(b);

    Metrics m;
    double abs_sum = 0, sq_sum = 0;
    for (size_t i = 0; i < la.size(); ++i) {
        const double d = la[i] - lb[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const double n = double(la.size());
    m.mae = abs_sum / n;
    const double mse = sq_sum / n;
    m.psnr = (mse <= 0) ? psnr_cap : std::min(psnr_cap, 10.0 * std::log10(1.0 / mse));

    // SSIM: 11x11 Gaussian window, sigma 1.5
    const int R = 5;
    double g[2 * R + 1];
    for (int k = -R; k <= R; ++k) g[k + R] = std::exp(-0.5 * k * k / (1.5 * 1.5));
    const double C1 = 0.01 * 0.01, C2 = 0.03 * 0.03;

    double ssim_sum = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double wsum = 0, ma = 0, mb = 0;
            for (int dy = -R; dy <= R; ++dy) {
                const int sy = y + dy;
                if (sy < 0 || sy >= h) continue;
                for (int dx = -R; dx <= R; ++dx) {
                    const int sx = x + dx;
                    if (sx < 0 || sx >= w) continue;
                    const double wt = g[dy + R] * g[dx + R];
                    const size_t i = size_t(sy) * w + sx;
                    wsum += wt;
                    ma += wt * la[i];
                    mb += wt * lb[i];
                }
            }
            ma /= wsum;
            mb /= wsum;
            double va = 0, vb = 0, cov = 0;
            for (int dy = -R; dy <= R; ++dy) {
                const int sy = y + dy;
                if (sy < 0 || sy >= h) continue;
                for (int dx = -R; dx <= R; ++dx) {
                    const int sx = x + dx;
                    if (sx < 0 || sx >= w) continue;
                    const double wt = g[dy + R] * g[dx + R];
                    const size_t i = size_t(sy) * w + sx;
                    va += wt * (la[i] - ma) * (la[i] - ma);
                    vb += wt * (lb[i] - mb) * (lb[i] - mb);
                    cov += wt * (la[i] - ma) * (lb[i] - mb);
                }
            }
            va /= wsum;
            vb /= wsum;
            cov /= wsum;
            ssim_sum += ((2 * ma * mb + C1) * (2 * cov + C2)) /
                        ((ma * ma + mb * mb + C1) * (va + vb + C2));
        }
    }
    m.ssim = ssim_sum / n;
    return m;
}

}  // namespace tacsim
