// Depth-map evaluation metrics and the reverse Huber (BerHu) regression
// loss, with per-pixel validity masking and an optional top/bottom
// evaluation crop.

#pragma once

#include <cstdint>
#include <vector>

namespace pnf {

struct DepthMap {
    int height = 0;
    int width = 0;
    std::vector<double> value;        // meters
    std::vector<std::uint8_t> valid;  // nonzero = usable ground truth

    DepthMap() = default;
    DepthMap(int h, int w)
        : height(h), width(w),
          value(static_cast<std::size_t>(h) * w, 0.0),
          valid(static_cast<std::size_t>(h) * w, 1) {}

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * width + j; }
    double& at(int i, int j) { return value[index(i, j)]; }
    double at(int i, int j) const { return value[index(i, j)]; }
    bool is_valid(int i, int j) const { return valid[index(i, j)] != 0; }
};

struct DepthEvalResult {
    double mae = 0.0;
    double abs_rel = 0.0;
    double rmse = 0.0;
    double rmse_log10 = 0.0;
    double rmse_loge = 0.0;
    double d1 = 0.0;  // fraction with max(p/g, g/p) < 1.25
    double d2 = 0.0;  // ... < 1.25^2
    double d3 = 0.0;  // ... < 1.25^3
    long long valid_pixel_count = 0;
    // Predictions <= 0 at evaluated pixels: skipped by the log metrics,
    // counted as inaccurate by the deltas.
    long long nonpositive_pred_count = 0;
};

// Evaluates over pixels that are gt-valid, whose ground truth lies in
// [min_depth, max_depth], and that sit outside the topmost/lowest `crop`
// rows. Throws when the evaluated set is empty. Per-pixel terms are summed
// in value order, so results are deterministic and invariant under pixel
// permutations (a yaw roll of both maps changes nothing).
DepthEvalResult compute_metrics(const DepthMap& pred, const DepthMap& gt, double min_depth,
                                double max_depth, int crop);

// Reverse Huber over gt-valid pixels with threshold c = 0.2 * max |residual|:
// |x| for |x| <= c, else (x^2 + c^2) / (2c); continuous at |x| = c. All-zero
// residuals give 0 (the c = 0 case degenerates to plain L1).
double berhu_loss(const DepthMap& pred, const DepthMap& gt);

}  // namespace pnf
