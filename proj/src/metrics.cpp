#include "panofuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pnf {

namespace {

void check_same_dims(const DepthMap& a, const DepthMap& b, const char* what) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument(std::string(what) + ": depth map dimensions differ");
}

// Value-ordered summation: the result depends only on the multiset of terms,
// so pixel permutations (e.g. a yaw roll of both maps) reproduce results
// bit-exactly.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
}

}  // namespace

DepthEvalResult compute_metrics(const DepthMap& pred, const DepthMap& gt, double min_depth,
                                double max_depth, int crop) {
    check_same_dims(pred, gt, "compute_metrics");
    if (!(min_depth < max_depth))
        throw std::invalid_argument("compute_metrics: min_depth must be < max_depth");
    if (crop < 0 || 2 * crop >= gt.height)
        throw std::invalid_argument("compute_metrics: crop must satisfy 0 <= 2*crop < H");

    DepthEvalResult r;
    std::vector<double> abs_terms, rel_terms, sq_terms, log10_terms, loge_terms;
    long long n_d1 = 0, n_d2 = 0, n_d3 = 0;
    constexpr double kT1 = 1.25, kT2 = 1.25 * 1.25, kT3 = 1.25 * 1.25 * 1.25;

    for (int i = crop; i < gt.height - crop; ++i) {
        for (int j = 0; j < gt.width; ++j) {
            if (!gt.is_valid(i, j)) continue;
            const double g = gt.at(i, j);
            if (!(g >= min_depth && g <= max_depth)) continue;
            const double p = pred.at(i, j);
            ++r.valid_pixel_count;

            const double diff = p - g;
            abs_terms.push_back(std::abs(diff));
            rel_terms.push_back(std::abs(diff) / g);
            sq_terms.push_back(diff * diff);

            double ratio;
            if (p > 0.0) {
                const double l10 = std::log10(p) - std::log10(g);
                log10_terms.push_back(l10 * l10);
                const double le = std::log(p) - std::log(g);
                loge_terms.push_back(le * le);
                ratio = p > g ? p / g : g / p;
            } else {
                ++r.nonpositive_pred_count;
                ratio = std::numeric_limits<double>::infinity();
            }
            if (ratio < kT1) ++n_d1;
            if (ratio < kT2) ++n_d2;
            if (ratio < kT3) ++n_d3;
        }
    }
    if (r.valid_pixel_count == 0)
        throw std::runtime_error("compute_metrics: no valid pixels to evaluate");

    const double n = static_cast<double>(r.valid_pixel_count);
    r.mae = sorted_sum(abs_terms) / n;
    r.abs_rel = sorted_sum(rel_terms) / n;
    r.rmse = std::sqrt(sorted_sum(sq_terms) / n);
    if (!log10_terms.empty()) {
        const double m = static_cast<double>(log10_terms.size());
        r.rmse_log10 = std::sqrt(sorted_sum(log10_terms) / m);
        r.rmse_loge = std::sqrt(sorted_sum(loge_terms) / m);
    }
    r.d1 = n_d1 / n;
    r.d2 = n_d2 / n;
    r.d3 = n_d3 / n;
    return r;
}

double berhu_loss(const DepthMap& pred, const DepthMap& gt) {
    check_same_dims(pred, gt, "berhu_loss");
    double max_abs = 0.0;
    long long count = 0;
    for (std::size_t p = 0; p < gt.value.size(); ++p) {
        if (!gt.valid[p]) continue;
        ++count;
        const double a = std::abs(pred.value[p] - gt.value[p]);
        if (a > max_abs) max_abs = a;
    }
    if (count == 0) throw std::runtime_error("berhu_loss: no valid pixels");

    const double c = 0.2 * max_abs;
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(count));
    for (std::size_t p = 0; p < gt.value.size(); ++p) {
        if (!gt.valid[p]) continue;
        const double x = pred.value[p] - gt.value[p];
        const double a = std::abs(x);
        terms.push_back((a <= c || c == 0.0) ? a : (x * x + c * c) / (2.0 * c));
    }
    return sorted_sum(terms) / static_cast<double>(count);
}

}  // namespace pnf
