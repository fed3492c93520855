#include "kramers/stencil.hpp"
#include "kramers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kramers {

namespace {

// central weights, offsets -order/2 .. order/2
std::vector<double> central(int derivative, int order)
{
    if (derivative == 1) {
        switch (order) {
        case 2: return {-0.5, 0.0, 0.5};
        case 4: return {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
        case 6: return {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
        }
    } else {
        switch (order) {
        case 2: return {1.0, -2.0, 1.0};
        case 4: return {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
        case 6: return {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
        }
    }
    throw ValidationError("unsupported stencil order");
}

} // namespace

PStencil::PStencil(int n, double h, int derivative, int order) : derivative_(derivative), order_(order), h_(h)
{
    if (derivative != 1 && derivative != 2) throw ValidationError("stencil derivative must be 1 or 2");
    if (order != 2 && order != 4 && order != 6) throw ValidationError("p stencil order must be 2, 4 or 6");
    if (n < 8) throw ValidationError("stencil needs at least 8 points");
    const double scale = derivative == 1 ? 1.0 / h : 1.0 / (h * h);
    rows_.resize(n);
    for (int j = 0; j < n; ++j) {
        Row& r = rows_[j];
        const int dist = std::min(j, n - 1 - j);
        if (dist == 0) {
            std::vector<double> w = derivative == 1 ? std::vector<double>{-1.5, 2.0, -0.5}
                                                    : std::vector<double>{2.0, -5.0, 4.0, -1.0};
            r.width = static_cast<int>(w.size());
            if (j == 0) {
                r.first = 0;
                for (int k = 0; k < r.width; ++k) r.w[k] = w[k];
            } else {
                r.first = n - r.width;
                // mirror: reversed order, odd derivative flips sign
                const double sgn = derivative == 1 ? -1.0 : 1.0;
                for (int k = 0; k < r.width; ++k) r.w[k] = sgn * w[r.width - 1 - k];
            }
        } else {
            const int ord = std::min(order, 2 * dist);
            const auto w = central(derivative, ord);
            r.width = static_cast<int>(w.size());
            r.first = j - ord / 2;
            for (int k = 0; k < r.width; ++k) r.w[k] = w[k];
        }
        for (int k = 0; k < r.width; ++k) r.w[k] *= scale;
    }
}

double PStencil::symbol_max() const
{
    const auto w = central(derivative_, order_);
    const int half = order_ / 2;
    double best = 0.0;
    const int samples = 2048;
    for (int i = 0; i <= samples; ++i) {
        const double th = std::numbers::pi * i / samples;
        double re = 0.0, im = 0.0;
        for (int k = 0; k < static_cast<int>(w.size()); ++k) {
            re += w[k] * std::cos((k - half) * th);
            im += w[k] * std::sin((k - half) * th);
        }
        best = std::max(best, std::hypot(re, im));
    }
    return best;
}

} // namespace kramers
