#pragma once

#include <array>
#include <complex>
#include <vector>

namespace kramers {

// Finite-difference stencil along p for a grid of n points with spacing h.
// Interior rows use central weights of the requested order; rows closer to the
// edges fall back to lower-order central weights, and the two edge rows use
// 2nd-order one-sided weights.
class PStencil {
public:
    struct Row {
        int first = 0;
        int width = 0;
        std::array<double, 7> w{};
    };

    PStencil(int n, double h, int derivative, int order);

    int size() const { return static_cast<int>(rows_.size()); }
    int order() const { return order_; }
    const Row& row(int j) const { return rows_[j]; }

    // out[j*stride] = sum_k w * in[(first+k)*stride]
    template <class T>
    void apply(const T* in, T* out, int stride = 1) const
    {
        for (const auto& r : rows_) {
            T acc{};
            for (int k = 0; k < r.width; ++k) acc += r.w[k] * in[(r.first + k) * stride];
            out[(&r - rows_.data()) * stride] = acc;
        }
    }

    // max over theta of |symbol| times h^derivative for the interior weights
    double symbol_max() const;

private:
    int derivative_;
    int order_;
    double h_;
    std::vector<Row> rows_;
};

} // namespace kramers
