#pragma once

#include "kramers/core_model.hpp"
#include "kramers/phase_field.hpp"

#include <cmath>
#include <vector>

namespace testutil {

inline kramers::Params params(double gamma, double T = 1.0, double hbar = 1.0, double c = 10.0)
{
    kramers::ParamsInput in;
    in.m = 1.0;
    in.c = c;
    in.hbar = hbar;
    in.gamma = gamma;
    in.T = T;
    return kramers::build_params(in);
}

template <class V>
double rel_diff(const V& a, const V& b)
{
    double num = 0, den = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += std::norm(a[k] - b[k]);
        den += std::norm(b[k]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

template <class V>
double max_abs(const V& a)
{
    double m = 0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

} // namespace testutil
