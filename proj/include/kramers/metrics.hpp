#pragma once

#include <string>
#include <vector>

namespace kramers {

struct MetricSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> values;

    void push(double t, double v);
    std::size_t size() const { return times.size(); }
};

} // namespace kramers
