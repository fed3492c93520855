#include "kramers/metrics.hpp"
#include "kramers/errors.hpp"

namespace kramers {

void MetricSeries::push(double t, double v)
{
    if (!times.empty() && !(t > times.back())) throw ValidationError("MetricSeries times must be strictly increasing");
    times.push_back(t);
    values.push_back(v);
}

} // namespace kramers
