#include "espde/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace espde {

double WindowAverage::mean() const {
    if (!ready()) throw std::runtime_error("window average: buffer does not span the period yet");
    const double t_end = samples_.back().first;
    const double t_start = t_end - period_;
    double acc = 0.0;
    bool started = false;
    double prev_t = 0.0, prev_v = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        auto [t, v] = samples_[i];
        if (t <= t_start) {
            // interpolate the value exactly at the trailing edge
            if (i + 1 < samples_.size() && samples_[i + 1].first > t_start) {
                const auto& [t1, v1] = samples_[i + 1];
                const double frac = (t_start - t) / (t1 - t);
                prev_t = t_start;
                prev_v = v + frac * (v1 - v);
                started = true;
            }
            continue;
        }
        if (!started) {  // window started exactly at the first sample
            prev_t = t;
            prev_v = v;
            started = true;
            continue;
        }
        acc += 0.5 * (prev_v + v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
    }
    return acc / period_;
}

} // namespace espde
