#include "graphss/framing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace graphss {

const char* to_string(Window window) {
    return window == Window::Hamming ? "hamming" : "rectangular";
}

void FramePlan::validate() const {
    if (frame_len == 0) throw std::invalid_argument("frame plan: frame_len must be positive");
    if (hop == 0 || hop > frame_len)
        throw std::invalid_argument("frame plan: hop " + std::to_string(hop) + " outside (0, " +
                                    std::to_string(frame_len) + "]");
}

std::size_t FramePlan::frame_count(std::size_t len) const { return (len + hop - 1) / hop; }

std::vector<double> window_coefficients(const FramePlan& plan) {
    plan.validate();
    std::vector<double> w(plan.frame_len, 1.0);
    if (plan.window == Window::Hamming && plan.frame_len > 1) {
        const double denom = static_cast<double>(plan.frame_len - 1);
        for (std::size_t i = 0; i < plan.frame_len; ++i)
            w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    }
    return w;
}

std::vector<Frame> segment(std::span<const double> signal, const FramePlan& plan) {
    plan.validate();
    if (signal.empty()) throw std::invalid_argument("segment: empty signal");
    const auto w = window_coefficients(plan);
    const std::size_t count = plan.frame_count(signal.size());
    std::vector<Frame> frames(count, Frame(plan.frame_len, 0.0));
    for (std::size_t m = 0; m < count; ++m) {
        const std::size_t start = m * plan.hop;
        const std::size_t avail = std::min(plan.frame_len, signal.size() - start);
        for (std::size_t i = 0; i < avail; ++i) frames[m][i] = signal[start + i] * w[i];
    }
    return frames;
}

std::vector<double> overlap_add(std::span<const Frame> frames, const FramePlan& plan, std::size_t out_len) {
    plan.validate();
    const auto w = window_coefficients(plan);
    const std::size_t total = frames.empty() ? 0 : (frames.size() - 1) * plan.hop + plan.frame_len;
    std::vector<double> acc(std::max(total, out_len), 0.0);
    std::vector<double> weight(acc.size(), 0.0);
    for (std::size_t m = 0; m < frames.size(); ++m) {
        if (frames[m].size() != plan.frame_len)
            throw std::invalid_argument("overlap_add: frame " + std::to_string(m) + " has length " +
                                        std::to_string(frames[m].size()));
        const std::size_t start = m * plan.hop;
        for (std::size_t i = 0; i < plan.frame_len; ++i) {
            acc[start + i] += frames[m][i];
            weight[start + i] += w[i];
        }
    }
    acc.resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i)
        if (weight[i] > 0.0) acc[i] /= weight[i];
    return acc;
}

}  // namespace graphss
