#include "graphss/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace graphss {

void BaselineConfig::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("baseline config: alpha must be positive");
    if (max_iters == 0) throw std::invalid_argument("baseline config: max_iters must be at least 1");
    if (frame_len == 0 || frame_len % 2 != 0) throw std::invalid_argument("baseline config: frame_len must be even");
    if (fft_len != frame_len)
        throw std::invalid_argument("baseline config: fft_len " + std::to_string(fft_len) +
                                    " must equal frame_len " + std::to_string(frame_len));
    if (noise_frames == 0) throw std::invalid_argument("baseline config: noise_frames must be at least 1");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("baseline config: overlap must be in [0, 1)");
    if (!(floor >= 0.0)) throw std::invalid_argument("baseline config: floor must be nonnegative");
    frame_plan().validate();
}

FramePlan BaselineConfig::frame_plan() const {
    FramePlan plan;
    plan.frame_len = frame_len;
    plan.hop = static_cast<std::size_t>(std::llround(static_cast<double>(frame_len) * (1.0 - overlap)));
    plan.window = window;
    return plan;
}

EnhancementConfig BaselineConfig::as_enhancement_config() const {
    EnhancementConfig c;
    c.frame_len = frame_len;
    c.overlap = overlap;
    c.alpha = alpha;
    c.max_iters = max_iters;
    c.noise_region = NoiseRegion::leading_frames(noise_frames);
    c.floor = floor;
    c.threads = threads;
    return c;
}

FourierFrameTransform::FourierFrameTransform(std::size_t n) : n_(n), fft_(std::make_shared<FftKernel>(n)) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("fourier transform: length must be even");
}

void FourierFrameTransform::forward(std::span<const double> frame, std::span<Complex> spectrum) const {
    if (frame.size() != n_ || spectrum.size() != n_)
        throw std::invalid_argument("fourier transform: frame length mismatch");
    std::transform(frame.begin(), frame.end(), spectrum.begin(), [](double x) { return Complex(x, 0.0); });
    fft_->forward(spectrum, spectrum);
}

double FourierFrameTransform::inverse(std::span<const Complex> spectrum, std::span<double> frame) const {
    if (frame.size() != n_ || spectrum.size() != n_)
        throw std::invalid_argument("fourier transform: frame length mismatch");
    thread_local std::vector<Complex> values;
    values.resize(n_);
    fft_->backward(spectrum, values);
    const double scale = 1.0 / static_cast<double>(n_);
    double residue = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        frame[j] = values[j].real() * scale;
        residue = std::max(residue, std::abs(values[j].imag() * scale));
    }
    if (!(residue < kImaginaryResidueTolerance)) throw ImaginaryResidueError(residue);
    return residue;
}

namespace {

void require_one_frame(std::span<const double> signal, std::size_t frame_len) {
    if (signal.size() < frame_len)
        throw std::invalid_argument("signal of " + std::to_string(signal.size()) + " samples is shorter than one " +
                                    std::to_string(frame_len) + "-sample frame");
}

std::vector<double> bss_pass(const FourierFrameTransform& transform, std::span<const double> signal,
                             const BaselineConfig& config, PassReport* report) {
    const FramePlan plan = config.frame_plan();
    const auto frames = segment(signal, plan);
    const auto region = NoiseRegion::leading_frames(config.noise_frames).frame_indices(plan, signal.size());
    const NoiseProfile profile = average_noise_profile(transform, frames, region);
    return subtraction_pass(transform, signal, plan, profile, config.floor, config.threads, report);
}

}  // namespace

std::vector<double> bss(std::span<const double> signal, const BaselineConfig& config, PassReport* report) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const FourierFrameTransform transform(config.fft_len);
    return bss_pass(transform, signal, config, report);
}

std::vector<double> bss_with_profile(std::span<const double> signal, const BaselineConfig& config,
                                     const NoiseProfile& profile, PassReport* report) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const FourierFrameTransform transform(config.fft_len);
    return subtraction_pass(transform, signal, config.frame_plan(), profile, config.floor, config.threads, report);
}

EnhancementResult ibss(std::span<const double> signal, const BaselineConfig& config) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const FourierFrameTransform transform(config.fft_len);
    const EnhancementConfig level_config = config.as_enhancement_config();
    return iterate_while_noisy(
        signal, config.alpha, config.max_iters,
        [&](std::span<const double> s) { return noise_level(s, level_config); },
        [&](std::span<const double> s) { return bss_pass(transform, s, config, nullptr); });
}

}  // namespace graphss
