#include "graphss/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace graphss {

NoiseRegion NoiseRegion::leading_frames(std::size_t count) {
    NoiseRegion r;
    r.leading_ = true;
    r.count_ = count;
    return r;
}

NoiseRegion NoiseRegion::samples(std::size_t begin, std::size_t end) {
    NoiseRegion r;
    r.leading_ = false;
    r.begin_ = begin;
    r.end_ = end;
    return r;
}

std::vector<std::size_t> NoiseRegion::frame_indices(const FramePlan& plan, std::size_t signal_len) const {
    const std::size_t available = plan.frame_count(signal_len);
    std::vector<std::size_t> out;
    if (leading_) {
        if (count_ == 0) throw std::invalid_argument("noise region: zero frames");
        if (count_ > available)
            throw std::invalid_argument("noise region: " + std::to_string(count_) + " frames requested, signal has " +
                                        std::to_string(available));
        for (std::size_t m = 0; m < count_; ++m) out.push_back(m);
        return out;
    }
    for (std::size_t m = 0; m < available; ++m) {
        const std::size_t start = m * plan.hop;
        if (start >= begin_ && start + plan.frame_len <= end_) out.push_back(m);
    }
    if (out.empty())
        throw std::invalid_argument("noise region: no whole frame inside samples [" + std::to_string(begin_) + ", " +
                                    std::to_string(end_) + ")");
    return out;
}

std::pair<std::size_t, std::size_t> NoiseRegion::sample_range(const FramePlan& plan, std::size_t signal_len) const {
    std::size_t b = 0;
    std::size_t e = 0;
    if (leading_) {
        if (count_ == 0) throw std::invalid_argument("noise region: zero frames");
        e = (count_ - 1) * plan.hop + plan.frame_len;
    } else {
        b = begin_;
        e = end_;
    }
    e = std::min(e, signal_len);
    if (b >= e) throw std::invalid_argument("noise region: empty sample range");
    return {b, e};
}

void EnhancementConfig::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be positive");
    if (max_iters == 0) throw std::invalid_argument("config: max_iters must be at least 1");
    if (frame_len == 0 || frame_len % 2 != 0) throw std::invalid_argument("config: frame_len must be even");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("config: overlap must be in [0, 1)");
    if (!(floor >= 0.0)) throw std::invalid_argument("config: floor must be nonnegative");
    frame_plan().validate();
    CombinedShiftOperator(frame_len, k);  // validates k
}

FramePlan EnhancementConfig::frame_plan() const {
    FramePlan plan;
    plan.frame_len = frame_len;
    plan.hop = static_cast<std::size_t>(std::llround(static_cast<double>(frame_len) * (1.0 - overlap)));
    plan.window = Window::Rectangular;
    return plan;
}

GraphFrameTransform::GraphFrameTransform(GftBasis basis) : basis_(std::move(basis)) {
    if (basis_.kind() != BasisKind::CirculantClosedForm)
        throw std::invalid_argument(std::string("graph subtraction needs a circulant basis, got ") +
                                    to_string(basis_.kind()));
    if (basis_.n() % 2 != 0) throw std::invalid_argument("graph subtraction needs an even frame length");
}

void GraphFrameTransform::forward(std::span<const double> frame, std::span<Complex> spectrum) const {
    basis_.forward(frame, spectrum);
}

double GraphFrameTransform::inverse(std::span<const Complex> spectrum, std::span<double> frame) const {
    thread_local std::vector<Complex> values;
    values.resize(basis_.n());
    basis_.inverse(spectrum, values);
    double residue = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        frame[i] = values[i].real();
        residue = std::max(residue, std::abs(values[i].imag()));
    }
    if (!(residue < kImaginaryResidueTolerance)) throw ImaginaryResidueError(residue);
    return residue;
}

NoiseProfile average_noise_profile(const FrameTransform& transform, std::span<const Frame> frames,
                                   std::span<const std::size_t> region) {
    if (region.empty()) throw std::invalid_argument("noise profile: empty region");
    const std::size_t n = transform.frame_len();
    NoiseProfile profile;
    profile.magnitudes.assign(n / 2 + 1, 0.0);
    std::vector<Complex> spectrum(n);
    for (const std::size_t m : region) {
        if (m >= frames.size())
            throw std::invalid_argument("noise profile: frame index " + std::to_string(m) + " out of range");
        transform.forward(frames[m], spectrum);
        for (std::size_t b = 0; b < profile.magnitudes.size(); ++b) profile.magnitudes[b] += std::abs(spectrum[b]);
    }
    for (auto& v : profile.magnitudes) v /= static_cast<double>(region.size());
    profile.source_frames = region.size();
    return profile;
}

std::vector<double> spectral_subtract(std::span<const double> noisy_mags, const NoiseProfile& profile, double floor) {
    if (noisy_mags.size() != profile.magnitudes.size())
        throw std::invalid_argument("spectral_subtract: " + std::to_string(noisy_mags.size()) + " bins vs profile of " +
                                    std::to_string(profile.magnitudes.size()));
    std::vector<double> out(noisy_mags.size());
    for (std::size_t b = 0; b < out.size(); ++b) out[b] = std::max(noisy_mags[b] - profile.magnitudes[b], floor);
    return out;
}

void apply_half_magnitudes(std::span<Complex> spectrum, std::span<const double> magnitudes) {
    const std::size_t n = spectrum.size();
    if (magnitudes.size() != n / 2 + 1) throw std::invalid_argument("apply_half_magnitudes: size mismatch");
    for (std::size_t m = 0; m < n; ++m) {
        const double target = magnitudes[std::min(m, n - m)];
        const double current = std::sqrt(std::norm(spectrum[m]));
        spectrum[m] = current > 0.0 ? spectrum[m] * (target / current) : Complex(target, 0.0);
    }
}

std::vector<double> subtraction_pass(const FrameTransform& transform, std::span<const double> signal,
                                     const FramePlan& plan, const NoiseProfile& profile, double floor,
                                     std::size_t threads, PassReport* report) {
    const std::size_t n = transform.frame_len();
    if (plan.frame_len != n) throw std::invalid_argument("subtraction pass: frame length does not match transform");
    if (profile.magnitudes.size() != n / 2 + 1)
        throw std::invalid_argument("subtraction pass: profile has " + std::to_string(profile.magnitudes.size()) +
                                    " bins, expected " + std::to_string(n / 2 + 1));
    std::vector<Frame> frames = segment(signal, plan);
    std::vector<double> residues(frames.size(), 0.0);

    auto process = [&](std::size_t first, std::size_t last) {
        std::vector<Complex> spectrum(n);
        std::vector<double> mags(n / 2 + 1);
        for (std::size_t m = first; m < last; ++m) {
            transform.forward(frames[m], spectrum);
            for (std::size_t b = 0; b < mags.size(); ++b)
                mags[b] = std::max(std::sqrt(std::norm(spectrum[b])) - profile.magnitudes[b], floor);
            apply_half_magnitudes(spectrum, mags);
            residues[m] = transform.inverse(spectrum, frames[m]);
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(frames.size(), 1));
    if (workers == 1) {
        process(0, frames.size());
    } else {
        const std::size_t chunk = (frames.size() + workers - 1) / workers;
        std::vector<std::exception_ptr> failures(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t first = w * chunk;
                const std::size_t last = std::min(frames.size(), first + chunk);
                if (first >= last) continue;
                pool.emplace_back([&, w, first, last] {
                    try {
                        process(first, last);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    if (report) {
        report->frames = frames.size();
        report->max_imaginary_residue = residues.empty() ? 0.0 : *std::max_element(residues.begin(), residues.end());
    }
    return overlap_add(frames, plan, signal.size());
}

NoiseProfile estimate_noise_profile(std::span<const GraphSignalFrame> frames, const GftBasis& basis,
                                    std::span<const std::size_t> region) {
    const GraphFrameTransform transform(basis);
    std::vector<Frame> raw;
    raw.reserve(frames.size());
    for (const auto& f : frames) raw.emplace_back(f.values().begin(), f.values().end());
    return average_noise_profile(transform, raw, region);
}

GraphSpectrum subtract_frame(const GftBasis& basis, std::span<const double> frame, const NoiseProfile& profile,
                             double floor) {
    HalfSpectrum half = half_spectrum(gft(basis, frame));
    half.magnitudes = spectral_subtract(half.magnitudes, profile, floor);
    return expand_half(half, basis.n());
}

GftBasis enhancement_basis(const EnhancementConfig& config) {
    GftBasis basis = basis_circulant(config.frame_len, config.k, config.basis_options);
    return config.path == TransformPath::DenseMatrix ? basis.with_matrix_kernel() : basis;
}

namespace {

void require_one_frame(std::span<const double> signal, std::size_t frame_len) {
    if (signal.size() < frame_len)
        throw std::invalid_argument("signal of " + std::to_string(signal.size()) + " samples is shorter than one " +
                                    std::to_string(frame_len) + "-sample frame");
}

std::vector<double> gss_pass(const GraphFrameTransform& transform, std::span<const double> signal,
                             const EnhancementConfig& config, PassReport* report) {
    const FramePlan plan = config.frame_plan();
    const auto frames = segment(signal, plan);
    const auto region = config.noise_region.frame_indices(plan, signal.size());
    const NoiseProfile profile = average_noise_profile(transform, frames, region);
    return subtraction_pass(transform, signal, plan, profile, config.floor, config.threads, report);
}

}  // namespace

std::vector<double> gss(std::span<const double> signal, const EnhancementConfig& config, PassReport* report) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const GraphFrameTransform transform(enhancement_basis(config));
    return gss_pass(transform, signal, config, report);
}

std::vector<double> gss_with_profile(std::span<const double> signal, const EnhancementConfig& config,
                                     const NoiseProfile& profile, PassReport* report) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const GraphFrameTransform transform(enhancement_basis(config));
    return subtraction_pass(transform, signal, config.frame_plan(), profile, config.floor, config.threads, report);
}

double noise_level(std::span<const double> signal, const EnhancementConfig& config) {
    const auto [b, e] = config.noise_region.sample_range(config.frame_plan(), signal.size());
    double sum = 0.0;
    for (std::size_t i = b; i < e; ++i) sum += std::abs(signal[i]);
    return sum / static_cast<double>(e - b);
}

EnhancementResult iterate_while_noisy(std::span<const double> signal, double alpha, std::size_t max_iters,
                                      const std::function<double(std::span<const double>)>& level,
                                      const std::function<std::vector<double>(std::span<const double>)>& pass) {
    EnhancementResult result;
    result.samples.assign(signal.begin(), signal.end());
    double current = level(result.samples);
    result.noise_levels.push_back(current);
    while (current >= alpha && result.iterations < max_iters) {
        result.samples = pass(result.samples);
        ++result.iterations;
        current = level(result.samples);
        result.noise_levels.push_back(current);
    }
    return result;
}

EnhancementResult igss(std::span<const double> signal, const EnhancementConfig& config) {
    config.validate();
    require_one_frame(signal, config.frame_len);
    const GraphFrameTransform transform(enhancement_basis(config));
    return iterate_while_noisy(
        signal, config.alpha, config.max_iters,
        [&](std::span<const double> s) { return noise_level(s, config); },
        [&](std::span<const double> s) { return gss_pass(transform, s, config, nullptr); });
}

}  // namespace graphss
