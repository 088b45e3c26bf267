#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "graphss/enhance.hpp"
#include "graphss/fft.hpp"
#include "graphss/framing.hpp"

namespace graphss {

/// Basic spectral subtraction on the ordinary Fourier transform.
struct BaselineConfig {
    std::size_t frame_len = 256;
    double overlap = 0.5;
    Window window = Window::Hamming;
    std::size_t fft_len = 256;
    std::size_t noise_frames = 5;
    double alpha = 1e-5;
    std::size_t max_iters = 30;
    double floor = 0.0;
    std::size_t threads = 1;

    void validate() const;
    FramePlan frame_plan() const;
    /// The equivalent enhancement config, used for the shared noise-level rule.
    EnhancementConfig as_enhancement_config() const;
};

/// Unnormalized DFT: X[m] = sum_j x_j exp(-2 pi i j m / n); the inverse divides by n.
class FourierFrameTransform final : public FrameTransform {
public:
    explicit FourierFrameTransform(std::size_t n);
    std::size_t frame_len() const override { return n_; }
    void forward(std::span<const double> frame, std::span<Complex> spectrum) const override;
    double inverse(std::span<const Complex> spectrum, std::span<double> frame) const override;

private:
    std::size_t n_;
    std::shared_ptr<const FftKernel> fft_;
};

std::vector<double> bss(std::span<const double> signal, const BaselineConfig& config, PassReport* report = nullptr);
std::vector<double> bss_with_profile(std::span<const double> signal, const BaselineConfig& config,
                                     const NoiseProfile& profile, PassReport* report = nullptr);

/// Iterative BSS with the same stopping rule as IGSS.
EnhancementResult ibss(std::span<const double> signal, const BaselineConfig& config);

}  // namespace graphss
