#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "graphss/framing.hpp"
#include "graphss/gft.hpp"
#include "graphss/graph.hpp"

namespace graphss {

/// Portion of a signal designated as non-speech. Either the first `count` frames
/// or an explicit sample range [begin, end).
class NoiseRegion {
public:
    static NoiseRegion leading_frames(std::size_t count);
    static NoiseRegion samples(std::size_t begin, std::size_t end);

    bool is_leading_frames() const { return leading_; }
    std::size_t frame_count() const { return count_; }
    std::size_t begin() const { return begin_; }
    std::size_t end() const { return end_; }

    /// Frames lying entirely inside the region. Throws when the set is empty or
    /// refers to frames the signal does not have.
    std::vector<std::size_t> frame_indices(const FramePlan& plan, std::size_t signal_len) const;
    /// Sample span of the region, clipped to the signal. Throws when empty.
    std::pair<std::size_t, std::size_t> sample_range(const FramePlan& plan, std::size_t signal_len) const;

private:
    bool leading_ = true;
    std::size_t count_ = 5;
    std::size_t begin_ = 0;
    std::size_t end_ = 0;
};

/// How frames are moved in and out of the graph frequency domain.
enum class TransformPath {
    Fast,         ///< closed-form circulant basis with FFT kernels
    DenseMatrix,  ///< the same basis applied through dense matrix-vector products
};

struct EnhancementConfig {
    std::size_t k = 3;
    std::size_t frame_len = 256;
    double overlap = 0.5;
    /// Noise threshold on the mean absolute amplitude of the noise region.
    double alpha = 1e-5;
    std::size_t max_iters = 30;
    NoiseRegion noise_region = NoiseRegion::leading_frames(5);
    double floor = 0.0;
    TransformPath path = TransformPath::Fast;
    BasisOptions basis_options{};
    /// Worker threads for the per-frame stage of a pass; 1 runs inline.
    std::size_t threads = 1;

    /// Throws std::invalid_argument on alpha <= 0, max_iters == 0, odd frame_len,
    /// or an overlap that leaves no hop.
    void validate() const;
    FramePlan frame_plan() const;
};

/// Averaged half-spectrum noise magnitudes from the non-speech region.
struct NoiseProfile {
    std::vector<double> magnitudes;
    std::size_t source_frames = 0;
};

/// Per-frame transform between real samples and a conjugate-symmetric spectrum in
/// which bin m pairs with bin n - m. Implemented by the circulant graph Fourier basis
/// and by the ordinary DFT.
class FrameTransform {
public:
    virtual ~FrameTransform() = default;
    virtual std::size_t frame_len() const = 0;
    virtual void forward(std::span<const double> frame, std::span<Complex> spectrum) const = 0;
    /// Real part of the inverse; returns the largest discarded imaginary part.
    /// Throws ImaginaryResidueError above kImaginaryResidueTolerance.
    virtual double inverse(std::span<const Complex> spectrum, std::span<double> frame) const = 0;
};

/// Graph Fourier transform over a circulant basis.
class GraphFrameTransform final : public FrameTransform {
public:
    explicit GraphFrameTransform(GftBasis basis);
    std::size_t frame_len() const override { return basis_.n(); }
    void forward(std::span<const double> frame, std::span<Complex> spectrum) const override;
    double inverse(std::span<const Complex> spectrum, std::span<double> frame) const override;
    const GftBasis& basis() const { return basis_; }

private:
    GftBasis basis_;
};

struct PassReport {
    std::size_t frames = 0;
    double max_imaginary_residue = 0.0;
};

/// Mean of the half-spectrum magnitudes of frames[i] for i in region.
NoiseProfile average_noise_profile(const FrameTransform& transform, std::span<const Frame> frames,
                                   std::span<const std::size_t> region);

/// Rescales every bin of a full spectrum so that |spectrum[m]| becomes
/// magnitudes[min(m, n - m)] while its phase is kept. Zero bins take phase 0.
void apply_half_magnitudes(std::span<Complex> spectrum, std::span<const double> magnitudes);

/// One spectral-subtraction pass: segment, subtract the profile from every frame's
/// magnitudes with the noisy phases kept, overlap-add to the input length.
std::vector<double> subtraction_pass(const FrameTransform& transform, std::span<const double> signal,
                                     const FramePlan& plan, const NoiseProfile& profile, double floor,
                                     std::size_t threads, PassReport* report = nullptr);

NoiseProfile estimate_noise_profile(std::span<const GraphSignalFrame> frames, const GftBasis& basis,
                                    std::span<const std::size_t> region);

/// out[b] = max(noisy[b] - profile[b], floor)
std::vector<double> spectral_subtract(std::span<const double> noisy_mags, const NoiseProfile& profile,
                                      double floor);

/// Enhanced graph spectrum of one frame: magnitudes reduced by the profile, phases untouched.
GraphSpectrum subtract_frame(const GftBasis& basis, std::span<const double> frame, const NoiseProfile& profile,
                             double floor);

/// The basis GSS uses for a config (closed-form circulant, optionally on matrix kernels).
GftBasis enhancement_basis(const EnhancementConfig& config);

/// Graph spectral subtraction with the noise profile estimated from config.noise_region.
std::vector<double> gss(std::span<const double> signal, const EnhancementConfig& config,
                        PassReport* report = nullptr);
/// Graph spectral subtraction with a caller-supplied profile.
std::vector<double> gss_with_profile(std::span<const double> signal, const EnhancementConfig& config,
                                     const NoiseProfile& profile, PassReport* report = nullptr);

/// Mean absolute amplitude over the noise region.
double noise_level(std::span<const double> signal, const EnhancementConfig& config);

struct EnhancementResult {
    std::vector<double> samples;
    std::size_t iterations = 0;
    /// noise_level after each completed pass, preceded by the initial level.
    std::vector<double> noise_levels;
};

/// Shared iteration loop: while level(current) >= alpha and fewer than max_iters
/// passes ran, current = pass(current).
EnhancementResult iterate_while_noisy(std::span<const double> signal, double alpha, std::size_t max_iters,
                                      const std::function<double(std::span<const double>)>& level,
                                      const std::function<std::vector<double>(std::span<const double>)>& pass);

/// Iterative GSS: repeats noise re-estimation plus one GSS pass while the noise level
/// is at least alpha, up to max_iters passes.
EnhancementResult igss(std::span<const double> signal, const EnhancementConfig& config);

}  // namespace graphss
