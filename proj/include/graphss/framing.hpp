#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphss {

enum class Window { Rectangular, Hamming };

const char* to_string(Window window);

/// Fixed-length framing with zero padding of the final partial frame.
struct FramePlan {
    std::size_t frame_len = 256;
    std::size_t hop = 128;
    Window window = Window::Rectangular;

    /// Throws std::invalid_argument unless 0 < hop <= frame_len.
    void validate() const;
    /// Number of frames covering len samples: ceil(len / hop).
    std::size_t frame_count(std::size_t len) const;
};

using Frame = std::vector<double>;

/// Window coefficients for the plan (all ones for rectangular; symmetric Hamming).
std::vector<double> window_coefficients(const FramePlan& plan);

/// Frame m covers samples [m * hop, m * hop + frame_len), zero padded past the end,
/// multiplied by the window.
std::vector<Frame> segment(std::span<const double> signal, const FramePlan& plan);

/// Adds frame m at offset m * hop and divides each sample by the window sum
/// accumulated at that position, then truncates to out_len.
std::vector<double> overlap_add(std::span<const Frame> frames, const FramePlan& plan, std::size_t out_len);

}  // namespace graphss
