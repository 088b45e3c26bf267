#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace graphss {

class WavError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AudioBuffer {
    std::vector<double> samples;
    unsigned sample_rate = 16000;
};

struct WavReadOptions {
    /// Average multichannel input to mono instead of rejecting it.
    bool downmix = false;
};

/// Reads RIFF/WAVE linear PCM16 or IEEE float32. PCM16 samples are scaled by 1/32768.
AudioBuffer read_wav(const std::filesystem::path& path, WavReadOptions options = {});

struct WavWriteStats {
    /// Samples that saturated during quantization.
    std::size_t clipped = 0;
};

/// Writes PCM16 little-endian mono. Samples are clamped to [-1, 1], scaled by 32768,
/// rounded half away from zero and saturated to the int16 range.
WavWriteStats write_wav(const std::filesystem::path& path, const AudioBuffer& buffer);

/// The int16 value write_wav stores for a sample.
std::int16_t quantize_pcm16(double sample);

}  // namespace graphss
