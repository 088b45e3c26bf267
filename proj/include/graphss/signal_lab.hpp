#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace graphss {

enum class Method { None, Gss, Igss, Bss, Ibss };

const char* to_string(Method method);
/// Parses "none", "gss", "igss", "bss" or "ibss"; nullopt otherwise.
std::optional<Method> parse_method(const std::string& name);

/// One evaluated clip. Decibel fields are +inf when estimate and reference are identical.
struct SnrReport {
    std::string clip_id;
    Method method = Method::None;
    double input_snr_db = 0.0;
    double output_snr_db = 0.0;
    std::size_t iterations = 0;
};

struct MixResult {
    std::vector<double> noisy;
    double scale = 0.0;
};

/// Mean square of the samples.
double mean_power(std::span<const double> samples);

/// noisy = speech + scale * noise[0 .. speech.size()), with
/// scale = sqrt(P_speech / (P_noise * 10^(target_db / 10))). target_db = +inf gives scale 0.
/// Throws std::invalid_argument on silent inputs or noise shorter than the speech.
MixResult mix_at_snr(std::span<const double> speech, std::span<const double> noise, double target_db);

/// 10 log10(sum ref^2 / sum (est - ref)^2); +inf when the residual is exactly zero.
double snr(std::span<const double> reference, std::span<const double> estimate);

/// Zero-mean, unit-variance Gaussian samples; a pure function of (n, seed).
std::vector<double> gen_white_noise(std::size_t n, std::uint64_t seed);

/// Zero-mean, unit-variance 1/f noise from white noise through a bank of first-order
/// low-pass sections (about -3 dB per octave).
std::vector<double> gen_pink_noise(std::size_t n, std::uint64_t seed);

/// Leading silent samples in a gen_tone_speech clip at the given rate.
std::size_t tone_speech_silence(double rate);

/// Synthetic voiced-like clip: silence, then an amplitude-modulated low-harmonic tone
/// mixture with most of its energy below 1 kHz. Peak amplitude 0.5.
std::vector<double> gen_tone_speech(double duration_s, double rate, std::uint64_t seed);

}  // namespace graphss
