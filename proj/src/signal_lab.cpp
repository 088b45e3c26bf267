#include "graphss/signal_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace graphss {

const char* to_string(Method method) {
    switch (method) {
        case Method::None: return "none";
        case Method::Gss: return "gss";
        case Method::Igss: return "igss";
        case Method::Bss: return "bss";
        case Method::Ibss: return "ibss";
    }
    return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
    for (Method m : {Method::None, Method::Gss, Method::Igss, Method::Bss, Method::Ibss})
        if (name == to_string(m)) return m;
    return std::nullopt;
}

double mean_power(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (double x : samples) sum += x * x;
    return sum / static_cast<double>(samples.size());
}

MixResult mix_at_snr(std::span<const double> speech, std::span<const double> noise, double target_db) {
    if (speech.empty()) throw std::invalid_argument("mix: empty speech");
    if (noise.size() < speech.size())
        throw std::invalid_argument("mix: noise (" + std::to_string(noise.size()) +
                                    " samples) is shorter than speech (" + std::to_string(speech.size()) + ")");
    if (std::isnan(target_db)) throw std::invalid_argument("mix: target SNR is NaN");
    const auto noise_part = noise.first(speech.size());
    const double ps = mean_power(speech);
    const double pn = mean_power(noise_part);
    if (ps == 0.0) throw std::invalid_argument("mix: speech is silent");
    if (pn == 0.0) throw std::invalid_argument("mix: noise is silent");

    MixResult out;
    out.scale = std::isinf(target_db) && target_db > 0 ? 0.0 : std::sqrt(ps / (pn * std::pow(10.0, target_db / 10.0)));
    out.noisy.resize(speech.size());
    for (std::size_t i = 0; i < speech.size(); ++i) out.noisy[i] = speech[i] + out.scale * noise_part[i];
    return out;
}

double snr(std::span<const double> reference, std::span<const double> estimate) {
    if (reference.size() != estimate.size())
        throw std::invalid_argument("snr: length mismatch (" + std::to_string(reference.size()) + " vs " +
                                    std::to_string(estimate.size()) + ")");
    double signal = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        signal += reference[i] * reference[i];
        const double e = estimate[i] - reference[i];
        error += e * e;
    }
    if (signal == 0.0) throw std::invalid_argument("snr: silent reference");
    if (error == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / error);
}

std::vector<double> gen_white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) x = dist(rng);
    return out;
}

namespace {

// Paul Kellet's refined pink filter: six leaky integrators plus a direct path and a
// one-sample-delayed tap, accurate to about 0.05 dB above 1e-4 of the sample rate.
constexpr std::array<double, 6> kPole = {0.99886, 0.99332, 0.96900, 0.86650, 0.55000, -0.7616};
constexpr std::array<double, 6> kGain = {0.0555179, 0.0750759, 0.1538520, 0.3104856, 0.5329522, -0.0168980};
constexpr double kDirect = 0.5362;
constexpr double kDelayed = 0.115926;
constexpr std::size_t kPinkBurnIn = 1 << 14;

// Output variance of the filter for unit-variance white input (sum of the squared
// impulse response).
double pink_filter_variance() {
    std::array<double, 6> power{};
    std::fill(power.begin(), power.end(), 1.0);
    double sum = 0.0;
    for (std::size_t t = 0; t < 200000; ++t) {
        double h = t == 0 ? kDirect : t == 1 ? kDelayed : 0.0;
        for (std::size_t i = 0; i < kPole.size(); ++i) {
            h += kGain[i] * power[i];
            power[i] *= kPole[i];
        }
        sum += h * h;
    }
    return sum;
}

}  // namespace

std::vector<double> gen_pink_noise(std::size_t n, std::uint64_t seed) {
    static const double scale = 1.0 / std::sqrt(pink_filter_variance());
    const auto white = gen_white_noise(n + kPinkBurnIn, seed);
    std::array<double, 6> state{};
    double delayed = 0.0;
    std::vector<double> out(n);
    for (std::size_t t = 0; t < white.size(); ++t) {
        const double w = white[t];
        double y = kDirect * w + delayed;
        for (std::size_t i = 0; i < state.size(); ++i) {
            state[i] = kPole[i] * state[i] + kGain[i] * w;
            y += state[i];
        }
        delayed = kDelayed * w;
        if (t >= kPinkBurnIn) out[t - kPinkBurnIn] = y * scale;
    }
    return out;
}

std::size_t tone_speech_silence(double rate) {
    return std::max<std::size_t>(6 * 256, static_cast<std::size_t>(std::llround(0.1 * rate)));
}

std::vector<double> gen_tone_speech(double duration_s, double rate, std::uint64_t seed) {
    if (!(duration_s >= 0.5)) throw std::invalid_argument("gen_tone_speech: duration must be at least 0.5 s");
    if (!(rate > 0.0)) throw std::invalid_argument("gen_tone_speech: rate must be positive");
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
    const std::size_t silence = tone_speech_silence(rate);
    std::vector<double> out(n, 0.0);
    if (silence >= n) return out;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double f0 = 110.0 + 110.0 * uniform(rng);
    const double syllable_rate = 3.0 + 2.0 * uniform(rng);
    const double vibrato_rate = 4.0 + 2.0 * uniform(rng);
    constexpr std::size_t kHarmonics = 6;
    std::array<double, kHarmonics> harmonic_phase{};
    for (auto& p : harmonic_phase) p = 2.0 * std::numbers::pi * uniform(rng);

    constexpr double two_pi = 2.0 * std::numbers::pi;
    double phase = 0.0;
    double peak = 0.0;
    for (std::size_t i = silence; i < n; ++i) {
        const double t = static_cast<double>(i - silence) / rate;
        const double f = f0 * (1.0 + 0.02 * std::sin(two_pi * vibrato_rate * t));
        phase += two_pi * f / rate;
        double voiced = 0.0;
        for (std::size_t h = 1; h <= kHarmonics; ++h) {
            const double hd = static_cast<double>(h);
            voiced += std::sin(hd * phase + harmonic_phase[h - 1]) / (hd * hd);
        }
        // Syllable-like envelope that starts from zero at the end of the silence.
        const double envelope = 0.5 * (1.0 - std::cos(two_pi * syllable_rate * t));
        out[i] = envelope * voiced;
        peak = std::max(peak, std::abs(out[i]));
    }
    if (peak > 0.0)
        for (auto& x : out) x *= 0.5 / peak;
    return out;
}

}  // namespace graphss
