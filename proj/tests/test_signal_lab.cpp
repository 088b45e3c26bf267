#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "graphss/signal_lab.hpp"
#include "oracles.hpp"

using namespace graphss;

namespace {

double brute_power(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

}  // namespace

TEST(Method, ParseAndPrint) {
    for (Method m : {Method::None, Method::Gss, Method::Igss, Method::Bss, Method::Ibss})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("wiener").has_value());
}

TEST(Mix, EqualPowersZeroDbGivesUnitScale) {
    const std::vector<double> speech{1, -1, 1, -1};
    const std::vector<double> noise{-1, -1, 1, 1, 5};
    const MixResult r = mix_at_snr(speech, noise, 0.0);
    EXPECT_NEAR(r.scale, 1.0, 1e-15);
    EXPECT_EQ(r.noisy, (std::vector<double>{0, -2, 2, 0}));
}

TEST(Mix, InfiniteTargetBypasses) {
    const std::vector<double> speech{0.5, -0.25, 0.125};
    const MixResult r = mix_at_snr(speech, std::vector<double>{1, 1, 1}, std::numeric_limits<double>::infinity());
    EXPECT_EQ(r.scale, 0.0);
    EXPECT_EQ(r.noisy, speech);
}

TEST(Mix, QuarterScaleExample) {
    const std::vector<double> speech{1, -1, 1, -1, 1, -1};
    const std::vector<double> noise{2, 2, -2, -2, 2, -2};
    ASSERT_EQ(brute_power(speech), 1.0);
    ASSERT_EQ(brute_power(noise), 4.0);
    // Closed form: sqrt(1 / (4 * 10^0.60206)).
    const double expected = std::sqrt(1.0 / (4.0 * std::pow(10.0, 0.60206)));
    const MixResult r = mix_at_snr(speech, noise, 6.0206);
    EXPECT_NEAR(r.scale, expected, 1e-15);
    EXPECT_NEAR(r.scale, 0.25, 1e-6);
}

TEST(Mix, Errors) {
    const std::vector<double> x{1, 2, 3};
    EXPECT_THROW(mix_at_snr(std::vector<double>{0, 0, 0}, x, 0.0), std::invalid_argument);
    EXPECT_THROW(mix_at_snr(x, std::vector<double>{0, 0, 0}, 0.0), std::invalid_argument);
    EXPECT_THROW(mix_at_snr(x, std::vector<double>{1, 2}, 0.0), std::invalid_argument);
}

TEST(Mix, GridExactness) {
    const auto speech = gen_tone_speech(1.0, 16000.0, 1);
    const auto noise = gen_pink_noise(speech.size() + 100, 2);
    for (double target = -15.0; target <= 15.0; target += 5.0) {
        const MixResult r = mix_at_snr(speech, noise, target);
        EXPECT_NEAR(snr(speech, r.noisy), target, 1e-9) << target;
    }
}

TEST(Snr, Examples) {
    const std::vector<double> x{0.1, -0.2, 0.3};
    EXPECT_EQ(snr(x, x), std::numeric_limits<double>::infinity());
    const std::vector<double> ref{1, -1, 1, -1};
    const std::vector<double> est{1.1, -0.9, 0.9, -1.1};
    EXPECT_NEAR(snr(ref, est), 20.0, 1e-12);
    EXPECT_THROW(snr(ref, x), std::invalid_argument);
    EXPECT_THROW(snr(std::vector<double>{0, 0}, std::vector<double>{1, 1}), std::invalid_argument);
}

TEST(Snr, ConsistentWithMixerAtFiveDb) {
    const auto speech = gen_tone_speech(1.0, 16000.0, 3);
    const auto noise = gen_white_noise(speech.size(), 4);
    EXPECT_NEAR(snr(speech, mix_at_snr(speech, noise, 5.0).noisy), 5.0, 1e-9);
}

TEST(Snr, DependsOnlyOnErrorPower) {
    const std::vector<double> ref{0.3, -0.7, 0.2, 0.9};
    const std::vector<double> e1{0.1, 0.1, -0.1, -0.1};
    const std::vector<double> e2{-0.1, 0.1, 0.1, -0.1};
    std::vector<double> a(4), b(4);
    for (int i = 0; i < 4; ++i) {
        a[i] = ref[i] + e1[i];
        b[i] = ref[i] + e2[i];
    }
    EXPECT_NEAR(snr(ref, a), snr(ref, b), 1e-12);
}

TEST(WhiteNoise, DeterministicAndStandardized) {
    const std::size_t n = 200000;
    const auto x = gen_white_noise(n, 17);
    EXPECT_EQ(x, gen_white_noise(n, 17));
    EXPECT_NE(x, gen_white_noise(n, 18));
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(static_cast<double>(n)));
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(PinkNoise, DeterministicZeroMeanUnitVariance) {
    const std::size_t n = 1 << 18;
    const auto x = gen_pink_noise(n, 5);
    EXPECT_EQ(x, gen_pink_noise(n, 5));
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    // Low-frequency content inflates the variance of the mean well beyond 1/n.
    EXPECT_LT(std::abs(mean), 0.05);
    double var = 0.0;
    for (double v : x) var += v * v;
    EXPECT_NEAR(var / static_cast<double>(n), 1.0, 0.1);
}

TEST(PinkNoise, MinusThreeDbPerOctave) {
    const auto x = gen_pink_noise(1 << 20, 6);
    const double rate = 16000.0;
    const std::vector<double> freqs{125, 250, 500, 1000, 2000, 4000};
    // Least-squares slope of dB against octave index.
    std::vector<double> db;
    for (double f : freqs) db.push_back(10.0 * std::log10(oracle::band_power(x, rate, f)));
    const double n = static_cast<double>(freqs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const double xi = static_cast<double>(i);
        sx += xi;
        sy += db[i];
        sxx += xi * xi;
        sxy += xi * db[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, -3.0, 1.0);
    for (std::size_t i = 1; i < db.size(); ++i) EXPECT_NEAR(db[i] - db[i - 1], -3.0, 1.0) << freqs[i];
}

TEST(ToneSpeech, SilentPrefixAndDeterminism) {
    const auto x = gen_tone_speech(1.0, 16000.0, 7);
    EXPECT_EQ(x.size(), 16000u);
    EXPECT_EQ(x, gen_tone_speech(1.0, 16000.0, 7));
    const std::size_t silence = tone_speech_silence(16000.0);
    EXPECT_GE(silence, 5u * 256);
    for (std::size_t i = 0; i < silence; ++i) ASSERT_EQ(x[i], 0.0);
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    EXPECT_NEAR(peak, 0.5, 1e-12);
    EXPECT_THROW(gen_tone_speech(0.25, 16000.0, 7), std::invalid_argument);
}

TEST(ToneSpeech, EnergyBelowOneKilohertz) {
    const double rate = 16000.0;
    const auto x = gen_tone_speech(3.0, rate, 8);
    const std::size_t seg = 512;
    const std::size_t cutoff = static_cast<std::size_t>(1000.0 * static_cast<double>(seg) / rate);
    double low = 0.0, total = 0.0;
    for (std::size_t start = tone_speech_silence(rate); start + seg <= x.size(); start += seg) {
        const auto spectrum = oracle::naive_dft(std::vector<double>(x.begin() + static_cast<long>(start),
                                                                    x.begin() + static_cast<long>(start + seg)));
        for (std::size_t b = 0; b <= seg / 2; ++b) {
            const double e = std::norm(spectrum[b]);
            total += e;
            if (b < cutoff) low += e;
        }
    }
    EXPECT_GE(low / total, 0.8);
}
