#include "graphss/audio_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace graphss {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<unsigned char>((v >> s) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
    std::uint16_t code = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    std::uint16_t block_align = 0;
};

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path, WavReadOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WavError("cannot open " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string where = path.string() + ": ";
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavError(where + "not a RIFF/WAVE file");

    Format fmt;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::size_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size()) {
            // Tolerate a truncated data chunk; anything else is malformed.
            if (std::memcmp(chunk, "data", 4) != 0) throw WavError(where + "truncated chunk");
        }
        const std::size_t avail = std::min(size, bytes.size() - body);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (avail < 16) throw WavError(where + "fmt chunk too short");
            const unsigned char* f = bytes.data() + body;
            fmt.code = le16(f);
            fmt.channels = le16(f + 2);
            fmt.rate = le32(f + 4);
            fmt.block_align = le16(f + 12);
            fmt.bits = le16(f + 14);
            if (fmt.code == kFormatExtensible) {
                if (avail < 26) throw WavError(where + "extensible fmt chunk too short");
                fmt.code = le16(f + 24);  // first two bytes of the subformat GUID
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = avail;
        }
        pos = body + size + (size & 1);
    }
    if (!have_fmt) throw WavError(where + "missing fmt chunk");
    if (!data) throw WavError(where + "missing data chunk");

    const bool pcm16 = fmt.code == kFormatPcm && fmt.bits == 16;
    const bool float32 = fmt.code == kFormatFloat && fmt.bits == 32;
    if (!pcm16 && !float32)
        throw WavError(where + "unsupported encoding (format " + std::to_string(fmt.code) + ", " +
                       std::to_string(fmt.bits) + " bits); expected PCM16 or float32");
    if (fmt.channels == 0) throw WavError(where + "zero channels");
    if (fmt.channels > 1 && !options.downmix)
        throw WavError(where + std::to_string(fmt.channels) + " channels; only mono is accepted without downmix");
    if (fmt.rate == 0) throw WavError(where + "zero sample rate");

    const std::size_t bytes_per_sample = fmt.bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
    const std::size_t frames = data_size / frame_bytes;
    if (frames == 0) throw WavError(where + "empty data chunk");

    AudioBuffer out;
    out.sample_rate = fmt.rate;
    out.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt.channels; ++c) {
            const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
            if (pcm16) {
                acc += static_cast<std::int16_t>(le16(p)) / 32768.0;
            } else {
                const std::uint32_t bits = le32(p);
                float v;
                std::memcpy(&v, &bits, sizeof v);
                acc += static_cast<double>(v);
            }
        }
        out.samples[i] = acc / static_cast<double>(fmt.channels);
    }
    return out;
}

std::int16_t quantize_pcm16(double sample) {
    if (std::isnan(sample)) return 0;
    const double clamped = std::clamp(sample, -1.0, 1.0);
    const long q = std::lround(clamped * 32768.0);
    return static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L));
}

WavWriteStats write_wav(const std::filesystem::path& path, const AudioBuffer& buffer) {
    if (buffer.samples.empty()) throw WavError("write_wav: empty buffer");
    if (buffer.sample_rate == 0) throw WavError("write_wav: zero sample rate");
    const auto data_bytes = static_cast<std::uint32_t>(buffer.samples.size() * 2);

    std::vector<unsigned char> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, 1);
    put32(out, buffer.sample_rate);
    put32(out, buffer.sample_rate * 2);
    put16(out, 2);
    put16(out, 16);
    put_tag(out, "data");
    put32(out, data_bytes);

    WavWriteStats stats;
    for (double x : buffer.samples) {
        const double scaled = std::lround(std::clamp(x, -1.0, 1.0) * 32768.0);
        if (std::abs(x) > 1.0 || scaled > 32767.0) ++stats.clipped;
        put16(out, static_cast<std::uint16_t>(quantize_pcm16(x)));
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw WavError("cannot open " + path.string() + " for writing");
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file) throw WavError("write failed for " + path.string());
    return stats;
}

}  // namespace graphss
