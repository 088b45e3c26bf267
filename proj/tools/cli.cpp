#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "graphss/audio_io.hpp"
#include "graphss/baseline.hpp"
#include "graphss/enhance.hpp"
#include "graphss/gft.hpp"
#include "graphss/signal_lab.hpp"

namespace graphss::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Bad user input; maps to kInputError.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

/// Enhancement settings shared by enhance and eval, in flag > config file > default order.
struct EnhanceSettings {
    Method method = Method::Igss;
    std::size_t k = 3;
    std::size_t frame_len = 256;
    double overlap = 0.5;
    double alpha = 1e-5;
    std::size_t max_iters = 30;
    std::size_t noise_frames = 5;
    double floor = 0.0;
    bool identity_k1 = false;
    std::size_t threads = 1;

    std::string config_path;
    std::string method_name = "igss";

    EnhancementConfig graph_config() const {
        EnhancementConfig c;
        c.k = k;
        c.frame_len = frame_len;
        c.overlap = overlap;
        c.alpha = alpha;
        c.max_iters = max_iters;
        c.noise_region = NoiseRegion::leading_frames(noise_frames);
        c.floor = floor;
        c.basis_options.identity_for_k1 = identity_k1;
        c.threads = threads;
        return c;
    }

    BaselineConfig baseline_config() const {
        BaselineConfig c;
        c.frame_len = frame_len;
        c.fft_len = frame_len;
        c.overlap = overlap;
        c.alpha = alpha;
        c.max_iters = max_iters;
        c.noise_frames = noise_frames;
        c.floor = floor;
        c.threads = threads;
        return c;
    }

    json to_json() const {
        return {{"method", to_string(method)}, {"k", k},         {"frame_len", frame_len},
                {"overlap", overlap},          {"alpha", json_number(alpha)}, {"max_iters", max_iters},
                {"noise_frames", noise_frames}, {"floor", floor}, {"identity_k1", identity_k1}};
    }
};

struct EnhanceFlags {
    CLI::Option* method = nullptr;
    CLI::Option* k = nullptr;
    CLI::Option* frame_len = nullptr;
    CLI::Option* overlap = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* max_iters = nullptr;
    CLI::Option* noise_frames = nullptr;
    CLI::Option* floor = nullptr;
};

// Flag values land in `flags_view`; the merged result is built in resolve().
struct EnhanceOptions {
    EnhanceSettings flags_view;
    EnhanceFlags opts;

    void add_to(CLI::App& app, bool with_method) {
        if (with_method)
            opts.method = app.add_option("--method", flags_view.method_name, "gss | igss | bss | ibss");
        opts.k = app.add_option("--k", flags_view.k, "combined shift order (default 3)");
        opts.frame_len = app.add_option("--frame-len", flags_view.frame_len, "frame length in samples (default 256)");
        opts.overlap = app.add_option("--overlap", flags_view.overlap, "frame overlap fraction (default 0.5)");
        opts.alpha = app.add_option("--alpha", flags_view.alpha, "noise threshold (default 1e-5)");
        opts.max_iters = app.add_option("--max-iters", flags_view.max_iters, "iteration cap (default 30)");
        opts.noise_frames = app.add_option("--noise-frames", flags_view.noise_frames,
                                           "leading non-speech frames (default 5)");
        opts.floor = app.add_option("--floor", flags_view.floor, "subtraction floor (default 0)");
        app.add_flag("--identity-k1", flags_view.identity_k1, "treat k = 1 as the identity transform");
        app.add_option("--config", flags_view.config_path, "key=value defaults file");
    }

    EnhanceSettings resolve(const std::string& default_method) const {
        EnhanceSettings s;
        s.method_name = default_method;
        if (!flags_view.config_path.empty()) apply_config_file(s, flags_view.config_path);
        auto given = [](const CLI::Option* o) { return o && o->count() > 0; };
        if (given(opts.method)) s.method_name = flags_view.method_name;
        if (given(opts.k)) s.k = flags_view.k;
        if (given(opts.frame_len)) s.frame_len = flags_view.frame_len;
        if (given(opts.overlap)) s.overlap = flags_view.overlap;
        if (given(opts.alpha)) s.alpha = flags_view.alpha;
        if (given(opts.max_iters)) s.max_iters = flags_view.max_iters;
        if (given(opts.noise_frames)) s.noise_frames = flags_view.noise_frames;
        if (given(opts.floor)) s.floor = flags_view.floor;
        s.identity_k1 = s.identity_k1 || flags_view.identity_k1;
        const auto m = parse_method(s.method_name);
        if (!m) throw InputError("unknown method '" + s.method_name + "'");
        s.method = *m;
        s.threads = threads_from_env();
        return s;
    }

    static std::size_t threads_from_env() {
        const char* v = std::getenv(kThreadsEnv);
        if (!v || !*v) return 1;
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (*end != '\0' || n < 1) throw InputError(std::string(kThreadsEnv) + " must be a positive integer");
        return static_cast<std::size_t>(n);
    }

    static void apply_config_file(EnhanceSettings& s, const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open config file " + path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            auto trim = [](std::string x) {
                const auto b = x.find_first_not_of(" \t\r");
                const auto e = x.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            if (eq == std::string::npos) throw InputError(path + ":" + std::to_string(line_no) + ": expected key=value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            try {
                if (key == "method") s.method_name = value;
                else if (key == "k") s.k = std::stoul(value);
                else if (key == "frame_len") s.frame_len = std::stoul(value);
                else if (key == "overlap") s.overlap = std::stod(value);
                else if (key == "alpha") s.alpha = std::stod(value);
                else if (key == "max_iters") s.max_iters = std::stoul(value);
                else if (key == "noise_frames") s.noise_frames = std::stoul(value);
                else if (key == "floor") s.floor = std::stod(value);
                else if (key == "identity_k1") s.identity_k1 = value == "1" || value == "true";
                else throw InputError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
            } catch (const std::logic_error&) {
                throw InputError(path + ":" + std::to_string(line_no) + ": bad value for '" + key + "'");
            }
        }
    }
};

struct Enhanced {
    std::vector<double> samples;
    std::size_t iterations = 0;
};

Enhanced run_method(const EnhanceSettings& s, std::span<const double> signal) {
    switch (s.method) {
        case Method::None: return {std::vector<double>(signal.begin(), signal.end()), 0};
        case Method::Gss: return {gss(signal, s.graph_config()), 1};
        case Method::Igss: {
            auto r = igss(signal, s.graph_config());
            return {std::move(r.samples), r.iterations};
        }
        case Method::Bss: return {bss(signal, s.baseline_config()), 1};
        case Method::Ibss: {
            auto r = ibss(signal, s.baseline_config());
            return {std::move(r.samples), r.iterations};
        }
    }
    throw std::logic_error("unhandled method");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

void write_manifest(const fs::path& output, const std::string& command, json config, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs, json results) {
    json m;
    m["format_version"] = kFormatVersion;
    m["command"] = command;
    m["config"] = std::move(config);
    m["seed"] = seed;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["results"] = std::move(results);
    write_text(manifest_path(output), m.dump(2) + "\n");
}

fs::path with_suffix(const fs::path& base, const std::string& suffix) {
    fs::path p = base;
    p.replace_filename(base.stem().string() + suffix + base.extension().string());
    return p;
}

std::string csv_header_line() { return "format_version," + std::to_string(kFormatVersion) + "\n"; }

// ---- enhance ---------------------------------------------------------------

int cmd_enhance(const std::string& in_path, const std::string& out_path, const EnhanceOptions& options,
                std::ostream& err) {
    const EnhanceSettings s = options.resolve("igss");
    const AudioBuffer input = read_wav(in_path);
    const Enhanced result = run_method(s, input.samples);
    const WavWriteStats stats = write_wav(out_path, {result.samples, input.sample_rate});
    write_manifest(out_path, "enhance", s.to_json(), 0, {in_path}, {out_path},
                   {{"iterations", result.iterations}, {"clipped", stats.clipped}, {"sample_rate", input.sample_rate}});
    err << "method=" << to_string(s.method) << " iterations=" << result.iterations << " clipped=" << stats.clipped
        << "\n";
    return kSuccess;
}

// ---- mix -------------------------------------------------------------------

std::vector<double> parse_snr_spec(const std::string& spec) {
    auto to_double = [&](const std::string& x) {
        try {
            std::size_t used = 0;
            const double v = std::stod(x, &used);
            if (used != x.size()) throw std::invalid_argument(x);
            return v;
        } catch (const std::logic_error&) {
            throw InputError("bad --snr-db value '" + spec + "'");
        }
    };
    if (spec == "inf" || spec == "+inf") return {std::numeric_limits<double>::infinity()};
    const auto c1 = spec.find(':', 1);
    if (c1 == std::string::npos) return {to_double(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw InputError("grid --snr-db must be start:step:stop");
    const double start = to_double(spec.substr(0, c1));
    const double step = to_double(spec.substr(c1 + 1, c2 - c1 - 1));
    const double stop = to_double(spec.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw InputError("grid --snr-db needs step > 0 and stop >= start");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double v = start + step * static_cast<double>(i);
        if (v > stop + 1e-9 * step) break;
        grid.push_back(v);
    }
    return grid;
}

std::string snr_tag(double db) {
    if (std::isinf(db)) return "_snrinf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "_snr%+g", db);
    return buf;
}

int cmd_mix(const std::string& speech_path, const std::string& noise_path, const std::string& snr_spec,
            const std::string& out_path, std::ostream& out) {
    const AudioBuffer speech = read_wav(speech_path);
    const AudioBuffer noise = read_wav(noise_path);
    if (speech.sample_rate != noise.sample_rate)
        throw InputError("sample rate mismatch: " + std::to_string(speech.sample_rate) + " vs " +
                         std::to_string(noise.sample_rate));
    const auto targets = parse_snr_spec(snr_spec);
    const bool grid = targets.size() > 1 || snr_spec.find(':', 1) != std::string::npos;
    for (const double target : targets) {
        const MixResult mixed = mix_at_snr(speech.samples, noise.samples, target);
        const double achieved = snr(speech.samples, mixed.noisy);
        const fs::path path = grid ? with_suffix(out_path, snr_tag(target)) : fs::path(out_path);
        const WavWriteStats stats = write_wav(path, {mixed.noisy, speech.sample_rate});
        write_manifest(path, "mix", {{"snr_db", json_number(target)}}, 0, {speech_path, noise_path},
                       {path.string()},
                       {{"scale", mixed.scale}, {"achieved_snr_db", json_number(achieved)}, {"clipped", stats.clipped}});
        out << path.string() << ",target_db=" << format_number(target) << ",achieved_db=" << format_number(achieved)
            << ",scale=" << format_number(mixed.scale) << "\n";
    }
    return kSuccess;
}

// ---- eval ------------------------------------------------------------------

std::map<std::string, fs::path> wav_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            files.emplace(entry.path().filename().string(), entry.path());
    }
    return files;
}

int cmd_eval(const std::string& clean_dir, const std::string& noisy_dir, const std::string& report_path,
             const EnhanceOptions& options, std::ostream& out, std::ostream& err) {
    // Without a method the noisy files are scored as given.
    const EnhanceSettings s = options.resolve("none");

    const auto clean = wav_files(clean_dir);
    const auto noisy = wav_files(noisy_dir);
    std::vector<std::string> unpaired;
    for (const auto& [name, _] : clean)
        if (!noisy.contains(name)) unpaired.push_back(clean_dir + "/" + name);
    for (const auto& [name, _] : noisy)
        if (!clean.contains(name)) unpaired.push_back(noisy_dir + "/" + name);
    if (!unpaired.empty()) {
        for (const auto& u : unpaired) err << "unpaired: " << u << "\n";
        return kInputError;
    }
    if (clean.empty()) throw InputError("no .wav files in " + clean_dir);

    std::vector<SnrReport> rows;
    for (const auto& [name, clean_path] : clean) {
        const AudioBuffer ref = read_wav(clean_path);
        const AudioBuffer in = read_wav(noisy.at(name));
        if (ref.samples.size() != in.samples.size())
            throw InputError(name + ": clean and noisy lengths differ");
        const Enhanced enhanced = run_method(s, in.samples);
        SnrReport r;
        r.clip_id = fs::path(name).stem().string();
        r.method = s.method;
        r.input_snr_db = snr(ref.samples, in.samples);
        r.output_snr_db = snr(ref.samples, enhanced.samples);
        r.iterations = enhanced.iterations;
        rows.push_back(r);
    }

    std::ostringstream csv;
    csv << csv_header_line() << "clip_id,method,input_snr_db,output_snr_db,iterations\n";
    double in_sum = 0.0;
    double out_sum = 0.0;
    double iter_sum = 0.0;
    for (const auto& r : rows) {
        csv << r.clip_id << ',' << to_string(r.method) << ',' << format_number(r.input_snr_db) << ','
            << format_number(r.output_snr_db) << ',' << r.iterations << '\n';
        in_sum += r.input_snr_db;
        out_sum += r.output_snr_db;
        iter_sum += static_cast<double>(r.iterations);
    }
    const double count = static_cast<double>(rows.size());
    csv << "mean," << to_string(s.method) << ',' << format_number(in_sum / count) << ','
        << format_number(out_sum / count) << ',' << format_number(iter_sum / count) << '\n';
    write_text(report_path, csv.str());

    std::vector<std::string> inputs{clean_dir, noisy_dir};
    write_manifest(report_path, "eval", s.to_json(), 0, inputs, {report_path},
                   {{"clips", rows.size()},
                    {"mean_input_snr_db", json_number(in_sum / count)},
                    {"mean_output_snr_db", json_number(out_sum / count)}});
    out << "clips=" << rows.size() << " mean_input_snr_db=" << format_number(in_sum / count)
        << " mean_output_snr_db=" << format_number(out_sum / count) << "\n";
    return kSuccess;
}

// ---- spectrum --------------------------------------------------------------

int cmd_spectrum(const std::string& in_path, const std::string& out_path, std::vector<std::size_t> ks,
                 std::size_t frame_index, std::size_t frame_len, bool identity_k1, std::ostream& out) {
    if (ks.empty()) ks = {1, 3, 8, 20, 50};
    const AudioBuffer input = read_wav(in_path);
    FramePlan plan;
    plan.frame_len = frame_len;
    plan.hop = frame_len / 2;
    if (plan.hop == 0) throw InputError("frame length must be at least 2");
    const auto frames = segment(input.samples, plan);
    if (frame_index >= frames.size())
        throw InputError("frame index " + std::to_string(frame_index) + " out of range (signal has " +
                         std::to_string(frames.size()) + " frames)");

    std::vector<std::string> outputs;
    for (const std::size_t k : ks) {
        const GftBasis basis = basis_circulant(frame_len, k, {.identity_for_k1 = identity_k1});
        const GraphSpectrum spectrum = gft(basis, frames[frame_index]);
        std::ostringstream csv;
        csv << csv_header_line() << "bin,eigenvalue_re,eigenvalue_im,magnitude\n";
        for (std::size_t m = 0; m < frame_len; ++m) {
            const Complex lambda = basis.eigenvalues()[m];
            csv << m << ',' << format_number(lambda.real()) << ',' << format_number(lambda.imag()) << ','
                << format_number(std::abs(spectrum.coefficients[m])) << '\n';
        }
        const fs::path path = with_suffix(out_path, "_k" + std::to_string(k));
        write_text(path, csv.str());
        write_manifest(path, "spectrum",
                       {{"k", k}, {"frame_len", frame_len}, {"frame_index", frame_index}, {"identity_k1", identity_k1},
                        {"basis", to_string(basis.kind())}},
                       0, {in_path}, {path.string()}, json::object());
        outputs.push_back(path.string());
        out << path.string() << "\n";
    }
    return kSuccess;
}

// ---- synth -----------------------------------------------------------------

int cmd_synth(const std::string& kind, const std::string& out_path, double duration, unsigned rate,
              std::uint64_t seed, std::ostream& out) {
    if (!(duration > 0.0)) throw InputError("duration must be positive");
    if (rate == 0) throw InputError("rate must be positive");
    const auto n = static_cast<std::size_t>(std::llround(duration * rate));
    std::vector<double> samples;
    if (kind == "tone") {
        samples = gen_tone_speech(duration, rate, seed);
    } else if (kind == "white" || kind == "pink") {
        samples = kind == "white" ? gen_white_noise(n, seed) : gen_pink_noise(n, seed);
        // Unit variance; scale to keep the PCM16 file mostly unclipped.
        for (auto& x : samples) x *= 0.25;
    } else {
        throw InputError("unknown synth kind '" + kind + "' (tone | white | pink)");
    }
    const WavWriteStats stats = write_wav(out_path, {samples, rate});
    write_manifest(out_path, "synth", {{"kind", kind}, {"duration_s", duration}, {"rate", rate}}, seed, {},
                   {out_path}, {{"samples", samples.size()}, {"clipped", stats.clipped}});
    out << out_path << " samples=" << samples.size() << " clipped=" << stats.clipped << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph spectral subtraction speech enhancement toolkit", "graphss-cli"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    EnhanceOptions enhance_opts;
    auto* enhance = app.add_subcommand("enhance", "enhance a WAV file");
    enhance->add_option("input", in_path, "noisy input WAV")->required();
    enhance->add_option("output", out_path, "enhanced output WAV")->required();
    enhance_opts.add_to(*enhance, true);

    std::string speech_path, noise_path, snr_spec;
    auto* mix = app.add_subcommand("mix", "mix speech and noise at a target SNR");
    mix->add_option("speech", speech_path, "speech WAV")->required();
    mix->add_option("noise", noise_path, "noise WAV")->required();
    mix->add_option("output", out_path, "output WAV (grid mode appends _snr<db>)")->required();
    mix->add_option("--snr-db", snr_spec, "target SNR in dB, or start:step:stop")->required();

    std::string clean_dir, noisy_dir, report_path;
    EnhanceOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "score noisy or enhanced clips against clean references");
    eval->add_option("clean_dir", clean_dir, "directory of clean WAVs")->required();
    eval->add_option("noisy_dir", noisy_dir, "directory of noisy WAVs paired by file name")->required();
    eval->add_option("--report", report_path, "CSV report path")->required();
    eval_opts.add_to(*eval, true);

    std::vector<std::size_t> ks;
    std::size_t frame_index = 0;
    std::size_t spectrum_frame_len = 256;
    bool spectrum_identity = false;
    auto* spectrum = app.add_subcommand("spectrum", "dump graph spectra of one frame as CSV");
    spectrum->add_option("input", in_path, "input WAV")->required();
    spectrum->add_option("output", out_path, "output CSV (one file per k, suffixed _k<k>)")->required();
    spectrum->add_option("--k", ks, "operator orders (default 1 3 8 20 50)");
    spectrum->add_option("--frame-index", frame_index, "frame to transform");
    spectrum->add_option("--frame-len", spectrum_frame_len, "frame length in samples");
    spectrum->add_flag("--identity-k1", spectrum_identity, "treat k = 1 as the identity transform");

    std::string synth_kind;
    double duration = 3.0;
    unsigned rate = 16000;
    std::uint64_t seed = 1;
    auto* synth = app.add_subcommand("synth", "write a synthetic test clip");
    synth->add_option("kind", synth_kind, "tone | white | pink")->required();
    synth->add_option("output", out_path, "output WAV")->required();
    synth->add_option("--duration", duration, "seconds");
    synth->add_option("--rate", rate, "sample rate in Hz");
    synth->add_option("--seed", seed, "generator seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (*enhance) return cmd_enhance(in_path, out_path, enhance_opts, err);
        if (*mix) return cmd_mix(speech_path, noise_path, snr_spec, out_path, out);
        if (*eval) return cmd_eval(clean_dir, noisy_dir, report_path, eval_opts, out, err);
        if (*spectrum)
            return cmd_spectrum(in_path, out_path, ks, frame_index, spectrum_frame_len, spectrum_identity, out);
        if (*synth) return cmd_synth(synth_kind, out_path, duration, rate, seed, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const WavError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

}  // namespace graphss::cli
