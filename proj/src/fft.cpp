#include "graphss/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <new>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace graphss {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct FftKernel::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

namespace {

// Scratch arrays from fftw_malloc share the planning alignment, so the SIMD
// codelets chosen at planning time stay valid for every execute call.
struct Scratch {
    std::size_t n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;

    explicit Scratch(std::size_t size)
        : n(size), in(fftw_alloc_complex(size)), out(fftw_alloc_complex(size)) {
        if (!in || !out) throw std::bad_alloc();
    }
    ~Scratch() {
        fftw_free(in);
        fftw_free(out);
    }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
};

Scratch& thread_scratch(std::size_t n) {
    thread_local std::vector<std::unique_ptr<Scratch>> pool;
    for (auto& s : pool)
        if (s->n == n) return *s;
    pool.push_back(std::make_unique<Scratch>(n));
    return *pool.back();
}

}  // namespace

FftKernel::FftKernel(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n == 0) throw std::invalid_argument("fft: length must be positive");
    Scratch& buf = thread_scratch(n);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_1d(len, buf.in, buf.out, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_1d(len, buf.in, buf.out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plans_->forward || !plans_->backward) throw std::runtime_error("fft: planning failed");
}

FftKernel::~FftKernel() {
    std::lock_guard lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

namespace {

void execute(fftw_plan plan, std::size_t n, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
    if (in.size() != n || out.size() != n) throw std::invalid_argument("fft: buffer size mismatch");
    Scratch& buf = thread_scratch(n);
    std::memcpy(buf.in, in.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plan, buf.in, buf.out);
    std::memcpy(out.data(), buf.out, n * sizeof(fftw_complex));
}

}  // namespace

void FftKernel::forward(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) const {
    execute(plans_->forward, n_, in, out);
}

void FftKernel::backward(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) const {
    execute(plans_->backward, n_, in, out);
}

}  // namespace graphss
