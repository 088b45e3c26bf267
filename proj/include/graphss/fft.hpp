#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace graphss {

/// Unnormalized complex DFT of a fixed length backed by FFTW.
///
/// forward:  X[m] = sum_j x[j] exp(-2 pi i j m / n)
/// backward: x[j] = sum_m X[m] exp(+2 pi i j m / n)
///
/// Plans are created once per instance (plan creation is serialized internally);
/// execute calls are reentrant and may run concurrently on distinct buffers.
/// in and out may alias.
class FftKernel {
public:
    explicit FftKernel(std::size_t n);
    ~FftKernel();
    FftKernel(const FftKernel&) = delete;
    FftKernel& operator=(const FftKernel&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

}  // namespace graphss
