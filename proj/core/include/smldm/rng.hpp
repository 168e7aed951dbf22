#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace smldm {

/// (seed, stream_id) fully determines a sample sequence.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Stream for the i-th independent trial under this base.
    RngSpec trial(std::uint64_t index) const { return {seed, stream_id + index}; }
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Counter-based generator: the key is the seed, the upper counter words
/// hold the stream id and the lower words count blocks within the stream.
class PhiloxStream {
public:
    explicit PhiloxStream(const RngSpec& spec);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Circularly-symmetric CN(0, 1): real and imaginary parts each have
    /// variance 1/2.
    std::complex<double> complex_normal();

private:
    void refill();

    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

/// SplitMix64 finalizer; used to derive well-separated stream bases from tags.
std::uint64_t mix64(std::uint64_t x);

/// Stream base for a tagged sub-task. Low 32 bits are zero so that up to
/// 2^32 trials fit under one base without overlapping another.
std::uint64_t derive_stream(std::uint64_t base, std::uint64_t tag);

}  // namespace smldm
