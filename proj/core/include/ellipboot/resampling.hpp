#pragma once

#include <cstdint>
#include <vector>

#include "ellipboot/edgeworth.hpp"
#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"

namespace ellipboot {

// (master_seed, stream_id) fully determines every random draw in a run
// component; distinct stream_ids give independent streams.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// Substream roles. Keeping index draws and smoothing-noise draws on separate
// substreams makes the smoothed statistic with a zero bandwidth bit-identical
// to the plain one under the same seed, and lets every method share one index
// stream per resample.
enum class StreamPurpose : std::uint64_t {
    SampleDraw = 1,
    Indices = 2,
    SmoothNoise = 3,
    InnerIndices = 4,
};

// Small counter-keyed generator (splitmix64 core). Streams are derived by
// hashing (master_seed, stream_id, b, c, purpose), which makes per-resample
// substream setup O(1) and lets nested loops address streams directly.
class RngStream {
public:
    RngStream() = default;

    static RngStream derive(const SeedSpec& seed, std::uint64_t b, std::uint64_t c,
                            StreamPurpose purpose);

    std::uint64_t next_u64();
    // Uniform on [0, 1).
    double next_double();
    // Unbiased uniform integer on {0, ..., n-1} (multiply-shift with
    // rejection).
    std::uint32_t uniform_index(std::uint32_t n);
    // Standard normal (Box-Muller, pairs cached).
    double next_normal();

private:
    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

enum class ResampleMode { Plain, Studentized, Smoothed };

// Sorted squared-norm bootstrap statistics. Degenerate (rejected) resamples
// are counted, never stored.
struct BootStats {
    std::vector<double> values;  // sorted ascending, finite, >= 0
    int b = 0;
    ResampleMode mode = ResampleMode::Plain;
    long rejections = 0;
};

// n indices drawn uniformly with replacement from {0, ..., n-1}.
std::vector<int> resample_indices(int n, RngStream& rng);

// Bootstrap squared-norm statistics for B resamples of s. Resample b reads
// its indices from RngStream::derive(seed, b, 0, StreamPurpose::Indices) and
// (smoothed expanding mode only) its noise from the SmoothNoise substream, so
// callers can reproduce any individual resample.
//
//   Plain:       n (m* - m)' cov^-1 (m* - m), fixed full-sample cov
//   Studentized: n (m* - m)' cov*^-1 (m* - m), cov* recomputed per resample;
//                a resample singular to tolerance is rejected and redrawn
//                (further draws from the same substream), up to 10*B
//                rejections in total, then NumericError
//   Smoothed:    requires bandwidth; expanding adds kernel noise
//                Y*_i = X*_i + H^{1/2} Z_i and standardizes by (cov + H);
//                otherwise plain resamples are standardized by the shrunk
//                matrix (1 - |scale|) cov
BootStats boot_squared_norms(const Sample& s, int B, ResampleMode mode,
                             const Bandwidth* bandwidth, const SeedSpec& seed);

// Order statistic of rank ceil(B * alpha) (1-based; computed with a 1e-9
// guard against binary representation overshoot, clamped to [1, B]).
double boot_quantile(const BootStats& stats, double alpha);

}  // namespace ellipboot
