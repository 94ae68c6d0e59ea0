#include "ellipboot/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "detail/region_engine.hpp"

namespace ellipboot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::uint64_t avalanche(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
    z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
    return z ^ (z >> 33);
}

std::uint64_t mix_in(std::uint64_t h, std::uint64_t w) {
    return avalanche(h ^ (avalanche(w) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

}  // namespace

RngStream RngStream::derive(const SeedSpec& seed, std::uint64_t b, std::uint64_t c,
                            StreamPurpose purpose) {
    std::uint64_t h = avalanche(seed.master_seed ^ 0x8F0E3A1D5C7B2469ULL);
    h = mix_in(h, seed.stream_id);
    h = mix_in(h, b);
    h = mix_in(h, c);
    h = mix_in(h, static_cast<std::uint64_t>(purpose));
    RngStream r;
    r.state_ = h;
    return r;
}

std::uint64_t RngStream::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t RngStream::uniform_index(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 64);
}

double RngStream::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = kTwoPi * next_double();
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
}

std::vector<int> resample_indices(int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("resample_indices: n must be >= 1");
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        idx[static_cast<size_t>(i)] =
            static_cast<int>(rng.uniform_index(static_cast<std::uint32_t>(n)));
    }
    return idx;
}

BootStats boot_squared_norms(const Sample& s, int B, ResampleMode mode,
                             const Bandwidth* bandwidth, const SeedSpec& seed) {
    return detail::boot_param_norms(s, detail::MeanEvaluator{}, B, mode, bandwidth, seed);
}

double boot_quantile(const BootStats& stats, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("boot_quantile: alpha must lie in (0,1)");
    }
    if (stats.values.empty()) throw std::invalid_argument("boot_quantile: empty statistics");
    const auto b = static_cast<long>(stats.values.size());
    return stats.values[static_cast<size_t>(detail::quantile_rank(b, alpha) - 1)];
}

}  // namespace ellipboot
