#pragma once

#include <cstdint>
#include <vector>

#include "gwcrit/offspring.hpp"

namespace gwcrit {

/// SplitMix64 step; streams are keyed by (master seed, replicate index) so
/// parallel and serial runs agree bitwise.  The starting state is the
/// finalizer hash of the pair, which scatters replicate streams across the
/// sequence space (consecutive counters would otherwise yield overlapping,
/// shift-by-one streams).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static SplitMix64 for_replicate(std::uint64_t master_seed, std::uint64_t replicate) {
        const std::uint64_t key = mix((replicate + 1) * 0x9E3779B97F4A7C15ULL);
        return SplitMix64(mix(master_seed ^ key));
    }
    std::uint64_t next_u64() { return mix(state += 0x9E3779B97F4A7C15ULL); }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

/// Exact inverse-CDF offspring sampler over {p_k} with a lazily extended
/// cumulative table.  Not thread-safe; use one instance per worker.
class OffspringSampler {
public:
    explicit OffspringSampler(const OffspringFamily& fam, std::uint64_t support_cap = 1ULL << 32);

    /// Smallest k with u < CDF(k); returns support_cap and sets the flag when
    /// the draw falls beyond the cap.
    std::uint64_t sample(double u);
    bool cap_hit() const { return cap_hit_; }
    void clear_cap_flag() { cap_hit_ = false; }
    std::size_t table_size() const { return cdf_.size(); }

private:
    void extend();
    CoeffStream stream_;
    std::vector<double> cdf_;
    double total_ = 0.0;
    std::uint64_t support_cap_;
    bool cap_hit_ = false;
};

struct SimConfig {
    FamilySpec family;
    std::uint32_t horizon = 20;           // generations
    std::uint64_t replicates = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t population_cap = 10'000'000;
    std::uint64_t support_cap = 1ULL << 32;
    std::uint32_t jmax = 8;               // occupancy buckets 0..jmax per generation
    std::uint32_t workers = 0;            // 0 = hardware concurrency
};

struct SimResult {
    SimConfig config;
    std::vector<std::uint64_t> survival;               // [g-1], g = 1..horizon
    std::vector<std::vector<std::uint64_t>> occupancy; // [g-1][j], j = 0..jmax
    std::vector<std::uint64_t> overflow;               // [g-1], Z_g > jmax
    std::uint64_t capped = 0;                          // replicates excluded at the cap
    double support_tail_mass = 0.0;                    // analytic residual beyond support cap

    std::uint64_t effective() const { return config.replicates - capped; }
    double q_hat(std::uint32_t gen) const;
    double p_hat(std::uint32_t gen, std::uint32_t j) const;
    double stderr_hat(std::uint32_t gen, std::uint32_t j) const;

    bool operator==(const SimResult& other) const;
};

/// R independent replicates of Z_{n+1} = xi_1 + ... + xi_{Z_n} from Z_0 = 1.
/// Deterministic given the config, independent of worker count.
SimResult simulate(const SimConfig& cfg);

}  // namespace gwcrit
