#include "gwcrit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gwcrit/errors.hpp"

namespace gwcrit {

namespace {
// beyond this many tabled entries the sampler scans the stream instead of
// materializing the table (draws that far are ~1e-10 events)
constexpr std::size_t kTableCap = 1u << 22;
}

OffspringSampler::OffspringSampler(const OffspringFamily& fam, std::uint64_t support_cap)
    : stream_(fam), support_cap_(support_cap) {
    cdf_.reserve(64);
    extend();
}

void OffspringSampler::extend() {
    total_ += stream_.next();
    cdf_.push_back(total_);
}

std::uint64_t OffspringSampler::sample(double u) {
    while (u >= total_ && cdf_.size() < kTableCap) {
        if (cdf_.size() > support_cap_) {
            cap_hit_ = true;
            return support_cap_;
        }
        extend();
    }
    if (u < cdf_.back()) {
        if (u < cdf_[0]) return 0;  // typical case first: k = 0 has the largest mass
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint64_t>(it - cdf_.begin());
    }
    // slow path: continue the CDF scan without growing the table
    CoeffStream scan = stream_;
    std::uint64_t k = cdf_.size() - 1;
    double tot = total_;
    while (u >= tot) {
        ++k;
        if (k > support_cap_) {
            cap_hit_ = true;
            return support_cap_;
        }
        tot += scan.next();
    }
    return k;
}

double SimResult::q_hat(std::uint32_t gen) const {
    return static_cast<double>(survival[gen - 1]) / static_cast<double>(effective());
}

double SimResult::p_hat(std::uint32_t gen, std::uint32_t j) const {
    return static_cast<double>(occupancy[gen - 1][j]) / static_cast<double>(effective());
}

double SimResult::stderr_hat(std::uint32_t gen, std::uint32_t j) const {
    const double p = p_hat(gen, j);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(effective()));
}

bool SimResult::operator==(const SimResult& other) const {
    return survival == other.survival && occupancy == other.occupancy &&
           overflow == other.overflow && capped == other.capped;
}

namespace {

struct Tally {
    std::vector<std::uint64_t> survival;
    std::vector<std::vector<std::uint64_t>> occupancy;
    std::vector<std::uint64_t> overflow;
    std::uint64_t capped = 0;

    Tally(std::uint32_t horizon, std::uint32_t jmax)
        : survival(horizon, 0),
          occupancy(horizon, std::vector<std::uint64_t>(jmax + 1, 0)),
          overflow(horizon, 0) {}

    void merge(const Tally& other) {
        for (std::size_t g = 0; g < survival.size(); ++g) {
            survival[g] += other.survival[g];
            overflow[g] += other.overflow[g];
            for (std::size_t j = 0; j < occupancy[g].size(); ++j) {
                occupancy[g][j] += other.occupancy[g][j];
            }
        }
        capped += other.capped;
    }
};

void run_block(const SimConfig& cfg, const OffspringFamily& fam, std::uint64_t rep_begin,
               std::uint64_t rep_end, Tally& tally) {
    OffspringSampler sampler(fam, cfg.support_cap);
    std::vector<std::uint64_t> traj(cfg.horizon, 0);  // per-replicate buffer
    for (std::uint64_t rep = rep_begin; rep < rep_end; ++rep) {
        SplitMix64 rng = SplitMix64::for_replicate(cfg.seed, rep);
        sampler.clear_cap_flag();
        std::uint64_t z = 1;
        bool capped = false;
        for (std::uint32_t g = 1; g <= cfg.horizon; ++g) {
            if (z > 0) {
                std::uint64_t next = 0;
                for (std::uint64_t i = 0; i < z; ++i) {
                    next += sampler.sample(rng.next_unit());
                    if (next > cfg.population_cap || sampler.cap_hit()) {
                        capped = true;
                        break;
                    }
                }
                if (capped) break;
                z = next;
            }
            traj[g - 1] = z;
        }
        if (capped) {
            // excluded from all estimates, counted separately
            tally.capped += 1;
            continue;
        }
        for (std::uint32_t g = 1; g <= cfg.horizon; ++g) {
            const std::uint64_t zg = traj[g - 1];
            if (zg > 0) tally.survival[g - 1] += 1;
            if (zg <= cfg.jmax) {
                tally.occupancy[g - 1][static_cast<std::size_t>(zg)] += 1;
            } else {
                tally.overflow[g - 1] += 1;
            }
        }
    }
}

}  // namespace

SimResult simulate(const SimConfig& cfg) {
    if (cfg.replicates < 1) throw domain_error("simulate: replicates must be >= 1");
    if (cfg.horizon < 1) throw domain_error("simulate: horizon must be >= 1");
    if (cfg.population_cap < 1 || cfg.support_cap < 1) {
        throw domain_error("simulate: caps must be positive");
    }
    const OffspringFamily fam = OffspringFamily::from_spec(cfg.family);

    std::uint32_t workers = cfg.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<std::uint32_t>(std::min<std::uint64_t>(workers, cfg.replicates));

    std::vector<Tally> tallies(workers, Tally(cfg.horizon, cfg.jmax));
    if (workers == 1) {
        run_block(cfg, fam, 0, cfg.replicates, tallies[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        const std::uint64_t block = cfg.replicates / workers;
        for (std::uint32_t w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * block;
            const std::uint64_t hi = (w + 1 == workers) ? cfg.replicates : lo + block;
            threads.emplace_back([&, lo, hi, w] { run_block(cfg, fam, lo, hi, tallies[w]); });
        }
        for (auto& t : threads) t.join();
        for (std::uint32_t w = 1; w < workers; ++w) tallies[0].merge(tallies[w]);
    }

    SimResult res;
    res.config = cfg;
    res.survival = std::move(tallies[0].survival);
    res.occupancy = std::move(tallies[0].occupancy);
    res.overflow = std::move(tallies[0].overflow);
    res.capped = tallies[0].capped;
    res.support_tail_mass = fam.tail_mass_beyond(
        static_cast<std::size_t>(std::min<std::uint64_t>(cfg.support_cap, 1ULL << 40)));
    return res;
}

}  // namespace gwcrit
