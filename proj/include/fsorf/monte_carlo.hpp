#pragma once

#include <cstdint>

#include "fsorf/constellation.hpp"
#include "fsorf/metrics.hpp"
#include "fsorf/rng.hpp"

namespace fsorf {

enum class EffectiveCapacityMode { strict, paper };

struct SimConfig {
    SystemSpec system;
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = default_workers()
    EffectiveCapacityMode effective_capacity_mode = EffectiveCapacityMode::paper;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// FSORF_WORKERS if set, otherwise the hardware concurrency.
int default_workers();

// Samples are generated in fixed blocks, block b drawing from
// RngStream(seed, b); results depend on the seed only, never on workers.
inline constexpr std::uint64_t kSamplesPerBlock = 16384;
inline constexpr std::uint64_t kMinMeaningfulSamples = 10000;

// phi(gamma_R) * gamma_hat_RU
double sample_e2e(const SystemSpec& spec, RngStream& rng);
// min(gamma_R, gamma_hat_RU): the end-to-end variable whose CDF is the
// per-SNR-threshold outage used by AserModel::per_snr_threshold.
double sample_e2e_min(const SystemSpec& spec, RngStream& rng);

Estimate simulate_outage(const SimConfig& cfg);

enum class CapacityKind { ergodic, effective };
Estimate simulate_capacity(const SimConfig& cfg, CapacityKind kind, double theta = 0.0);

Estimate simulate_aser(const SimConfig& cfg, const ConstellationSpec& c,
                       AserModel model = AserModel::selective_df);

}  // namespace fsorf
