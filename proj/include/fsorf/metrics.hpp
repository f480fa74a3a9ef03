#pragma once

#include <cmath>

#include "fsorf/channel.hpp"
#include "fsorf/constellation.hpp"

namespace fsorf {

struct SystemSpec {
    FsoChannelSpec fso;
    RfNetworkSpec rf;
    double delta_th = std::pow(10.0, 0.5);
    double gamma_th = std::pow(10.0, 0.5);

    void validate() const;
};

// 1 for heterodyne, e/(2 pi) for IM/DD
double capacity_rho(Detector d);

// P[phi(gamma_R) = 1] = 1 - F_R(delta_th)
double relay_decode_probability(const SystemSpec& spec);

double outage(const SystemSpec& spec);

struct AsymptoticOutage {
    double value = 0.0;
    double fso_term = 0.0;
    double rf_term = 0.0;
    // the FSO pole set coalesces, so the leading-term expansion is singular
    bool coalescing = false;
};

AsymptoticOutage asymptotic_outage(const SystemSpec& spec);

// min(xi^2/i, alpha/i, beta/i, N m N_t) for rho = 1, with m N_t in place of
// N m N_t otherwise.
double diversity_order(const SystemSpec& spec);

double ergodic_capacity(const SystemSpec& spec);

struct EffectiveCapacity {
    double value = 0.0;        // quadrature of the integral form
    double closed_form = 0.0;  // term-by-term incomplete-gamma form, NaN if unavailable
    double discrepancy = 0.0;  // |closed_form - value| / |value|
};

inline constexpr double kEffectiveCapacityWarnTol = 1e-3;

EffectiveCapacity effective_capacity(const SystemSpec& spec, double theta);

inline constexpr double kAserTruncationTol = 1e-8;

struct SeriesPolicy {
    int z1_terms = 80;
};

// How P_o(gamma) enters the error integral.
//   selective_df:       F_R(delta_th) + (1 - F_R(delta_th)) F_RU(gamma), the
//                       CDF of the gated end-to-end SNR used by the simulator.
//   per_snr_threshold:  F_R(gamma) + F_RU(gamma) - F_R(gamma) F_RU(gamma), the
//                       kernel structure of the printed closed forms.
enum class AserModel { selective_df, per_snr_threshold };

struct AserOptions {
    SeriesPolicy policy{};
    AserModel model = AserModel::selective_df;
    bool allow_im_dd = false;
    // Throw when any z1 series' last step exceeds kAserTruncationTol of its sum.
    bool check_truncation = true;
};

double aser(const ConstellationSpec& c, const SystemSpec& spec, const AserOptions& opts = {});

// Building blocks of the ASER sums, exposed for testing.
// F(psi1, psi2) = psi2^psi1 G^{3i,2}_{i+2,3i+1}[B/(psi2 mu) | psi1+1, 1, tau1; tau2, 0]
double aser_kernel_f(const FsoChannelSpec& fso, double psi1, double psi2);
// G(psi1, psi2) for one RF term (c1, c2)
double aser_kernel_g(double c1, double c2, double psi1, double psi2);

}  // namespace fsorf
