#pragma once

#include <vector>

#include "fsorf/rng.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf {

enum class Detector { heterodyne = 1, im_dd = 2 };

const char* to_string(Detector d);
Detector parse_detector(const char* s);

// Gamma-Gamma turbulence with zero-boresight pointing error. The stored
// quantity is the electrical SNR scale gamma_bar_r; mu() is the mu_i that
// appears in the CDF.
struct FsoChannelSpec {
    double alpha = 2.902;
    double beta = 2.51;
    double xi = 6.7;
    Detector detector = Detector::heterodyne;
    double gamma_bar_r = 1.0;

    static FsoChannelSpec with_mu(double alpha, double beta, double xi, Detector det, double mu);

    int i() const { return static_cast<int>(detector); }
    // mu_2 / gamma_bar_r for IM/DD, 1 for heterodyne
    double mu_factor() const;
    double mu() const { return mu_factor() * gamma_bar_r; }
    double A() const;
    double B() const;
    std::vector<double> tau1() const;
    std::vector<double> tau2() const;
    // G^{3i,1}_{i+1,3i+1}[. | 1, tau1; tau2, 0]
    specfun::MeijerGSpec cdf_kernel() const;
    void validate() const;
};

double fso_snr_pdf(const FsoChannelSpec& spec, double x);
double fso_snr_cdf(const FsoChannelSpec& spec, double x);
// E[gamma_R] in closed form from the Mellin transform of the pdf.
double fso_snr_mean(const FsoChannelSpec& spec);
double sample_fso_snr(const FsoChannelSpec& spec, RngStream& rng);

struct RfNetworkSpec {
    double m = 1.0;
    int n_t = 1;
    int n_users = 2;
    double rho = 0.8;
    double gamma_bar_u = 1.0;

    int big_l() const;  // m * N_t, requires integer m
    void validate() const;
};

// Coefficients of x^l in (sum_{q<big_l} x^q/q!)^k.
std::vector<double> phi_coeffs(int k, int big_l);

// One (k, l, j) term: pdf contribution N*c0*x^{c1-1}*exp(-c2 x).
struct RfTerm {
    int k, l, j;
    double c0, c1, c2;
};

std::vector<RfTerm> rf_terms(const RfNetworkSpec& spec);

double best_user_outdated_pdf(const RfNetworkSpec& spec, double x);
double best_user_outdated_cdf(const RfNetworkSpec& spec, double x);
// Perfect-CSI order-statistics CDF [P(mN_t, m x / gamma_bar)]^N.
double best_user_perfect_cdf(const RfNetworkSpec& spec, double x);
double sample_best_user_outdated(const RfNetworkSpec& spec, RngStream& rng);

}  // namespace fsorf
