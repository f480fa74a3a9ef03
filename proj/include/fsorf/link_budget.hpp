#pragma once

#include "fsorf/channel.hpp"

namespace fsorf {

inline constexpr double kBoltzmann = 1.38e-23;
inline constexpr double kSpeedOfLight = 3e8;

enum class GainModel { paper, aperture };
// How the halved dB path gain zeta_R becomes a linear amplitude:
// amplitude -> 10^{dB/20}; power_halved -> 10^{dB/10}.
enum class ZetaModel { amplitude, power_halved };

struct FsoBudget {
    double p_s_dbm = 20.0;
    double d_s = 0.15;
    double d_r = 0.25;
    double lambda_f = 1550e-9;
    double a_atm_db = 0.5;
    double a_fs_db = 268.0;
    double l_lenses_db = 3.0;
    double m_s_db = 3.0;
    double b_o = 30e9;
    double temp_k = 300.0;
    double eta = 1.0;
    GainModel gain_model = GainModel::paper;
    ZetaModel zeta_model = ZetaModel::amplitude;

    void validate() const;
};

struct RfBudget {
    double p_r_dbm = 20.0;
    double f_rf = 2e9;
    double alpha_t = 2.0;
    double h_km = 17.0;
    double r_n_m = 500.0;
    double b_r = 20e6;
    double temp_k = 300.0;
    // <= 0 selects the slant range sqrt(H^2 + R_n^2)
    double user_distance_m = 0.0;
    double omega = 1.0;

    double distance_m() const;
    void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double lin);
double dbm_to_watts(double dbm);

double noise_power(double bandwidth_hz, double temp_k);

double transmit_gain_db(const FsoBudget& b);
double receive_gain_db(const FsoBudget& b);
double zeta_r_db(const FsoBudget& b);
double zeta_r_linear(const FsoBudget& b);
double zeta_n_sq_db(const RfBudget& b);

// gamma_bar_R = (P_s zeta_R eta)^i / sigma_R^2
double fso_average_snr(const FsoBudget& budget, Detector detector);
// gamma_bar_U = Omega P_R zeta_n^2 / sigma_n^2
double rf_average_snr(const RfBudget& budget);

}  // namespace fsorf
