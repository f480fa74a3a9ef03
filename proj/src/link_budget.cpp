#include "fsorf/link_budget.hpp"

#include <cmath>

#include "fsorf/errors.hpp"

namespace fsorf {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive and finite");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be nonnegative and finite");
}

}  // namespace

void FsoBudget::validate() const {
    if (!std::isfinite(p_s_dbm)) throw DomainError("p_s_dbm must be finite");
    require_positive(d_s, "d_s");
    require_positive(d_r, "d_r");
    require_positive(lambda_f, "lambda_f");
    require_nonnegative(a_atm_db, "a_atm_db");
    require_nonnegative(a_fs_db, "a_fs_db");
    require_nonnegative(l_lenses_db, "l_lenses_db");
    require_nonnegative(m_s_db, "m_s_db");
    require_positive(b_o, "b_o");
    require_positive(temp_k, "temp_k");
    require_positive(eta, "eta");
}

double RfBudget::distance_m() const {
    if (user_distance_m > 0.0) return user_distance_m;
    const double h = h_km * 1e3;
    return std::sqrt(h * h + r_n_m * r_n_m);
}

void RfBudget::validate() const {
    if (!std::isfinite(p_r_dbm)) throw DomainError("p_r_dbm must be finite");
    require_positive(f_rf, "f_rf");
    if (!(alpha_t >= 2.0 && alpha_t <= 4.0)) throw DomainError("alpha_t must lie in [2,4]");
    require_positive(h_km, "h_km");
    require_nonnegative(r_n_m, "r_n_m");
    require_positive(b_r, "b_r");
    require_positive(temp_k, "temp_k");
    require_positive(omega, "omega");
    if (user_distance_m < 0.0) throw DomainError("user_distance_m must be positive (or 0 for the slant default)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_power(double bandwidth_hz, double temp_k) {
    require_positive(bandwidth_hz, "bandwidth");
    require_positive(temp_k, "temperature");
    return kBoltzmann * bandwidth_hz * temp_k;
}

namespace {

double gain_db(double diameter, const FsoBudget& b) {
    if (b.gain_model == GainModel::paper) {
        // pi^2 D^2 / lambda as printed (carries a unit of length)
        return linear_to_db(M_PI * M_PI * diameter * diameter / b.lambda_f);
    }
    const double g = M_PI * diameter / b.lambda_f;
    return linear_to_db(g * g);
}

}  // namespace

double transmit_gain_db(const FsoBudget& b) { return gain_db(b.d_s, b); }
double receive_gain_db(const FsoBudget& b) { return gain_db(b.d_r, b); }

double zeta_r_db(const FsoBudget& b) {
    return 0.5 * (transmit_gain_db(b) + receive_gain_db(b) - b.a_atm_db - b.a_fs_db - b.l_lenses_db - b.m_s_db);
}

double zeta_r_linear(const FsoBudget& b) {
    const double z = zeta_r_db(b);
    return b.zeta_model == ZetaModel::amplitude ? std::pow(10.0, z / 20.0) : std::pow(10.0, z / 10.0);
}

double zeta_n_sq_db(const RfBudget& b) {
    const double lambda_rf = kSpeedOfLight / b.f_rf;
    return 0.5 * (20.0 * std::log10(lambda_rf) - 20.0 * b.alpha_t * std::log10(b.distance_m()) -
                  20.0 * std::log10(4.0 * M_PI));
}

double fso_average_snr(const FsoBudget& budget, Detector detector) {
    budget.validate();
    const double amplitude = dbm_to_watts(budget.p_s_dbm) * zeta_r_linear(budget) * budget.eta;
    const double sigma2 = noise_power(budget.b_o, budget.temp_k);
    return std::pow(amplitude, static_cast<int>(detector)) / sigma2;
}

double rf_average_snr(const RfBudget& budget) {
    budget.validate();
    if (!(budget.distance_m() > 0.0)) throw DomainError("rf_average_snr: distance must be positive");
    const double gain = db_to_linear(zeta_n_sq_db(budget));
    return budget.omega * dbm_to_watts(budget.p_r_dbm) * gain / noise_power(budget.b_r, budget.temp_k);
}

}  // namespace fsorf
