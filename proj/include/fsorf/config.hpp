#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsorf/link_budget.hpp"
#include "fsorf/metrics.hpp"
#include "fsorf/monte_carlo.hpp"

namespace fsorf {

// Parse failure; the message names the file, line and key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Metric { outage, asym_outage, ergodic, effective, aser };

const char* to_string(Metric m);
Metric parse_metric(const std::string& s);

// Which hop the swept transmit power drives. The other hop keeps its
// configured fso.p_s_dbm / rf.p_r_dbm.
enum class PowerDrive { joint, fso, rf };

struct PowerGrid {
    double start = -10.0;
    double stop = 40.0;
    double step = 5.0;

    std::vector<double> points() const;
    void validate() const;
};

// "start:stop:step"
PowerGrid parse_power_grid(const std::string& text);

// Everything one curve needs. Defaults are Table II plus the paper's
// common scenario (xi = 6.7, rho = 0.8, N = 2, 5 dB thresholds).
struct Scenario {
    std::string label = "default";

    FsoBudget fso_budget;
    RfBudget rf_budget;
    double alpha = 2.902;
    double beta = 2.51;
    double xi = 6.7;
    Detector detector = Detector::heterodyne;
    double m = 1.0;
    int n_t = 1;
    int n_users = 2;
    double rho = 0.8;
    double delta_th_db = 5.0;
    double gamma_th_db = 5.0;

    Metric metric = Metric::outage;
    PowerGrid grid;
    PowerDrive drive = PowerDrive::joint;
    std::vector<double> theta{1.0};
    std::string constellation = "hqam:16";
    bool compare = false;

    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    int z1_terms = 80;
    AserModel aser_model = AserModel::selective_df;
    EffectiveCapacityMode ec_mode = EffectiveCapacityMode::paper;

    // Budgets with the swept power applied, then mapped to average SNRs.
    SystemSpec system_at(double ptx_dbm) const;
    AserOptions aser_options(bool expert) const;
};

struct Config {
    Scenario base;
    // One entry per [curve label] block, each starting from base. A file
    // without blocks has a single curve equal to base.
    std::vector<Scenario> curves;
};

// Line-oriented "key = value" text. '#' starts a comment. "[curve label]"
// opens a block whose keys override the base section for that curve.
Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config(const std::string& path);
// Applies the keys of text on top of an existing config (base and every curve).
void overlay_config(Config& cfg, const std::string& text, const std::string& source);

// Assigns one key; throws ConfigError naming the key on a bad value.
void set_key(Scenario& s, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

struct ValidationReport {
    std::string text;
    int errors = 0;
    int warnings = 0;
};

// Echoes every resolved value per curve and lists range violations and
// scope warnings.
ValidationReport validate_config(const Config& cfg, bool expert = false);

// Directory holding fig*.cfg; FSORF_PRESET_DIR overrides the built-in path.
std::string preset_dir();
std::string preset_path(const std::string& name);

}  // namespace fsorf
