#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsorf/config.hpp"

namespace fsorf {

// A hard numeric failure at one grid point; the message names the
// operation, the curve and the transmit power.
struct SweepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line view of a sweep. Every optional field overrides the
// corresponding key in all curves of the loaded config.
struct SweepRequest {
    std::optional<Metric> metric;
    std::optional<PowerGrid> ptx_dbm;
    std::optional<std::string> preset;
    std::optional<std::string> constellation;
    std::optional<std::vector<double>> theta;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    bool compare = false;
    bool expert = false;
};

struct SweepRow {
    std::string metric;  // metric[/curve][/theta=v]
    double ptx_dbm = 0.0;
    double analytic_value = 0.0;
    bool has_mc = false;
    double mc_value = 0.0;
    double mc_std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "metric,ptx_dbm,analytic_value,mc_value,mc_std_error,n_samples,seed";

// Preset first, then the config file, then the request's overrides.
Config resolve_config(const SweepRequest& req, const std::string& config_path = "");

// Rows in grid order: curves in file order, then theta, then power.
std::vector<SweepRow> sweep_rows(const Config& cfg, bool expert = false);

std::string format_csv(const std::vector<SweepRow>& rows);

// resolve_config + sweep_rows + format_csv
std::string run_sweep(const SweepRequest& req, const std::string& config_path = "");

}  // namespace fsorf
