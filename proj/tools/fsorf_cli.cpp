// fsorf: analytic and Monte Carlo sweeps for the satellite-UAV-user FSO/RF link.
//
//   fsorf --preset fig2a --out fig2a.csv
//   fsorf --metric aser --constellation hqam:16 --ptx-dbm 0:30:5 --compare
//   fsorf validate --config my.cfg

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fsorf/errors.hpp"
#include "fsorf/sweep.hpp"

namespace {

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 2;
    }
    out << text;
    return out ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage, capacity and ASER sweeps for a satellite-UAV FSO/RF relay network"};
    app.require_subcommand(0, 1);

    std::string metric, preset, ptx, config_path, out_path, constellation;
    std::vector<double> theta;
    std::uint64_t samples = 0, seed = 0;
    bool compare = false, expert = false;

    app.add_option("--metric", metric, "outage, asym_outage, ergodic, effective or aser");
    app.add_option("--preset", preset, "figure preset (fig2a, fig2b, fig3 ... fig9)");
    app.add_option("--ptx-dbm", ptx, "transmit power grid start:stop:step in dBm");
    auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo samples per point");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_flag("--compare", compare, "add Monte Carlo columns");
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_path, "CSV output path (default stdout)");
    app.add_option("--constellation", constellation, "family:M[:MixNq[:betaR]], e.g. hqam:16, rqam:8:4x2:1");
    app.add_option("--theta", theta, "delay exponent(s) for the effective capacity")->delimiter(',');
    app.add_flag("--expert", expert, "allow ASER with IM/DD detection");

    auto* validate = app.add_subcommand("validate", "echo the resolved configuration and flag problems");
    std::string v_config, v_preset;
    bool v_expert = false;
    validate->add_option("--config", v_config, "config file");
    validate->add_option("--preset", v_preset, "figure preset");
    validate->add_flag("--expert", v_expert, "allow ASER with IM/DD detection");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            fsorf::Config cfg;
            if (!v_preset.empty()) cfg = fsorf::load_config(fsorf::preset_path(v_preset));
            if (!v_config.empty()) {
                if (v_preset.empty()) {
                    cfg = fsorf::load_config(v_config);
                } else {
                    std::ifstream in(v_config, std::ios::binary);
                    if (!in) throw fsorf::ConfigError(v_config + ": cannot open config file");
                    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
                    fsorf::overlay_config(cfg, text, v_config);
                }
            }
            if (cfg.curves.empty()) cfg.curves.push_back(cfg.base);
            const fsorf::ValidationReport r = fsorf::validate_config(cfg, v_expert);
            std::fputs(r.text.c_str(), stdout);
            return r.errors > 0 ? 1 : 0;
        }

        fsorf::SweepRequest req;
        try {
            if (!metric.empty()) req.metric = fsorf::parse_metric(metric);
            if (!ptx.empty()) req.ptx_dbm = fsorf::parse_power_grid(ptx);
        } catch (const std::exception& e) {
            throw fsorf::ConfigError(std::string("command line: ") + e.what());
        }
        if (!preset.empty()) req.preset = preset;
        if (!constellation.empty()) req.constellation = constellation;
        if (!theta.empty()) req.theta = theta;
        if (samples_opt->count() > 0) req.samples = samples;
        if (seed_opt->count() > 0) req.seed = seed;
        req.compare = compare;
        req.expert = expert;
        if (req.preset && req.metric) {
            std::fprintf(stderr, "note: --metric overrides the metric of every curve in preset %s\n", preset.c_str());
        }
        return emit(fsorf::run_sweep(req, config_path), out_path);
    } catch (const fsorf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const fsorf::SweepError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
