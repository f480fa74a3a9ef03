#include "fsorf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fsorf/errors.hpp"

namespace fsorf {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// shortest round-trip form, for labels and messages
std::string short_num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct Task {
    const Scenario* scenario;
    std::string label;
    double ptx;
    double theta;
};

SweepRow evaluate(const Task& t, bool expert, int mc_workers) {
    const Scenario& s = *t.scenario;
    const SystemSpec spec = s.system_at(t.ptx);
    SimConfig sim;
    sim.system = spec;
    sim.n_samples = s.samples;
    sim.seed = s.seed;
    sim.workers = mc_workers;
    sim.effective_capacity_mode = s.ec_mode;

    SweepRow row;
    row.metric = t.label;
    row.ptx_dbm = t.ptx;
    row.seed = s.seed;
    Estimate mc;
    switch (s.metric) {
        case Metric::outage:
            row.analytic_value = outage(spec);
            if (s.compare) mc = simulate_outage(sim);
            break;
        case Metric::asym_outage:
            row.analytic_value = asymptotic_outage(spec).value;
            if (s.compare) mc = simulate_outage(sim);
            break;
        case Metric::ergodic:
            row.analytic_value = ergodic_capacity(spec);
            if (s.compare) mc = simulate_capacity(sim, CapacityKind::ergodic);
            break;
        case Metric::effective: {
            const EffectiveCapacity ec = effective_capacity(spec, t.theta);
            if (std::isfinite(ec.closed_form) && ec.discrepancy > kEffectiveCapacityWarnTol) {
                std::fprintf(stderr, "warning: %s at ptx_dbm=%g: closed form differs from quadrature by %.3g\n",
                             t.label.c_str(), t.ptx, ec.discrepancy);
            }
            row.analytic_value = ec.value;
            if (s.compare) mc = simulate_capacity(sim, CapacityKind::effective, t.theta);
            break;
        }
        case Metric::aser: {
            const ConstellationSpec c = parse_constellation(s.constellation);
            row.analytic_value = aser(c, spec, s.aser_options(expert));
            if (s.compare) mc = simulate_aser(sim, c, s.aser_model);
            break;
        }
    }
    if (s.compare) {
        row.has_mc = true;
        row.mc_value = mc.value;
        row.mc_std_error = mc.std_error;
        row.n_samples = mc.n;
    }
    return row;
}

}  // namespace

Config resolve_config(const SweepRequest& req, const std::string& config_path) {
    Config cfg;
    if (req.preset) cfg = load_config(preset_path(*req.preset));
    if (!config_path.empty()) {
        if (req.preset) overlay_config(cfg, read_file(config_path), config_path);
        else cfg = load_config(config_path);
    }
    if (cfg.curves.empty()) cfg.curves.push_back(cfg.base);
    for (Scenario& s : cfg.curves) {
        if (req.metric) s.metric = *req.metric;
        if (req.ptx_dbm) s.grid = *req.ptx_dbm;
        if (req.constellation) {
            parse_constellation(*req.constellation);
            s.constellation = *req.constellation;
        }
        if (req.theta) s.theta = *req.theta;
        if (req.samples) s.samples = *req.samples;
        if (req.seed) s.seed = *req.seed;
        if (req.compare) s.compare = true;
    }
    return cfg;
}

std::vector<SweepRow> sweep_rows(const Config& cfg, bool expert) {
    std::vector<Task> tasks;
    const bool many = cfg.curves.size() > 1;
    for (const Scenario& s : cfg.curves) {
        s.grid.validate();
        if (s.metric == Metric::aser && s.detector == Detector::im_dd && !expert) {
            throw UnsupportedError("curve '" + s.label +
                                   "': ASER is derived for heterodyne detection only; im_dd needs --expert");
        }
        if (s.compare && s.samples == 0) throw DomainError("curve '" + s.label + "': sim.samples must be positive");
        std::string base = to_string(s.metric);
        if (many || s.label != "default") base += "/" + s.label;
        const std::vector<double> thetas = s.metric == Metric::effective ? s.theta : std::vector<double>{0.0};
        for (double th : thetas) {
            if (s.metric == Metric::effective && !(th > 0.0)) throw DomainError("curve '" + s.label + "': theta must be positive");
            const std::string label = s.metric == Metric::effective ? base + "/theta=" + short_num(th) : base;
            for (double p : s.grid.points()) tasks.push_back({&s, label, p, th});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    const int total = default_workers();
    const int pool = std::max(1, std::min<int>(total, static_cast<int>(tasks.size())));
    const int mc_workers = std::max(1, total / pool);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<std::size_t> failed_at{tasks.size()};
    std::mutex mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) return;
            // points after a failure are skipped; earlier ones still run so
            // that the reported point does not depend on scheduling
            if (k > failed_at.load()) continue;
            try {
                rows[k] = evaluate(tasks[k], expert, mc_workers);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mutex);
                if (k < failed_at.load()) {
                    failed_at.store(k);
                    const Task& t = tasks[k];
                    failure = std::make_exception_ptr(
                        SweepError(t.label + " at ptx_dbm=" + short_num(t.ptx) + ": " + e.what()));
                }
            }
        }
    };
    if (pool == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < pool; ++w) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SweepRow& r : rows) {
        out += r.metric;
        out += ',' + num(r.ptx_dbm) + ',' + num(r.analytic_value) + ',';
        if (r.has_mc) out += num(r.mc_value) + ',' + num(r.mc_std_error) + ',' + std::to_string(r.n_samples);
        else out += ",,";
        out += ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string run_sweep(const SweepRequest& req, const std::string& config_path) {
    return format_csv(sweep_rows(resolve_config(req, config_path), req.expert));
}

}  // namespace fsorf
