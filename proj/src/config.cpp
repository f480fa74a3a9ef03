#include "fsorf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "fsorf/errors.hpp"

#ifndef FSORF_PRESET_DIR
#define FSORF_PRESET_DIR "presets"
#endif

namespace fsorf {

const char* to_string(Metric m) {
    switch (m) {
        case Metric::outage: return "outage";
        case Metric::asym_outage: return "asym_outage";
        case Metric::ergodic: return "ergodic";
        case Metric::effective: return "effective";
        case Metric::aser: return "aser";
    }
    return "?";
}

Metric parse_metric(const std::string& s) {
    for (Metric m : {Metric::outage, Metric::asym_outage, Metric::ergodic, Metric::effective, Metric::aser}) {
        if (s == to_string(m)) return m;
    }
    throw DomainError("unknown metric '" + s + "' (expected outage, asym_outage, ergodic, effective or aser)");
}

std::vector<double> PowerGrid::points() const {
    validate();
    const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v;
    v.reserve(n);
    for (long k = 0; k < n; ++k) v.push_back(start + k * step);
    return v;
}

void PowerGrid::validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop)) throw DomainError("power grid: bounds must be finite");
    if (start > stop) throw DomainError("power grid: start must not exceed stop");
    if (!(step > 0.0)) throw DomainError("power grid: step must be positive");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
    return s;
}

double to_double(const std::string& v) {
    const char* p = v.c_str();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(p, &end);
    if (end == p || *end != '\0' || errno == ERANGE) throw DomainError("expected a number, got '" + v + "'");
    return d;
}

long long to_integer(const std::string& v) {
    const char* p = v.c_str();
    char* end = nullptr;
    errno = 0;
    const long long i = std::strtoll(p, &end, 10);
    if (end == p || *end != '\0' || errno == ERANGE) throw DomainError("expected an integer, got '" + v + "'");
    return i;
}

std::uint64_t to_count(const std::string& v) {
    const double d = to_double(v);  // accepts 1e6
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e18) throw DomainError("expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw DomainError("expected true or false, got '" + v + "'");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
    if (out.empty()) throw DomainError("expected a comma-separated list of numbers");
    return out;
}

struct Field {
    const char* key;
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

#define NUM(k, expr) \
    Field { k, [](Scenario& s, const std::string& v) { expr = to_double(v); }, [](const Scenario& s) { return fmt(expr); } }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        NUM("fso.p_s_dbm", s.fso_budget.p_s_dbm),
        NUM("fso.d_s", s.fso_budget.d_s),
        NUM("fso.d_r", s.fso_budget.d_r),
        NUM("fso.lambda_f", s.fso_budget.lambda_f),
        NUM("fso.a_atm_db", s.fso_budget.a_atm_db),
        NUM("fso.a_fs_db", s.fso_budget.a_fs_db),
        NUM("fso.l_lenses_db", s.fso_budget.l_lenses_db),
        NUM("fso.m_s_db", s.fso_budget.m_s_db),
        NUM("fso.b_o", s.fso_budget.b_o),
        NUM("fso.temp_k", s.fso_budget.temp_k),
        NUM("fso.eta", s.fso_budget.eta),
        {"fso.gain_model",
         [](Scenario& s, const std::string& v) {
             if (v == "paper") s.fso_budget.gain_model = GainModel::paper;
             else if (v == "aperture") s.fso_budget.gain_model = GainModel::aperture;
             else throw DomainError("expected paper or aperture, got '" + v + "'");
         },
         [](const Scenario& s) { return std::string(s.fso_budget.gain_model == GainModel::paper ? "paper" : "aperture"); }},
        {"fso.zeta_model",
         [](Scenario& s, const std::string& v) {
             if (v == "amplitude") s.fso_budget.zeta_model = ZetaModel::amplitude;
             else if (v == "power_halved") s.fso_budget.zeta_model = ZetaModel::power_halved;
             else throw DomainError("expected amplitude or power_halved, got '" + v + "'");
         },
         [](const Scenario& s) {
             return std::string(s.fso_budget.zeta_model == ZetaModel::amplitude ? "amplitude" : "power_halved");
         }},
        NUM("fso.alpha", s.alpha),
        NUM("fso.beta", s.beta),
        NUM("fso.xi", s.xi),
        {"fso.detector", [](Scenario& s, const std::string& v) { s.detector = parse_detector(v.c_str()); },
         [](const Scenario& s) { return std::string(to_string(s.detector)); }},

        NUM("rf.p_r_dbm", s.rf_budget.p_r_dbm),
        NUM("rf.f_rf", s.rf_budget.f_rf),
        NUM("rf.alpha_t", s.rf_budget.alpha_t),
        NUM("rf.h_km", s.rf_budget.h_km),
        NUM("rf.r_n_m", s.rf_budget.r_n_m),
        NUM("rf.b_r", s.rf_budget.b_r),
        NUM("rf.temp_k", s.rf_budget.temp_k),
        NUM("rf.user_distance_m", s.rf_budget.user_distance_m),
        NUM("rf.omega", s.rf_budget.omega),
        NUM("rf.m", s.m),
        {"rf.n_t", [](Scenario& s, const std::string& v) { s.n_t = static_cast<int>(to_integer(v)); },
         [](const Scenario& s) { return std::to_string(s.n_t); }},
        {"rf.n_users", [](Scenario& s, const std::string& v) { s.n_users = static_cast<int>(to_integer(v)); },
         [](const Scenario& s) { return std::to_string(s.n_users); }},
        NUM("rf.rho", s.rho),

        NUM("thresholds.delta_th_db", s.delta_th_db),
        NUM("thresholds.gamma_th_db", s.gamma_th_db),

        {"sim.samples", [](Scenario& s, const std::string& v) { s.samples = to_count(v); },
         [](const Scenario& s) { return std::to_string(s.samples); }},
        {"sim.seed", [](Scenario& s, const std::string& v) { s.seed = to_count(v); },
         [](const Scenario& s) { return std::to_string(s.seed); }},
        {"sim.z1_terms", [](Scenario& s, const std::string& v) { s.z1_terms = static_cast<int>(to_integer(v)); },
         [](const Scenario& s) { return std::to_string(s.z1_terms); }},
        {"sim.aser_model",
         [](Scenario& s, const std::string& v) {
             if (v == "selective_df") s.aser_model = AserModel::selective_df;
             else if (v == "per_snr_threshold") s.aser_model = AserModel::per_snr_threshold;
             else throw DomainError("expected selective_df or per_snr_threshold, got '" + v + "'");
         },
         [](const Scenario& s) {
             return std::string(s.aser_model == AserModel::selective_df ? "selective_df" : "per_snr_threshold");
         }},
        {"sim.effective_capacity_mode",
         [](Scenario& s, const std::string& v) {
             if (v == "paper") s.ec_mode = EffectiveCapacityMode::paper;
             else if (v == "strict") s.ec_mode = EffectiveCapacityMode::strict;
             else throw DomainError("expected paper or strict, got '" + v + "'");
         },
         [](const Scenario& s) { return std::string(s.ec_mode == EffectiveCapacityMode::paper ? "paper" : "strict"); }},

        {"sweep.metric", [](Scenario& s, const std::string& v) { s.metric = parse_metric(v); },
         [](const Scenario& s) { return std::string(to_string(s.metric)); }},
        {"sweep.ptx_dbm", [](Scenario& s, const std::string& v) { s.grid = parse_power_grid(v); },
         [](const Scenario& s) { return fmt(s.grid.start) + ":" + fmt(s.grid.stop) + ":" + fmt(s.grid.step); }},
        {"sweep.drive",
         [](Scenario& s, const std::string& v) {
             if (v == "joint") s.drive = PowerDrive::joint;
             else if (v == "fso") s.drive = PowerDrive::fso;
             else if (v == "rf") s.drive = PowerDrive::rf;
             else throw DomainError("expected joint, fso or rf, got '" + v + "'");
         },
         [](const Scenario& s) {
             return std::string(s.drive == PowerDrive::joint ? "joint" : s.drive == PowerDrive::fso ? "fso" : "rf");
         }},
        {"sweep.theta", [](Scenario& s, const std::string& v) { s.theta = to_list(v); },
         [](const Scenario& s) {
             std::string out;
             for (double t : s.theta) out += (out.empty() ? "" : ",") + fmt(t);
             return out;
         }},
        {"sweep.constellation",
         [](Scenario& s, const std::string& v) {
             parse_constellation(v);
             s.constellation = v;
         },
         [](const Scenario& s) { return s.constellation; }},
        {"sweep.compare", [](Scenario& s, const std::string& v) { s.compare = to_bool(v); },
         [](const Scenario& s) { return std::string(s.compare ? "true" : "false"); }},
    };
    return table;
}

#undef NUM

const Field* find_field(const std::string& key) {
    for (const Field& f : fields()) {
        if (key == f.key) return &f;
    }
    return nullptr;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '=' || c == '+';
    });
}

struct Assignment {
    std::string key, value;
    int line;
};

struct Parsed {
    std::vector<Assignment> base;
    std::vector<std::pair<std::string, std::vector<Assignment>>> blocks;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
}

Parsed parse_lines(const std::string& text, const std::string& source) {
    Parsed p;
    std::vector<Assignment>* cur = &p.base;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(source, line, "unterminated section header");
            std::string inner = trim(s.substr(1, s.size() - 2));
            if (inner.rfind("curve", 0) != 0) fail(source, line, "unknown section '" + inner + "' (expected [curve <label>])");
            const std::string label = trim(inner.substr(5));
            if (!valid_label(label)) {
                fail(source, line, "curve label '" + label + "' must be nonempty and use only letters, digits and _-.=+");
            }
            for (const auto& b : p.blocks) {
                if (b.first == label) fail(source, line, "duplicate curve label '" + label + "'");
            }
            p.blocks.emplace_back(label, std::vector<Assignment>{});
            cur = &p.blocks.back().second;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(source, line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = unquote(trim(s.substr(eq + 1)));
        if (!find_field(key)) fail(source, line, "unknown key '" + key + "'");
        if (value.empty()) fail(source, line, "key '" + key + "' has an empty value");
        cur->push_back({key, value, line});
    }
    return p;
}

void apply(Scenario& s, const std::vector<Assignment>& as, const std::string& source) {
    for (const Assignment& a : as) {
        try {
            find_field(a.key)->set(s, a.value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(source, a.line, "key '" + a.key + "': " + e.what());
        }
    }
}

}  // namespace

PowerGrid parse_power_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    PowerGrid g;
    if (parts.size() == 1) {
        g.start = g.stop = to_double(parts[0]);
        g.step = 1.0;
    } else if (parts.size() == 3) {
        g.start = to_double(parts[0]);
        g.stop = to_double(parts[1]);
        g.step = to_double(parts[2]);
    } else {
        throw DomainError("power grid must be 'start:stop:step' or a single value, got '" + text + "'");
    }
    g.validate();
    return g;
}

void set_key(Scenario& s, const std::string& key, const std::string& value) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown key '" + key + "'");
    try {
        f->set(s, value);
    } catch (const std::exception& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const Field& f : fields()) keys.emplace_back(f.key);
    return keys;
}

SystemSpec Scenario::system_at(double ptx_dbm) const {
    FsoBudget fb = fso_budget;
    RfBudget rb = rf_budget;
    if (drive != PowerDrive::rf) fb.p_s_dbm = ptx_dbm;
    if (drive != PowerDrive::fso) rb.p_r_dbm = ptx_dbm;
    SystemSpec spec;
    spec.fso = FsoChannelSpec{alpha, beta, xi, detector, fso_average_snr(fb, detector)};
    spec.rf = RfNetworkSpec{m, n_t, n_users, rho, rf_average_snr(rb)};
    spec.delta_th = std::pow(10.0, delta_th_db / 10.0);
    spec.gamma_th = std::pow(10.0, gamma_th_db / 10.0);
    spec.validate();
    return spec;
}

AserOptions Scenario::aser_options(bool expert) const {
    AserOptions o;
    o.policy.z1_terms = z1_terms;
    o.model = aser_model;
    o.allow_im_dd = expert;
    return o;
}

Config parse_config(const std::string& text, const std::string& source) {
    Config cfg;
    overlay_config(cfg, text, source);
    return cfg;
}

void overlay_config(Config& cfg, const std::string& text, const std::string& source) {
    const Parsed p = parse_lines(text, source);
    apply(cfg.base, p.base, source);
    for (Scenario& c : cfg.curves) apply(c, p.base, source);
    for (const auto& [label, as] : p.blocks) {
        auto it = std::find_if(cfg.curves.begin(), cfg.curves.end(), [&](const Scenario& c) { return c.label == label; });
        if (it == cfg.curves.end()) {
            Scenario c = cfg.base;
            c.label = label;
            cfg.curves.push_back(c);
            it = cfg.curves.end() - 1;
        }
        apply(*it, as, source);
    }
    if (cfg.curves.empty()) cfg.curves.push_back(cfg.base);
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

ValidationReport validate_config(const Config& cfg, bool expert) {
    ValidationReport r;
    std::ostringstream os;
    auto issue = [&](bool error, const std::string& label, const std::string& msg) {
        os << (error ? "error" : "warning") << " [" << label << "]: " << msg << '\n';
        (error ? r.errors : r.warnings) += 1;
    };
    for (const Scenario& s : cfg.curves) {
        os << "[curve " << s.label << "]\n";
        for (const Field& f : fields()) os << "  " << f.key << " = " << f.get(s) << '\n';

        auto check = [&](const char* what, auto&& fn) {
            try {
                fn();
            } catch (const std::exception& e) {
                issue(true, s.label, std::string(what) + ": " + e.what());
            }
        };
        check("fso budget", [&] { s.fso_budget.validate(); });
        check("rf budget", [&] { s.rf_budget.validate(); });
        check("fso channel", [&] { FsoChannelSpec{s.alpha, s.beta, s.xi, s.detector, 1.0}.validate(); });
        check("rf network", [&] { RfNetworkSpec{s.m, s.n_t, s.n_users, s.rho, 1.0}.validate(); });
        check("sweep.ptx_dbm", [&] { s.grid.validate(); });
        check("sweep.constellation", [&] { parse_constellation(s.constellation); });
        if (!std::isfinite(s.delta_th_db)) issue(true, s.label, "thresholds.delta_th_db must be finite");
        if (!std::isfinite(s.gamma_th_db)) issue(true, s.label, "thresholds.gamma_th_db must be finite");
        if (s.z1_terms < 1) issue(true, s.label, "sim.z1_terms must be >= 1");
        if (s.samples == 0) issue(true, s.label, "sim.samples must be positive");
        for (double t : s.theta) {
            if (!(t > 0.0)) issue(true, s.label, "sweep.theta values must be positive");
        }
        if (s.metric == Metric::aser && s.detector == Detector::im_dd && !expert) {
            issue(false, s.label,
                  "ASER is derived for heterodyne detection only; fso.detector = im_dd needs --expert");
        }
        if (s.samples < kMinMeaningfulSamples && s.compare) {
            issue(false, s.label, "sim.samples below " + std::to_string(kMinMeaningfulSamples) +
                                      " gives Monte Carlo estimates with little meaning");
        }

        bool ok = true;
        SystemSpec spec;
        try {
            spec = s.system_at(s.grid.start);
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok) {
            os << "  derived at ptx_dbm = " << fmt(s.grid.start) << ": gamma_bar_R = " << fmt(spec.fso.gamma_bar_r)
               << ", mu_i = " << fmt(spec.fso.mu()) << ", gamma_bar_U = " << fmt(spec.rf.gamma_bar_u)
               << ", delta_th = " << fmt(spec.delta_th) << ", gamma_th = " << fmt(spec.gamma_th) << '\n';
        }
    }
    os << r.errors << " error(s), " << r.warnings << " warning(s)\n";
    r.text = os.str();
    return r;
}

std::string preset_dir() {
    if (const char* env = std::getenv("FSORF_PRESET_DIR")) return env;
    return FSORF_PRESET_DIR;
}

std::string preset_path(const std::string& name) {
    if (!valid_label(name)) throw ConfigError("invalid preset name '" + name + "'");
    return preset_dir() + "/" + name + ".cfg";
}

}  // namespace fsorf
