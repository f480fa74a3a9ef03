// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fsorf/config.hpp"
#include "fsorf/errors.hpp"
#include "fsorf/metrics.hpp"
#include "fsorf/monte_carlo.hpp"
#include "oracles.hpp"

using namespace fsorf;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    std::printf("    ");
    std::vprintf(fmt, ap);
    std::printf("\n");
    va_end(ap);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return v;
}

Scenario scenario(Detector det, double xi, double rho, double m, int nt, int n = 2) {
    Scenario s;
    s.detector = det;
    s.xi = xi;
    s.rho = rho;
    s.m = m;
    s.n_t = nt;
    s.n_users = n;
    return s;
}

// Power at which a decreasing function of ptx crosses level.
double crossing(const std::function<double(double)>& f, double level, double lo, double hi) {
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > level) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ASER with the truncation doubled until the series check is satisfied.
double converged_aser(const ConstellationSpec& c, const SystemSpec& s) {
    AserOptions o;
    for (int z = 80;; z *= 2) {
        o.policy.z1_terms = z;
        try {
            return aser(c, s, o);
        } catch (const ConvergenceError&) {
            if (z >= 6400) throw;
        }
    }
}

bool within(double analytic, const Estimate& e) {
    return std::fabs(analytic - e.value) <= std::max(3.0 * e.std_error, 0.05 * analytic);
}

// 1. Meijer-G CDF against quadrature of the density.
Outcome master_oracle() {
    double worst = 0.0;
    for (Detector det : {Detector::heterodyne, Detector::im_dd}) {
        for (double xi : {1.1, 6.7}) {
            const FsoChannelSpec f = FsoChannelSpec::with_mu(2.902, 2.51, xi, det, 100.0);
            const double mu = f.mu();
            auto pdf = [&](double x) { return fso_snr_pdf(f, x); };
            const std::vector<double> xs = logspace(1e-3 * mu, 1e3 * mu, 25);
            // the running integral starts from a few decades below the grid
            double acc = 0.0, lo = 0.0;
            for (double c : logspace(1e-9 * mu, 1e-4 * mu, 6)) {
                acc += oracle::tanh_sinh(pdf, lo, c, 1.0 / 32);
                lo = c;
            }
            double e_max = 0.0;
            for (double x : xs) {
                acc += oracle::tanh_sinh(pdf, lo, x, 1.0 / 32);
                lo = x;
                e_max = std::max(e_max, std::fabs(fso_snr_cdf(f, x) - acc));
            }
            note("i=%d xi=%.1f: max |F - int f| = %.2e", f.i(), xi, e_max);
            worst = std::max(worst, e_max);
        }
    }
    return {worst <= 1e-8, fmt("max abs error %.2e (limit 1e-8)", worst)};
}

// 2. phi coefficients against term enumeration.
Outcome recursion_exactness() {
    double worst = 0.0;
    for (int big_l = 1; big_l <= 6; ++big_l) {
        for (int k = 0; k <= 5; ++k) {
            std::vector<double> ref(k * (big_l - 1) + 1, 0.0);
            std::vector<int> q(k, 0);
            for (;;) {
                int deg = 0;
                double w = 1.0;
                for (int e : q) {
                    deg += e;
                    w /= std::tgamma(e + 1.0);
                }
                ref[deg] += w;
                int pos = 0;
                while (pos < k && ++q[pos] == big_l) q[pos++] = 0;
                if (pos == k) break;
            }
            const std::vector<double> got = phi_coeffs(k, big_l);
            if (got.size() != ref.size()) return {false, fmt("length mismatch at k=%g L=%g", k, big_l)};
            for (std::size_t l = 0; l < ref.size(); ++l) {
                worst = std::max(worst, std::fabs(got[l] - ref[l]) / std::max(1.0, std::fabs(ref[l])));
            }
        }
    }
    return {worst <= 1e-12, fmt("max error %.2e (limit 1e-12)", worst)};
}

// 3. rho = 1 reduces to perfect-CSI order statistics.
Outcome degeneracy() {
    double worst = 0.0;
    for (double m : {1.0, 2.0}) {
        for (int nt : {1, 2}) {
            for (int n : {1, 2}) {
                const RfNetworkSpec rf{m, nt, n, 1.0, 10.0};
                for (double x : logspace(1e-2, 1e3, 50)) {
                    const double ref = std::pow(boost::math::gamma_p(m * nt, m * x / rf.gamma_bar_u), n);
                    worst = std::max(worst, std::fabs(best_user_outdated_cdf(rf, x) - ref));
                }
            }
        }
    }
    return {worst <= 1e-10, fmt("max abs error %.2e (limit 1e-10)", worst)};
}

// 4. Outage against Monte Carlo and the rho gain.
Outcome outage_vs_mc() {
    Outcome out;
    const Config cfg = load_config(preset_path("fig2a"));
    int compared = 0, failed = 0;
    for (const Scenario& s : cfg.curves) {
        for (double p : s.grid.points()) {
            SimConfig sim;
            sim.system = s.system_at(p);
            sim.n_samples = 1000000;
            sim.seed = 2024;
            const double a = outage(sim.system);
            if (a < 1e-4) continue;
            const Estimate e = simulate_outage(sim);
            ++compared;
            if (!within(a, e)) {
                ++failed;
                note("%s at %g dBm: analytic %.4e, MC %.4e +- %.1e", s.label.c_str(), p, a, e.value, e.std_error);
            }
        }
    }
    note("%d points compared, %d outside max(3 SE, 5%%)", compared, failed);
    out.pass = failed == 0;

    std::string gains;
    for (double m : {1.0, 2.0}) {
        for (int nt : {1, 2}) {
            auto at = [&](double rho) {
                const Scenario s = scenario(Detector::heterodyne, 6.7, rho, m, nt);
                return crossing([&](double p) { return outage(s.system_at(p)); }, 1e-4, -10.0, 80.0);
            };
            const double gain = at(0.2) - at(0.8);
            const double target = (m == 2.0 && nt == 2) ? 2.6 : 3.7;
            const bool ok = std::fabs(gain - target) <= 0.5;
            note("rho 0.2->0.8 gain at 1e-4, m=%g N_t=%d: %.2f dB (target %.1f +- 0.5)%s", m, nt, gain, target,
                 ok ? "" : " outside");
            if (!ok) out.pass = false;
            gains += fmt(" %.2f", gain);
        }
    }
    out.detail = std::to_string(failed) + "/" + std::to_string(compared) + " MC mismatches; rho gains (dB)" + gains;
    return out;
}

// 5. High-SNR slope.
Outcome diversity_slope() {
    struct Case {
        Detector det;
        double xi, rho, m;
        int nt;
        double expect;
    };
    Outcome out;
    for (const Case& c : {Case{Detector::im_dd, 1.1, 0.8, 1, 2, 0.605}, Case{Detector::heterodyne, 6.7, 0.8, 1, 1, 1.0},
                          Case{Detector::heterodyne, 6.7, 1.0, 1, 1, 2.0}}) {
        auto sys = [&](double g) {
            SystemSpec s;
            s.fso = FsoChannelSpec::with_mu(2.902, 2.51, c.xi, c.det, g);
            s.rf = RfNetworkSpec{c.m, c.nt, 2, c.rho, g};
            return s;
        };
        // least-squares slope of log10 outage over one decade of common SNR
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = 5;
        for (int k = 0; k < n; ++k) {
            const double lx = 6.0 + k / (n - 1.0);
            const double ly = std::log10(outage(sys(std::pow(10.0, lx))));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double d = diversity_order(sys(1e6));
        const bool ok = std::fabs(slope - c.expect) <= 0.05 * c.expect && std::fabs(d - c.expect) < 1e-12;
        note("i=%d xi=%.1f rho=%.1f: slope %.4f, diversity order %.4f", static_cast<int>(c.det), c.xi, c.rho, slope,
             d);
        if (!ok) out.pass = false;
        out.detail += fmt(" %.3f/%.3f", slope, d);
    }
    out.detail = "slope/order" + out.detail;
    return out;
}

// 6. Ergodic capacity.
Outcome ergodic() {
    Outcome out;
    double worst = 0.0;
    for (double rho : {0.2, 0.8}) {
        for (double m : {1.0, 2.0}) {
            for (int nt : {1, 2}) {
                SimConfig sim;
                sim.system = scenario(Detector::heterodyne, 6.7, rho, m, nt).system_at(20.0);
                sim.n_samples = 1000000;
                sim.seed = 77;
                const double a = ergodic_capacity(sim.system);
                const Estimate e = simulate_capacity(sim, CapacityKind::ergodic);
                const double rel = std::fabs(e.value - a) / a;
                worst = std::max(worst, rel);
                note("rho=%.1f m=%g N_t=%d: analytic %.5f, MC %.5f (rel %.1e)", rho, m, nt, a, e.value, rel);
            }
        }
    }
    auto cap = [](double rho, double m, int nt) {
        return ergodic_capacity(scenario(Detector::heterodyne, 6.7, rho, m, nt).system_at(20.0));
    };
    const double base = cap(0.2, 1, 1);
    const double d_m = cap(0.2, 2, 1) - base, d_nt = cap(0.2, 1, 2) - base, d_rho = cap(0.8, 1, 1) - base;
    note("gains over rho=0.2 m=1 N_t=1: m %.3f, N_t %.3f, rho %.3f bits/s/Hz", d_m, d_nt, d_rho);
    out.pass = worst <= 0.01 && d_nt > d_m && std::fabs(d_nt - 0.67) <= 0.05 && std::fabs(d_m - 0.18) <= 0.05;
    out.detail = fmt("MC rel error %.1e; N_t gain %.3f, m gain %.3f", worst, d_nt, d_m);
    return out;
}

// 7. Effective capacity.
Outcome effective() {
    Outcome out;
    const Config cfg = load_config(preset_path("fig6"));
    const std::vector<double> thetas{1e-2, 1e-1, 1.0, 10.0, 1e3};
    double worst_small = 0.0, worst_ratio = 0.0, worst_z = 0.0;
    int skipped = 0;
    bool monotone = true;
    for (const Scenario& s : cfg.curves) {
        const SystemSpec sys = s.system_at(10.0);
        const double erg = ergodic_capacity(sys);
        worst_small = std::max(worst_small, std::fabs(effective_capacity(sys, 1e-4).value - erg) / erg);
        std::vector<double> v;
        for (double th : thetas) v.push_back(effective_capacity(sys, th).value);
        for (std::size_t k = 1; k < v.size(); ++k) monotone = monotone && v[k] <= v[k - 1];
        worst_ratio = std::max(worst_ratio, v.back() / v.front());

        // same rare-event rule as for the ASER: with fewer than ten expected
        // gate-open samples the estimate is not meaningful
        const double open = relay_decode_probability(sys);
        if (open * 1e6 < 10.0) {
            ++skipped;
            note("%s: C(1e-2)=%.3e C(1e3)=%.3e ratio %.4f; MC skipped (gate open with probability %.1e)",
                 s.label.c_str(), v.front(), v.back(), v.back() / v.front(), open);
            continue;
        }
        SimConfig sim;
        sim.system = sys;
        sim.n_samples = 1000000;
        sim.seed = 99;
        sim.effective_capacity_mode = EffectiveCapacityMode::paper;
        std::string zs;
        for (std::size_t k = 0; k < thetas.size(); ++k) {
            const Estimate e = simulate_capacity(sim, CapacityKind::effective, thetas[k]);
            const double z = std::fabs(e.value - v[k]) / e.std_error;
            worst_z = std::max(worst_z, z);
            zs += fmt(" %.1f", z);
        }
        note("%s: C(1e-2)=%.4f C(1e3)=%.5f ratio %.4f; MC |z| per theta:%s", s.label.c_str(), v.front(), v.back(),
             v.back() / v.front(), zs.c_str());
    }
    out.pass = worst_small <= 0.01 && monotone && worst_ratio < 0.01 && worst_z <= 3.0;
    out.detail = fmt("theta=1e-4 rel %.1e; last/first %.4f; max MC |z| %.1f", worst_small, worst_ratio, worst_z) +
                 "; " + std::to_string(skipped) + " curves without MC";
    if (!monotone) out.detail += "; not monotone";
    return out;
}

// 8. ASER against semi-analytic Monte Carlo and truncation doubling.
Outcome aser_vs_mc() {
    Outcome out;
    const Scenario base = scenario(Detector::heterodyne, 6.7, 0.8, 1, 2);
    PowerGrid grid;
    grid.start = -10.0;
    grid.stop = 40.0;
    grid.step = 2.5;
    const std::uint64_t n = 1000000;
    int compared = 0, skipped = 0, failed = 0, trips = 0;
    double worst_doubling = 0.0;
    for (const char* label : {"hqam:16", "rqam:8:4x2:1", "xqam:32"}) {
        const ConstellationSpec c = parse_constellation(label);
        for (double p : grid.points()) {
            const SystemSpec sys = base.system_at(p);
            AserOptions o80;
            o80.check_truncation = false;
            AserOptions o160 = o80;
            o160.policy.z1_terms = 160;
            AserOptions guarded;
            try {
                aser(c, sys, guarded);
            } catch (const ConvergenceError&) {
                ++trips;
            }
            const double a = aser(c, sys, o80);
            const double a2 = aser(c, sys, o160);
            const double dbl = std::fabs(a2 - a) / a;
            worst_doubling = std::max(worst_doubling, dbl);
            if (dbl >= 1e-6) note("%s at %g dBm: 80 vs 160 terms differ by %.1e", label, p, dbl);

            // The gate-closed event adds F_R(delta) P_s(0). When it is seen
            // fewer than ten times in n samples and could move the ASER by
            // more than the 5% tolerance, the point is not compared.
            const double closed = fso_snr_cdf(sys.fso, sys.delta_th);
            if (closed * n < 10.0 && closed * conditional_sep(c, 0.0) > 0.05 * a) {
                ++skipped;
                continue;
            }
            SimConfig sim;
            sim.system = sys;
            sim.n_samples = n;
            sim.seed = 31;
            const Estimate e = simulate_aser(sim, c);
            ++compared;
            if (!within(a, e)) {
                ++failed;
                note("%s at %g dBm: analytic %.4e, MC %.4e +- %.1e", label, p, a, e.value, e.std_error);
            }
        }
    }
    note("%d points compared, %d skipped as rare-event, %d outside max(3 SE, 5%%); guard trips at 80 terms: %d",
         compared, skipped, failed, trips);
    out.pass = failed == 0 && worst_doubling < 1e-6;
    out.detail = std::to_string(failed) + "/" + std::to_string(compared) + " MC mismatches; doubling " +
                 fmt("%.1e", worst_doubling) + "; " + std::to_string(trips) + " guard trips";
    return out;
}

// 9. Constellation ordering at ASER 1e-3.
Outcome constellation_ordering() {
    Outcome out;
    const Scenario s = scenario(Detector::heterodyne, 6.7, 0.8, 1, 2);
    auto power = [&](const std::string& label) {
        const ConstellationSpec c = parse_constellation(label);
        return crossing([&](double p) { return converged_aser(c, s.system_at(p)); }, 1e-3, -10.0, 70.0);
    };
    struct Pair {
        int m;
        double gain;
        double tol;
    };
    for (const Pair& pr : {Pair{16, 0.3, 0.15}, Pair{64, 0.5, 0.15}, Pair{256, 0.65, 0.15}, Pair{4, -0.14, 0.1}}) {
        const double g = power("sqam:" + std::to_string(pr.m)) - power("hqam:" + std::to_string(pr.m));
        const bool ok = std::fabs(g - pr.gain) <= pr.tol;
        note("M=%d: HQAM gain over SQAM %.3f dB (target %.2f +- %.2f)%s", pr.m, g, pr.gain, pr.tol,
             ok ? "" : " outside");
        if (!ok) out.pass = false;
        out.detail += fmt(" %g:%.2f", pr.m, g);
    }
    const char* odd[][2] = {{"xqam:32", "rqam:32:8x4:1"}, {"xqam:128", "rqam:128:16x8:1"},
                            {"xqam:512", "rqam:512:32x16:1"}};
    for (const auto& pr : odd) {
        const double g = power(pr[1]) - power(pr[0]);
        note("%s over %s: %.3f dB", pr[0], pr[1], g);
        if (!(g > 0.0)) out.pass = false;
        out.detail += std::string(" ") + pr[0] + fmt(":%.2f", g);
    }
    out.detail = "gains (dB)" + out.detail;
    return out;
}

// 10. Closed-form SEP derivatives against centered differences.
Outcome derivative_layer() {
    double worst = 0.0;
    for (const char* label : {"hqam:4", "hqam:16", "hqam:64", "hqam:256", "hqam:1024", "hqam:32", "sqam:4", "sqam:16",
                              "sqam:256", "rqam:8:4x2:1", "rqam:32:8x4:1", "rqam:128:16x8:1", "xqam:32", "xqam:128",
                              "xqam:512"}) {
        const ConstellationSpec c = parse_constellation(label);
        auto central = [&](double g, double h) {
            return (conditional_sep(c, g + h) - conditional_sep(c, g - h)) / (2.0 * h);
        };
        for (double g : logspace(0.1, 50.0, 40)) {
            // Richardson step on two centered differences; a short step loses
            // too many digits where the SEP is near 1 and flat
            const double h = 1e-3 * g;
            const double fd = (4.0 * central(g, 0.5 * h) - central(g, h)) / 3.0;
            worst = std::max(worst, std::fabs(sep_derivative(c, g) - fd) / std::fabs(fd));
        }
    }
    return {worst <= 1e-6, fmt("max rel error %.2e (limit 1e-6)", worst)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
        double budget_s;
    };
    const Criterion criteria[] = {
        {"master oracle: Meijer-G CDF vs density quadrature", master_oracle, 30},
        {"phi coefficient recursion", recursion_exactness, 1},
        {"perfect-CSI degeneracy at rho=1", degeneracy, 5},
        {"outage vs Monte Carlo and rho gain", outage_vs_mc, 300},
        {"diversity slope", diversity_slope, 120},
        {"ergodic capacity", ergodic, 180},
        {"effective capacity", effective, 120},
        {"ASER vs Monte Carlo and truncation", aser_vs_mc, 300},
        {"constellation ordering", constellation_ordering, 300},
        {"SEP derivatives", derivative_layer, 10},
    };
    int failures = 0, k = 0;
    for (const Criterion& c : criteria) {
        ++k;
        std::printf("criterion %d: %s\n", k, c.name);
        std::fflush(stdout);
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %g s budget", c.budget_s);
        }
        std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d of %d criteria passed\n", k - failures, k);
    return failures == 0 ? 0 : 1;
}
