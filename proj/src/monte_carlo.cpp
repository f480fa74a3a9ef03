#include "fsorf/monte_carlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fsorf/errors.hpp"

namespace fsorf {

int default_workers() {
    if (const char* env = std::getenv("FSORF_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw DomainError(std::string("FSORF_WORKERS must be a positive integer, got '") + env + "'");
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

struct Draw {
    double gamma_r;
    double gamma_u;
    bool gate;
};

Draw draw(const SystemSpec& spec, RngStream& rng) {
    Draw d;
    d.gamma_r = sample_fso_snr(spec.fso, rng);
    d.gamma_u = sample_best_user_outdated(spec.rf, rng);
    d.gate = d.gamma_r >= spec.delta_th;
    return d;
}

template <std::size_t K>
using Acc = std::array<double, K>;

template <std::size_t K>
Acc<K> pairwise(const std::vector<Acc<K>>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    Acc<K> a = pairwise(v, lo, mid);
    const Acc<K> b = pairwise(v, mid, hi);
    for (std::size_t i = 0; i < K; ++i) a[i] += b[i];
    return a;
}

// Runs sample(rng, acc) n_samples times over fixed blocks and reduces the
// per-block accumulators in a fixed tree order.
template <std::size_t K, class Sample>
Acc<K> run_blocks(const SimConfig& cfg, Sample sample) {
    cfg.system.validate();
    if (cfg.n_samples == 0) throw DomainError("SimConfig: n_samples must be positive");
    const std::uint64_t n = cfg.n_samples;
    const std::uint64_t nblocks = (n + kSamplesPerBlock - 1) / kSamplesPerBlock;
    std::vector<Acc<K>> partial(nblocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                RngStream rng(cfg.seed, b);
                const std::uint64_t count = std::min(kSamplesPerBlock, n - b * kSamplesPerBlock);
                Acc<K> acc{};
                for (std::uint64_t i = 0; i < count; ++i) sample(rng, acc);
                partial[b] = acc;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(nblocks);
        }
    };

    const int workers = std::max<std::uint64_t>(
        1, std::min<std::uint64_t>(nblocks, cfg.workers > 0 ? cfg.workers : default_workers()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return pairwise(partial, 0, partial.size());
}

Estimate mean_estimate(double s1, double s2, std::uint64_t n) {
    Estimate e;
    e.n = n;
    e.value = s1 / n;
    const double var = n > 1 ? std::max(0.0, (s2 - s1 * s1 / n) / (n - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / n);
    return e;
}

}  // namespace

double sample_e2e(const SystemSpec& spec, RngStream& rng) {
    const Draw d = draw(spec, rng);
    return d.gate ? d.gamma_u : 0.0;
}

double sample_e2e_min(const SystemSpec& spec, RngStream& rng) {
    const Draw d = draw(spec, rng);
    return std::min(d.gamma_r, d.gamma_u);
}

Estimate simulate_outage(const SimConfig& cfg) {
    const SystemSpec& spec = cfg.system;
    const Acc<1> acc = run_blocks<1>(cfg, [&](RngStream& rng, Acc<1>& a) {
        const Draw d = draw(spec, rng);
        if (!d.gate || d.gamma_u < spec.gamma_th) a[0] += 1.0;
    });
    Estimate e;
    e.n = cfg.n_samples;
    e.value = acc[0] / cfg.n_samples;
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / cfg.n_samples);
    return e;
}

Estimate simulate_capacity(const SimConfig& cfg, CapacityKind kind, double theta) {
    const SystemSpec& spec = cfg.system;
    const double varrho = capacity_rho(spec.fso.detector);
    const std::uint64_t n = cfg.n_samples;
    if (kind == CapacityKind::ergodic) {
        const Acc<2> acc = run_blocks<2>(cfg, [&](RngStream& rng, Acc<2>& a) {
            const Draw d = draw(spec, rng);
            const double r = d.gate ? 0.5 * std::log2(1.0 + varrho * d.gamma_u) : 0.0;
            a[0] += r;
            a[1] += r * r;
        });
        return mean_estimate(acc[0], acc[1], n);
    }
    if (!(theta > 0.0)) throw DomainError("simulate_capacity: theta must be positive");
    const double theta_hat = theta / (2.0 * std::log(2.0));
    // Accumulating 1 - (1 + varrho g)^{-theta_hat} keeps small theta accurate.
    auto deficit = [&](double g) { return -std::expm1(-theta_hat * std::log1p(varrho * g)); };
    // Both the deficit x and its complement y = 1 - x are accumulated; the
    // smaller of the two means is the one that keeps its digits.
    if (cfg.effective_capacity_mode == EffectiveCapacityMode::strict) {
        const Acc<4> acc = run_blocks<4>(cfg, [&](RngStream& rng, Acc<4>& a) {
            const Draw d = draw(spec, rng);
            const double x = d.gate ? deficit(d.gamma_u) : 0.0;
            const double y = d.gate ? std::exp(-theta_hat * std::log1p(varrho * d.gamma_u)) : 1.0;
            a[0] += x;
            a[1] += x * x;
            a[2] += y;
            a[3] += y * y;
        });
        const Estimate mx = mean_estimate(acc[0], acc[1], n);
        const Estimate my = mean_estimate(acc[2], acc[3], n);
        Estimate e;
        e.n = n;
        e.value = (mx.value <= 0.5 ? -std::log1p(-mx.value) : -std::log(my.value)) / theta;
        e.std_error = mx.std_error / (theta * my.value);
        return e;
    }
    const Acc<5> acc = run_blocks<5>(cfg, [&](RngStream& rng, Acc<5>& a) {
        const Draw d = draw(spec, rng);
        const double x = deficit(d.gamma_u);
        const double y = std::exp(-theta_hat * std::log1p(varrho * d.gamma_u));
        if (d.gate) a[0] += 1.0;
        a[1] += x;
        a[2] += x * x;
        a[3] += y;
        a[4] += y * y;
    });
    const double p = acc[0] / n;
    const Estimate mx = mean_estimate(acc[1], acc[2], n);
    const Estimate my = mean_estimate(acc[3], acc[4], n);
    const double log_w = mx.value <= 0.5 ? std::log1p(-mx.value) : std::log(my.value);
    Estimate e;
    e.n = n;
    e.value = -p * log_w / theta;
    const double var_p = p * (1.0 - p) / n;
    const double se_log = mx.std_error / my.value;
    e.std_error = std::sqrt(log_w * log_w * var_p + p * p * se_log * se_log) / theta;
    return e;
}

Estimate simulate_aser(const SimConfig& cfg, const ConstellationSpec& c, AserModel model) {
    const SystemSpec& spec = cfg.system;
    const Acc<2> acc = run_blocks<2>(cfg, [&](RngStream& rng, Acc<2>& a) {
        const Draw d = draw(spec, rng);
        const double g = model == AserModel::selective_df ? (d.gate ? d.gamma_u : 0.0) : std::min(d.gamma_r, d.gamma_u);
        const double p = conditional_sep(c, g);
        a[0] += p;
        a[1] += p * p;
    });
    return mean_estimate(acc[0], acc[1], cfg.n_samples);
}

}  // namespace fsorf
