#include "fsorf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fsorf/errors.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf {

void SystemSpec::validate() const {
    fso.validate();
    rf.validate();
    if (!(delta_th >= 0.0)) throw DomainError("SystemSpec: delta_th must be nonnegative");
    if (!(gamma_th >= 0.0)) throw DomainError("SystemSpec: gamma_th must be nonnegative");
}

double capacity_rho(Detector d) {
    return d == Detector::heterodyne ? 1.0 : std::exp(1.0) / (2.0 * M_PI);
}

double relay_decode_probability(const SystemSpec& spec) {
    return 1.0 - fso_snr_cdf(spec.fso, spec.delta_th);
}

double outage(const SystemSpec& spec) {
    spec.validate();
    const double fr = fso_snr_cdf(spec.fso, spec.delta_th);
    const double fu = best_user_outdated_cdf(spec.rf, spec.gamma_th);
    return fr + (1.0 - fr) * fu;
}

AsymptoticOutage asymptotic_outage(const SystemSpec& spec) {
    spec.validate();
    AsymptoticOutage out;
    const specfun::MeijerGSpec g = spec.fso.cdf_kernel();
    out.coalescing = specfun::meijer_g_coalescing(g);
    if (spec.delta_th > 0.0) {
        out.fso_term = spec.fso.A() * specfun::meijer_g_leading(g, spec.fso.B() * spec.delta_th / spec.fso.mu());
    }

    const RfNetworkSpec& rf = spec.rf;
    const int L = rf.big_l();
    const int N = rf.n_users;
    const double m = std::round(rf.m);
    const double x = m * spec.gamma_th / rf.gamma_bar_u;
    if (rf.rho == 1.0) {
        out.rf_term = std::pow(x, N * L) / std::pow(std::tgamma(L + 1.0), N);
    } else {
        double s = 0.0;
        const double lg_l = boost::math::lgamma(static_cast<double>(L));
        for (int k = 0; k < N; ++k) {
            const std::vector<double> phi = phi_coeffs(k, L);
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            const double bk = boost::math::binomial_coefficient<double>(N - 1, k);
            const double base = 1.0 + k * (1.0 - rf.rho);
            for (int l = 0; l < static_cast<int>(phi.size()); ++l) {
                const double d0 = sgn * bk * phi[l] *
                                  std::exp(boost::math::lgamma(L + l + 0.0) - 2.0 * lg_l - (L + l) * std::log(base)) / L *
                                  std::pow(1.0 - rf.rho, l);
                s += d0;
            }
        }
        out.rf_term = N * s * std::pow(x, L);
    }
    out.value = out.fso_term + out.rf_term;
    return out;
}

double diversity_order(const SystemSpec& spec) {
    spec.validate();
    const double ii = spec.fso.i();
    const double rf_order = spec.rf.rho == 1.0 ? double(spec.rf.n_users) * spec.rf.big_l() : double(spec.rf.big_l());
    return std::min({spec.fso.xi * spec.fso.xi / ii, spec.fso.alpha / ii, spec.fso.beta / ii, rf_order});
}

double ergodic_capacity(const SystemSpec& spec) {
    spec.validate();
    const double p1 = relay_decode_probability(spec);
    if (p1 == 0.0) return 0.0;
    const double varrho = capacity_rho(spec.fso.detector);
    // G^{1,3}_{3,2}[varrho/C2 | 1-C1, 1, 1; 1, 0] evaluated through the
    // inversion identity as G^{3,1}_{2,3}[C2/varrho | 0, 1; C1, 0, 0].
    std::map<std::pair<double, double>, double> cache;
    double s = 0.0;
    for (const RfTerm& t : rf_terms(spec.rf)) {
        const auto key = std::make_pair(t.c1, t.c2);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const specfun::MeijerGSpec g{3, 1, {0.0, 1.0}, {t.c1, 0.0, 0.0}};
            it = cache.emplace(key, specfun::meijer_g(g, t.c2 / varrho)).first;
        }
        s += t.c0 * std::exp(-t.c1 * std::log(t.c2)) * it->second;
    }
    const double c = spec.rf.n_users / (2.0 * std::log(2.0)) * s * p1;
    if (!(c >= -1e-12) || !std::isfinite(c)) {
        throw SanityError("ergodic_capacity: negative or non-finite result " + std::to_string(c));
    }
    return std::max(c, 0.0);
}

namespace {

// Gamma(s, x) for any real s and x > 0. Nonpositive s is reached by the
// downward recurrence Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s.
double upper_gamma_any(double s, double x) {
    if (s > 0.0) return boost::math::tgamma(s, x);
    int n = static_cast<int>(std::ceil(-s));
    double s0 = s + n;
    double g;
    if (s0 == 0.0) {
        g = boost::math::expint(1, x);
    } else {
        if (s0 < 1e-12) {
            ++n;
            s0 += 1.0;
        }
        g = boost::math::tgamma(s0, x);
    }
    for (double cur = s0; cur > s + 0.5;) {
        cur -= 1.0;
        g = (g - std::exp(cur * std::log(x) - x)) / cur;
    }
    return g;
}

double effective_closed_form(const std::vector<RfTerm>& terms, int n_users, double varrho, double theta_hat) {
    double s = 0.0;
    for (const RfTerm& t : terms) {
        const int c1 = static_cast<int>(std::lround(t.c1));
        const double b = t.c2 / varrho;
        double inner = 0.0;
        for (int z = 0; z < c1; ++z) {
            const double sv = z - theta_hat + 1.0;
            const double sign = ((c1 - 1 - z) % 2 == 0) ? 1.0 : -1.0;
            inner += boost::math::binomial_coefficient<double>(c1 - 1, z) * sign * std::exp(b - sv * std::log(b)) *
                     upper_gamma_any(sv, b);
        }
        s += t.c0 * std::pow(varrho, -t.c1) * inner;
    }
    return n_users * s;
}

}  // namespace

EffectiveCapacity effective_capacity(const SystemSpec& spec, double theta) {
    spec.validate();
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("effective_capacity: theta must be positive");
    const double p1 = relay_decode_probability(spec);
    const double varrho = capacity_rho(spec.fso.detector);
    const double theta_hat = theta / (2.0 * std::log(2.0));
    const std::vector<RfTerm> terms = rf_terms(spec.rf);
    const int n_users = spec.rf.n_users;

    auto pdf = [&](double x) {
        if (x <= 0.0) return 0.0;
        double s = 0.0;
        for (const RfTerm& t : terms) s += t.c0 * std::exp((t.c1 - 1.0) * std::log(x) - t.c2 * x);
        return n_users * s;
    };
    // 1 - E[(1 + varrho g)^{-theta_hat}], integrated directly so that small
    // theta keeps its relative accuracy.
    auto integrand = [&](double x) { return -std::expm1(-theta_hat * std::log1p(varrho * x)) * pdf(x); };
    double knee = 0.0;
    for (const RfTerm& t : terms) knee = std::max(knee, t.c1 / t.c2);
    const double deficit = specfun::integrate_semi_infinite(integrand, 1e-13, knee);

    EffectiveCapacity out;
    if (deficit <= 0.5) {
        out.value = -(1.0 / theta) * p1 * std::log1p(-deficit);
    } else {
        // E[(1 + varrho g)^{-theta_hat}] itself is small here and 1 - deficit
        // would lose it; the mass sits near the peak of x^{C1-1} e^{-(C2 + varrho theta_hat) x}.
        auto direct = [&](double x) { return std::exp(-theta_hat * std::log1p(varrho * x)) * pdf(x); };
        double peak = 0.0;
        for (const RfTerm& t : terms) peak = std::max(peak, t.c1 / (t.c2 + varrho * theta_hat));
        // normalised by the peak height, since the quadrature tolerance has an absolute floor
        const double height = direct(peak);
        const double j = height * specfun::integrate_semi_infinite([&](double x) { return direct(x) / height; }, 1e-13, peak);
        out.value = -(1.0 / theta) * p1 * std::log(j);
    }
    const double j_cf = effective_closed_form(terms, n_users, varrho, theta_hat);
    out.closed_form = (j_cf > 0.0 && std::isfinite(j_cf)) ? -(1.0 / theta) * p1 * std::log(j_cf)
                                                          : std::numeric_limits<double>::quiet_NaN();
    out.discrepancy = out.value != 0.0 ? std::fabs(out.closed_form - out.value) / std::fabs(out.value)
                                       : std::fabs(out.closed_form);
    if (!(out.value >= -1e-12) || !std::isfinite(out.value)) {
        throw SanityError("effective_capacity: negative or non-finite result " + std::to_string(out.value));
    }
    out.value = std::max(out.value, 0.0);
    return out;
}

}  // namespace fsorf
