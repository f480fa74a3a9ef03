#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fsorf/errors.hpp"
#include "fsorf/metrics.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf {

namespace {

specfun::MeijerGSpec aser_kernel_spec(const FsoChannelSpec& fso, double psi1) {
    specfun::MeijerGSpec g;
    g.m = 3 * fso.i();
    g.n = 2;
    g.a = {psi1 + 1.0, 1.0};
    for (double v : fso.tau1()) g.a.push_back(v);
    g.b = fso.tau2();
    g.b.push_back(0.0);
    return g;
}

}  // namespace

double aser_kernel_f(const FsoChannelSpec& fso, double psi1, double psi2) {
    if (!(psi2 > 0.0)) throw DomainError("aser_kernel_f: psi2 must be positive");
    return std::pow(psi2, psi1) * specfun::meijer_g(aser_kernel_spec(fso, psi1), fso.B() / (psi2 * fso.mu()));
}

namespace {

double log_kernel_g(double c1, double c2, double psi1, double psi2) {
    return c1 * std::log(c2) + boost::math::lgamma(c1 + psi1) - std::log(c1) - (c1 + psi1) * std::log(c2 + psi2) +
           specfun::log_gauss_2f1(1.0, c1 + psi1, c1 + 1.0, c2 / (c2 + psi2));
}

// Evaluates int_0^inf gamma^nu e^{-psi gamma} P_o(gamma) d gamma scaled by
// exp(log_scale); the scale lets the z1 series carry lambda^z1/(3/2)_z1
// without overflowing Gamma(nu+1).
class OutageMoments {
public:
    OutageMoments(const SystemSpec& spec, AserModel model)
        : spec_(spec), model_(model), terms_(rf_terms(spec.rf)), a_(spec.fso.A()) {
        if (model_ == AserModel::selective_df) fr_delta_ = fso_snr_cdf(spec.fso, spec.delta_th);
    }

    double eval(double nu, double psi, double log_scale) {
        const double n = spec_.rf.n_users;
        if (model_ == AserModel::selective_df) {
            double v = fr_delta_ * std::exp(log_scale + boost::math::lgamma(nu + 1.0) - (nu + 1.0) * std::log(psi));
            double rf = 0.0;
            for (const RfTerm& t : terms_) {
                rf += signed_exp(t.c0, log_scale - t.c1 * std::log(t.c2) + log_kernel_g(t.c1, t.c2, nu + 1.0, psi));
            }
            return v + (1.0 - fr_delta_) * n * rf;
        }
        double v = a_ * f_scaled(-nu - 1.0, psi, log_scale);
        for (const RfTerm& t : terms_) {
            const double log_w = -t.c1 * std::log(t.c2);
            v += n * signed_exp(t.c0, log_scale + log_w + log_kernel_g(t.c1, t.c2, nu + 1.0, psi));
            // F_R F_RU cross term; the inner sum enters with a minus sign
            // (the printed closed forms show a plus here).
            const double log_cross = log_scale + log_w + boost::math::lgamma(t.c1);
            double cross = f_scaled(-nu - 1.0, psi, log_cross);
            const int c1 = static_cast<int>(std::lround(t.c1));
            for (int z = 0; z < c1; ++z) {
                const double log_zf = z * std::log(t.c2) - boost::math::lgamma(z + 1.0);
                cross -= f_scaled(-nu - z - 1.0, t.c2 + psi, log_cross + log_zf);
            }
            v -= n * t.c0 * a_ * cross;
        }
        return v;
    }

private:
    static double signed_exp(double c, double log_mag) {
        if (c == 0.0) return 0.0;
        const double v = std::exp(std::log(std::fabs(c)) + log_mag);
        return c > 0.0 ? v : -v;
    }

    // exp(log_scale) * F(psi1, psi2). The cache holds F psi2^{nu+1} / Gamma(nu+1)
    // with nu = -psi1 - 1, which stays O(1) for any series index.
    double f_scaled(double psi1, double psi2, double log_scale) {
        const double nu1 = -psi1;
        const auto key = std::make_pair(psi1, psi2);
        auto it = f_cache_.find(key);
        if (it == f_cache_.end()) {
            const double h = specfun::meijer_g_scaled(aser_kernel_spec(spec_.fso, psi1),
                                                      spec_.fso.B() / (psi2 * spec_.fso.mu()), -boost::math::lgamma(nu1));
            it = f_cache_.emplace(key, h).first;
        }
        return signed_exp(it->second, log_scale + boost::math::lgamma(nu1) - nu1 * std::log(psi2));
    }

    const SystemSpec& spec_;
    AserModel model_;
    std::vector<RfTerm> terms_;
    double a_;
    double fr_delta_ = 0.0;
    std::map<std::pair<double, double>, double> f_cache_;
};

}  // namespace

double aser_kernel_g(double c1, double c2, double psi1, double psi2) {
    if (!(c1 > 0.0 && c2 > 0.0 && psi2 > 0.0 && c1 + psi1 > 0.0)) throw DomainError("aser_kernel_g: bad arguments");
    return std::exp(log_kernel_g(c1, c2, psi1, psi2));
}

double aser(const ConstellationSpec& c, const SystemSpec& spec, const AserOptions& opts) {
    spec.validate();
    if (opts.policy.z1_terms < 1) throw DomainError("aser: z1_terms must be >= 1");
    if (spec.fso.detector != Detector::heterodyne && !opts.allow_im_dd) {
        throw UnsupportedError("aser: only heterodyne detection is supported (IM/DD needs the expert flag)");
    }
    const SepDerivativeTerms d = sep_derivative_terms(c);
    OutageMoments mom(spec, opts.model);

    double total = 0.0;
    for (const auto& a : d.algebraic) total -= a.coeff * mom.eval(-0.5, a.rate, 0.0);

    // Truncation is judged per hyper term, as the last z1 step relative to
    // that term's own partial sum; the total cancels between terms at high SNR.
    std::vector<double> series(d.hyper.size(), 0.0), last(d.hyper.size(), 0.0);
    const double lg15 = boost::math::lgamma(1.5);
    for (int z1 = 0; z1 < opts.policy.z1_terms; ++z1) {
        for (std::size_t k = 0; k < d.hyper.size(); ++k) {
            const auto& h = d.hyper[k];
            // lambda^z1 / (3/2)_z1
            const double log_c = z1 * std::log(h.lambda) - (boost::math::lgamma(1.5 + z1) - lg15);
            const double step = -h.coeff * mom.eval(z1, h.rate, log_c);
            series[k] += step;
            last[k] = step;
        }
    }
    for (double v : series) total += v;
    if (!std::isfinite(total)) throw ConvergenceError("aser: non-finite series value");
    if (opts.check_truncation) {
        double worst = 0.0;
        for (std::size_t k = 0; k < series.size(); ++k) {
            if (series[k] != 0.0) worst = std::max(worst, std::fabs(last[k] / series[k]));
        }
        if (worst > kAserTruncationTol) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "aser: z1 series truncated at %d terms is insufficient for %s (last/sum = %.3g)",
                          opts.policy.z1_terms, c.label().c_str(), worst);
            throw ConvergenceError(buf);
        }
    }
    if (!(total >= -1e-9 && total <= 1.0 + 1e-9)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "aser: value %.6g outside [0,1] for %s", total, c.label().c_str());
        throw SanityError(buf);
    }
    return std::clamp(total, 0.0, 1.0);
}

}  // namespace fsorf
