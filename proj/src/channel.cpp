#include "fsorf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fsorf/errors.hpp"

namespace fsorf {

const char* to_string(Detector d) {
    return d == Detector::heterodyne ? "heterodyne" : "im_dd";
}

Detector parse_detector(const char* s) {
    if (std::strcmp(s, "heterodyne") == 0 || std::strcmp(s, "1") == 0) return Detector::heterodyne;
    if (std::strcmp(s, "im_dd") == 0 || std::strcmp(s, "imdd") == 0 || std::strcmp(s, "2") == 0) return Detector::im_dd;
    throw DomainError(std::string("unknown detector '") + s + "' (expected heterodyne or im_dd)");
}

FsoChannelSpec FsoChannelSpec::with_mu(double alpha, double beta, double xi, Detector det, double mu) {
    FsoChannelSpec s{alpha, beta, xi, det, 1.0};
    s.gamma_bar_r = mu / s.mu_factor();
    return s;
}

double FsoChannelSpec::mu_factor() const {
    if (detector == Detector::heterodyne) return 1.0;
    const double x2 = xi * xi;
    return x2 * alpha * beta * (x2 + 2.0) / ((alpha + 1.0) * (beta + 1.0) * (x2 + 1.0) * (x2 + 1.0));
}

double FsoChannelSpec::A() const {
    const double ii = i();
    return std::pow(ii, alpha + beta - 2.0) * xi * xi /
           (std::pow(2.0 * M_PI, ii - 1.0) * std::tgamma(alpha) * std::tgamma(beta));
}

double FsoChannelSpec::B() const {
    const double ii = i();
    return std::pow(alpha * beta, ii) / std::pow(ii, 2.0 * ii);
}

std::vector<double> FsoChannelSpec::tau1() const {
    std::vector<double> t;
    const int ii = i();
    for (int r = 1; r <= ii; ++r) t.push_back((xi * xi + r) / ii);
    return t;
}

std::vector<double> FsoChannelSpec::tau2() const {
    std::vector<double> t;
    const int ii = i();
    for (double base : {xi * xi, alpha, beta})
        for (int r = 0; r < ii; ++r) t.push_back((base + r) / ii);
    return t;
}

specfun::MeijerGSpec FsoChannelSpec::cdf_kernel() const {
    specfun::MeijerGSpec g;
    g.m = 3 * i();
    g.n = 1;
    g.a = {1.0};
    for (double v : tau1()) g.a.push_back(v);
    g.b = tau2();
    g.b.push_back(0.0);
    return g;
}

void FsoChannelSpec::validate() const {
    if (!(alpha > 0.0 && std::isfinite(alpha))) throw DomainError("FsoChannelSpec: alpha must be positive");
    if (!(beta > 0.0 && std::isfinite(beta))) throw DomainError("FsoChannelSpec: beta must be positive");
    if (!(xi > 0.0 && std::isfinite(xi))) throw DomainError("FsoChannelSpec: xi must be positive");
    if (!(gamma_bar_r > 0.0 && std::isfinite(gamma_bar_r))) {
        throw DomainError("FsoChannelSpec: average SNR must be positive and finite");
    }
}

namespace {

double checked_probability(double v, const char* what) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
        throw SanityError(std::string(what) + ": value " + std::to_string(v) + " outside [0,1]");
    }
    return std::clamp(v, 0.0, 1.0);
}

// Upper bound on P(gamma_R > x): P(X Y P > t) <= P(X > sqrt t) + P(Y > sqrt t).
double far_tail(const FsoChannelSpec& spec, double x) {
    const double rt = std::sqrt(std::pow(x / spec.mu(), 1.0 / spec.i()));
    return boost::math::gamma_q(spec.alpha, spec.alpha * rt) + boost::math::gamma_q(spec.beta, spec.beta * rt);
}

}  // namespace

double fso_snr_pdf(const FsoChannelSpec& spec, double x) {
    spec.validate();
    if (!(x > 0.0)) throw DomainError("fso_snr_pdf: x must be positive");
    if (std::isinf(x)) return 0.0;
    if (far_tail(spec, x) < 1e-300) return 0.0;
    const double ii = spec.i();
    const double x2 = spec.xi * spec.xi;
    const specfun::MeijerGSpec g{3, 0, {x2 + 1.0}, {x2, spec.alpha, spec.beta}};
    const double arg = spec.alpha * spec.beta * std::pow(x / spec.mu(), 1.0 / ii);
    const double v = x2 / (ii * std::tgamma(spec.alpha) * std::tgamma(spec.beta) * x) * specfun::meijer_g(g, arg);
    return std::max(v, 0.0);
}

double fso_snr_cdf(const FsoChannelSpec& spec, double x) {
    spec.validate();
    if (!(x >= 0.0)) throw DomainError("fso_snr_cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    // far in the tail the residue series is not needed (and converges too slowly to use)
    if (far_tail(spec, x) < 1e-17) return 1.0;
    const double v = spec.A() * specfun::meijer_g(spec.cdf_kernel(), spec.B() * x / spec.mu());
    return checked_probability(v, "fso_snr_cdf");
}

double fso_snr_mean(const FsoChannelSpec& spec) {
    spec.validate();
    const double ii = spec.i();
    const double x2 = spec.xi * spec.xi;
    const double ga = std::exp(boost::math::lgamma(spec.alpha + ii) - boost::math::lgamma(spec.alpha)) / std::pow(spec.alpha, ii);
    const double gb = std::exp(boost::math::lgamma(spec.beta + ii) - boost::math::lgamma(spec.beta)) / std::pow(spec.beta, ii);
    return spec.mu() * ga * gb * x2 / (x2 + ii);
}

double sample_fso_snr(const FsoChannelSpec& spec, RngStream& rng) {
    // With A0 = 1 the pdf of gamma_R is exactly that of mu_i * I^i, so the
    // calibrated scale equals mu_i (the tests confirm the mean by quadrature).
    const double x = rng.gamma(spec.alpha) / spec.alpha;
    const double y = rng.gamma(spec.beta) / spec.beta;
    const double p = std::pow(rng.uniform(), 1.0 / (spec.xi * spec.xi));
    const double irr = x * y * p;
    return spec.mu() * (spec.detector == Detector::heterodyne ? irr : irr * irr);
}

int RfNetworkSpec::big_l() const {
    validate();
    return static_cast<int>(std::lround(m)) * n_t;
}

void RfNetworkSpec::validate() const {
    if (!(m > 0.0) || std::fabs(m - std::round(m)) > 1e-12) {
        throw DomainError("RfNetworkSpec: Nakagami m must be a positive integer, got " + std::to_string(m));
    }
    if (n_t < 1) throw DomainError("RfNetworkSpec: n_t must be >= 1");
    if (n_users < 1) throw DomainError("RfNetworkSpec: n_users must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("RfNetworkSpec: rho must lie in [0,1]");
    if (!(gamma_bar_u > 0.0 && std::isfinite(gamma_bar_u))) {
        throw DomainError("RfNetworkSpec: average SNR must be positive and finite");
    }
}

std::vector<double> phi_coeffs(int k, int big_l) {
    if (k < 0) throw DomainError("phi_coeffs: k must be nonnegative");
    if (big_l < 1) throw DomainError("phi_coeffs: big_l must be positive");
    const int len = k * (big_l - 1) + 1;
    std::vector<double> delta(big_l);
    delta[0] = 1.0;
    for (int q = 1; q < big_l; ++q) delta[q] = delta[q - 1] / q;
    std::vector<double> c(len, 0.0);
    c[0] = 1.0;
    for (int l = 1; l < len; ++l) {
        double s = 0.0;
        for (int q = 1; q <= std::min(l, big_l - 1); ++q) s += (q * (k + 1.0) - l) * delta[q] * c[l - q];
        c[l] = s / l;
    }
    return c;
}

std::vector<RfTerm> rf_terms(const RfNetworkSpec& spec) {
    spec.validate();
    const int L = spec.big_l();
    const int N = spec.n_users;
    const double m = std::round(spec.m);
    const double rho = spec.rho;
    const double lg_L = boost::math::lgamma(static_cast<double>(L));
    std::vector<RfTerm> out;
    for (int k = 0; k < N; ++k) {
        const std::vector<double> phi = phi_coeffs(k, L);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double bk = boost::math::binomial_coefficient<double>(N - 1, k);
        const double denom_base = 1.0 + k * (1.0 - rho);
        const double c2 = m * (k + 1.0) / (spec.gamma_bar_u * denom_base);
        for (int l = 0; l < static_cast<int>(phi.size()); ++l) {
            for (int j = 0; j <= l; ++j) {
                // pow(0, 0) = 1 keeps the rho = 0 and rho = 1 limits exact.
                const double corr = std::pow(rho, j) * std::pow(1.0 - rho, l - j);
                if (corr == 0.0 || phi[l] == 0.0) continue;
                const double blj = boost::math::binomial_coefficient<double>(l, j);
                const double log_mag = (L + j) * std::log(m / spec.gamma_bar_u) + boost::math::lgamma(L + l + 0.0) -
                                       boost::math::lgamma(L + j + 0.0) - lg_L - (L + l + j) * std::log(denom_base);
                const double c0 = sgn * bk * blj * phi[l] * corr * std::exp(log_mag);
                out.push_back({k, l, j, c0, static_cast<double>(L + j), c2});
            }
        }
    }
    return out;
}

double best_user_outdated_pdf(const RfNetworkSpec& spec, double x) {
    if (!(x > 0.0)) throw DomainError("best_user_outdated_pdf: x must be positive");
    if (std::isinf(x)) return 0.0;
    double s = 0.0;
    for (const RfTerm& t : rf_terms(spec)) s += t.c0 * std::exp((t.c1 - 1.0) * std::log(x) - t.c2 * x);
    return std::max(spec.n_users * s, 0.0);
}

double best_user_outdated_cdf(const RfNetworkSpec& spec, double x) {
    if (!(x >= 0.0)) throw DomainError("best_user_outdated_cdf: x must be nonnegative");
    spec.validate();
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    double s = 0.0;
    for (const RfTerm& t : rf_terms(spec)) {
        // c0 c2^{-c1} Upsilon(c1, c2 x) with Upsilon = Gamma(c1) P(c1, .)
        const double scale = t.c0 * std::exp(boost::math::lgamma(t.c1) - t.c1 * std::log(t.c2));
        s += scale * specfun::reg_gamma_lower(t.c1, t.c2 * x);
    }
    return checked_probability(spec.n_users * s, "best_user_outdated_cdf");
}

double best_user_perfect_cdf(const RfNetworkSpec& spec, double x) {
    spec.validate();
    if (!(x >= 0.0)) throw DomainError("best_user_perfect_cdf: x must be nonnegative");
    const double p = specfun::reg_gamma_lower(spec.big_l(), std::round(spec.m) * x / spec.gamma_bar_u);
    return std::pow(p, spec.n_users);
}

double sample_best_user_outdated(const RfNetworkSpec& spec, RngStream& rng) {
    const double L = spec.big_l();
    const double m = std::round(spec.m);
    const double scale = spec.gamma_bar_u / m;
    double y = 0.0;
    for (int u = 0; u < spec.n_users; ++u) y = std::max(y, rng.gamma(L) * scale);
    if (spec.rho == 1.0) return y;
    const double lambda = spec.rho * m * y / (spec.gamma_bar_u * (1.0 - spec.rho));
    const double p = static_cast<double>(rng.poisson(lambda));
    return rng.gamma(L + p) * spec.gamma_bar_u * (1.0 - spec.rho) / m;
}

}  // namespace fsorf
