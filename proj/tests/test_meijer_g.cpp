#include <cmath>

#include "doctest.h"
#include "fsorf/channel.hpp"
#include "fsorf/errors.hpp"
#include "fsorf/specfun.hpp"
#include "oracles.hpp"

using namespace fsorf;
using specfun::MeijerGSpec;

TEST_CASE("G^{1,0}_{0,1} is the exponential") {
    const MeijerGSpec g{1, 0, {}, {0.0}};
    CHECK(specfun::meijer_g(g, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (double x : {1e-3, 0.1, 1.0, 5.0, 20.0}) {
        CHECK(std::fabs(specfun::meijer_g(g, x) - std::exp(-x)) <= 1e-9 * std::exp(-x));
    }
}

TEST_CASE("G^{2,0}_{0,2} is 2 K_nu(2 sqrt x)") {
    for (double nu : {0.392, 1.3, 2.75}) {
        const MeijerGSpec g{2, 0, {}, {nu / 2.0, -nu / 2.0}};
        for (double x : {1e-3, 0.01, 0.3, 1.0, 4.0, 20.0}) {
            const double ref = 2.0 * std::cyl_bessel_k(nu, 2.0 * std::sqrt(x));
            CHECK(std::fabs(specfun::meijer_g(g, x) - ref) <= 1e-9 * ref);
        }
    }
}

TEST_CASE("FSO CDF kernel against the Bessel-K oracle") {
    for (Detector det : {Detector::heterodyne, Detector::im_dd}) {
        for (double xi : {1.1, 6.7}) {
            const FsoChannelSpec s = FsoChannelSpec::with_mu(2.902, 2.51, xi, det, 100.0);
            for (double x : {0.1, 1.0, 10.0, 100.0, 1000.0, 1e4}) {
                const double ref = oracle::fso_cdf(2.902, 2.51, xi, s.i(), s.mu(), x);
                CHECK(std::fabs(fso_snr_cdf(s, x) - ref) <= 1e-8);
            }
        }
    }
}

TEST_CASE("master oracle: CDF equals the integral of the pdf") {
    const FsoChannelSpec s = FsoChannelSpec::with_mu(2.902, 2.51, 1.1, Detector::im_dd, std::pow(10.0, 2.0));
    const double x = std::pow(10.0, 0.5);
    const double ref = specfun::integrate([&](double t) { return fso_snr_pdf(s, t); }, 0.0, x, 1e-12);
    CHECK(std::fabs(fso_snr_cdf(s, x) - ref) <= 1e-8);
}

TEST_CASE("large arguments escalate precision and stay accurate") {
    const FsoChannelSpec s = FsoChannelSpec::with_mu(2.902, 2.51, 6.7, Detector::heterodyne, 1.0);
    const specfun::MeijerGSpec g = s.cdf_kernel();
    const double z = s.B() * 7300.0 / s.mu();
    const specfun::MeijerGResult r = specfun::meijer_g_detailed(g, z);
    CHECK(r.working_digits > 16);
    CHECK(s.A() * r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("coalescing poles are perturbed with a consistent dual-epsilon spread") {
    // alpha - beta = 1 makes two b parameters differ by an integer
    const FsoChannelSpec s = FsoChannelSpec::with_mu(3.5, 2.5, 6.7, Detector::heterodyne, 10.0);
    const specfun::MeijerGSpec g = s.cdf_kernel();
    CHECK(specfun::meijer_g_coalescing(g));
    const specfun::MeijerGResult r = specfun::meijer_g_detailed(g, s.B() * 3.0 / s.mu());
    CHECK(r.perturbed);
    CHECK(r.consistent);
    CHECK(r.eps_spread < specfun::kDualEpsRelTol);
    const double ref = oracle::fso_cdf(3.5, 2.5, 6.7, 1, s.mu(), 3.0);
    CHECK(std::fabs(s.A() * r.value - ref) <= 1e-8 * ref);

    const FsoChannelSpec paper = FsoChannelSpec::with_mu(2.902, 2.51, 6.7, Detector::heterodyne, 10.0);
    CHECK_FALSE(specfun::meijer_g_coalescing(paper.cdf_kernel()));
}

TEST_CASE("meijer_g_scaled carries values outside the double range") {
    const MeijerGSpec g{1, 0, {}, {0.0}};
    CHECK(specfun::meijer_g_scaled(g, 800.0, 800.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(specfun::meijer_g_scaled(g, 2.0, std::log(3.0)) == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("meijer_g_leading is the small-argument limit") {
    const MeijerGSpec g{2, 0, {}, {0.3, 1.1}};
    const double x = 1e-6;
    CHECK(specfun::meijer_g_leading(g, x) == doctest::Approx(specfun::meijer_g(g, x)).epsilon(1e-5));
}

TEST_CASE("unsupported and invalid specs are rejected") {
    CHECK_THROWS_AS(specfun::meijer_g(MeijerGSpec{1, 1, {0.5}, {0.0}}, 1.0), UnsupportedError);
    CHECK_THROWS(specfun::meijer_g(MeijerGSpec{3, 0, {}, {0.0, 1.0}}, 1.0));
    CHECK_THROWS_AS(specfun::meijer_g(MeijerGSpec{1, 0, {}, {0.0}}, -1.0), DomainError);
}
