#pragma once

#include <functional>
#include <vector>

namespace fsorf::specfun {

inline constexpr double kSeriesRelTol = 1e-10;
inline constexpr double kHypergeomRelTol = 1e-12;
inline constexpr double kOracleTol = 1e-8;
inline constexpr double kCoalesceTol = 1e-9;
inline constexpr double kCoalesceEps = 1e-6;
inline constexpr double kDualEpsRelTol = 1e-5;
inline constexpr long kMeijerMaxTerms = 100000;
inline constexpr long kHypergeomMaxTerms = 1000000;

// P(a,x) = Υ(a,x)/Γ(a)
double reg_gamma_lower(double a, double x);
// Q(a,x) = Γ(a,x)/Γ(a)
double reg_gamma_upper(double a, double x);

double pochhammer(double a, unsigned n);

// 2F1(a,b;c;z) for 0 <= z < 1.
double gauss_2f1(double a, double b, double c, double z);
// Same function through (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)); needs z <= 1/2.
double gauss_2f1_pfaff(double a, double b, double c, double z);

// log 2F1(a,b;c;z) for a, b, c > 0 and 0 <= z < 1, summed with a running
// scale so that very large b does not overflow.
double log_gauss_2f1(double a, double b, double c, double z);

double kummer_1f1(double a, double b, double z);

double gaussian_q(double x);

struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;
};

struct MeijerGResult {
    double value = 0.0;
    bool perturbed = false;
    // dual-epsilon agreement, only meaningful when perturbed
    bool consistent = true;
    double eps_spread = 0.0;
    // decimal digits carried by the evaluation that was accepted
    int working_digits = 16;
};

double meijer_g(const MeijerGSpec& spec, double x);
// exp(log_scale) * G, with the scale applied in working precision so that a
// G beyond the double range can still be returned once rescaled.
double meijer_g_scaled(const MeijerGSpec& spec, double x, double log_scale);
MeijerGResult meijer_g_detailed(const MeijerGSpec& spec, double x, double log_scale = 0.0);

// Sum of the k = 0 residue terms only: the small-argument expansion
// sum_h coef_h x^{b_h}.
double meijer_g_leading(const MeijerGSpec& spec, double x);

// True when two of the first m b-parameters differ by an integer (within
// kCoalesceTol), i.e. when evaluation goes through the perturbed path.
bool meijer_g_coalescing(const MeijerGSpec& spec);

using Integrand = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

inline constexpr int kQuadMaxSubdivisions = 5000;

// Adaptive Gauss-Kronrod on [a,b]; stops when error <= max(tol, tol*|I|).
QuadResult integrate_detailed(const Integrand& f, double a, double b, double tol,
                              int max_subdivisions = kQuadMaxSubdivisions);
double integrate(const Integrand& f, double a, double b, double tol);

// [lower, lower+knee] directly, then [lower+knee, inf) via x = lower+knee + knee*t/(1-t).
double integrate_semi_infinite(const Integrand& f, double tol, double knee = 1.0,
                               double lower = 0.0);

}  // namespace fsorf::specfun
