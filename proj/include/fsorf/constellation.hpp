#pragma once

#include <string>
#include <vector>

namespace fsorf {

enum class Family { hqam, rqam, xqam, sqam };

struct HqamParams {
    double theta, k, kc;
};

HqamParams hqam_params(int m_total);

struct ConstellationSpec {
    Family family = Family::hqam;
    int m_total = 16;
    int m_i = 0;
    int n_q = 0;
    double beta_r = 1.0;

    // hqam
    HqamParams hq{};
    // rqam / sqam
    double p0 = 0, q0 = 0, a0 = 0, b0 = 0;
    // xqam
    double nn = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;

    static ConstellationSpec hqam(int m_total);
    static ConstellationSpec rqam(int m_i, int n_q, double beta_r = 1.0);
    static ConstellationSpec sqam(int m_total);
    static ConstellationSpec xqam(int m_total);

    std::string label() const;
};

// "family:M[:MixNq[:betaR]]", e.g. hqam:16, rqam:8:4x2:1, xqam:32
ConstellationSpec parse_constellation(const std::string& text);

double conditional_sep(const ConstellationSpec& c, double gamma);

// dP_s/dgamma as a sum of
//   coeff * gamma^{-1/2} * exp(-rate*gamma)                (algebraic)
//   coeff * exp(-rate*gamma) * 1F1(1; 3/2; lambda*gamma)     (hyper)
struct SepDerivativeTerms {
    struct Algebraic {
        double coeff, rate;
    };
    struct Hyper {
        double coeff, rate, lambda;
    };
    std::vector<Algebraic> algebraic;
    std::vector<Hyper> hyper;
};

SepDerivativeTerms sep_derivative_terms(const ConstellationSpec& c);
double sep_derivative(const ConstellationSpec& c, double gamma);

}  // namespace fsorf
