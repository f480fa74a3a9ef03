#include "fsorf/constellation.hpp"

#include <cmath>
#include <sstream>

#include "fsorf/errors.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf {

using specfun::gaussian_q;

HqamParams hqam_params(int m_total) {
    switch (m_total) {
        case 4: return {1.0, 5.0 / 2.0, 3.0 / 2.0};
        case 8: return {32.0 / 69.0, 7.0 / 2.0, 21.0 / 8.0};
        case 16: return {8.0 / 35.0, 33.0 / 8.0, 27.0 / 8.0};
        case 32: return {512.0 / 4503.0, 75.0 / 16.0, 33.0 / 8.0};
        case 64: return {8.0 / 141.0, 163.0 / 32.0, 75.0 / 16.0};
        case 128: return {2.0 / 70.56, 343.0 / 64.0, 81.0 / 16.0};
        case 256: return {2.0 / 141.0, 711.0 / 128.0, 171.0 / 32.0};
        case 512: return {200.0 / 28217.0, 2911.0 / 512.0, 5667.0 / 1024.0};
        case 1024: return {100.0 / 28227.0, 2955.0 / 512.0, 1449.0 / 256.0};
        default: throw DomainError("hqam_params: unsupported HQAM order " + std::to_string(m_total));
    }
}

ConstellationSpec ConstellationSpec::hqam(int m_total) {
    ConstellationSpec c;
    c.family = Family::hqam;
    c.m_total = m_total;
    c.hq = hqam_params(m_total);
    return c;
}

ConstellationSpec ConstellationSpec::rqam(int m_i, int n_q, double beta_r) {
    if (m_i < 2 || n_q < 2) throw DomainError("rqam: M_i and N_q must be >= 2");
    if (!(beta_r > 0.0)) throw DomainError("rqam: beta_R must be positive");
    ConstellationSpec c;
    c.family = Family::rqam;
    c.m_total = m_i * n_q;
    c.m_i = m_i;
    c.n_q = n_q;
    c.beta_r = beta_r;
    c.p0 = 1.0 - 1.0 / m_i;
    c.q0 = 1.0 - 1.0 / n_q;
    c.a0 = std::sqrt(6.0 / ((m_i * double(m_i) - 1.0) + (n_q * double(n_q) - 1.0) * beta_r * beta_r));
    c.b0 = beta_r * c.a0;
    return c;
}

ConstellationSpec ConstellationSpec::sqam(int m_total) {
    const int side = static_cast<int>(std::lround(std::sqrt(double(m_total))));
    if (side * side != m_total || side < 2) throw DomainError("sqam: M must be a perfect square >= 4");
    ConstellationSpec c = rqam(side, side, 1.0);
    c.family = Family::sqam;
    return c;
}

ConstellationSpec ConstellationSpec::xqam(int m_total) {
    const int n_q = static_cast<int>(std::lround(std::sqrt(m_total / 2.0)));
    const int m_i = 2 * n_q;
    if (m_i * n_q != m_total) throw DomainError("xqam: M must equal 2 N_q^2");
    ConstellationSpec c;
    c.family = Family::xqam;
    c.m_total = m_total;
    c.m_i = m_i;
    c.n_q = n_q;
    const double mn = double(m_i) * n_q;
    c.nn = 4.0 - 2.0 * (m_i + n_q) / mn;
    c.a1 = (2.0 / 3.0) * (31.0 * mn / 32.0 - 1.0);
    c.a2 = (m_i - n_q) / 2.0;
    c.a3 = 4.0 - 4.0 * (m_i + n_q) / mn + 8.0 / mn;
    c.a4 = (m_i - n_q) / mn;
    if (c.a2 < 2.0 || std::fmod(c.a2, 2.0) != 0.0) {
        throw DomainError("xqam: a2 = (M_i - N_q)/2 must be a positive even integer (M = 32, 128, 512, ...)");
    }
    return c;
}

std::string ConstellationSpec::label() const {
    std::ostringstream os;
    switch (family) {
        case Family::hqam: os << "hqam:" << m_total; break;
        case Family::sqam: os << "sqam:" << m_total; break;
        case Family::xqam: os << "xqam:" << m_total; break;
        case Family::rqam: os << "rqam:" << m_total << ':' << m_i << 'x' << n_q << ':' << beta_r; break;
    }
    return os.str();
}

ConstellationSpec parse_constellation(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2) throw DomainError("constellation '" + text + "': expected family:M[:MixNq[:betaR]]");
    int m_total = 0;
    try {
        m_total = std::stoi(parts[1]);
    } catch (const std::exception&) {
        throw DomainError("constellation '" + text + "': M is not an integer");
    }
    const std::string& fam = parts[0];
    if (fam == "hqam") return ConstellationSpec::hqam(m_total);
    if (fam == "sqam") return ConstellationSpec::sqam(m_total);
    if (fam == "xqam") {
        ConstellationSpec c = ConstellationSpec::xqam(m_total);
        if (parts.size() >= 3) {
            const auto x = parts[2].find('x');
            if (x == std::string::npos || std::stoi(parts[2].substr(0, x)) != c.m_i ||
                std::stoi(parts[2].substr(x + 1)) != c.n_q) {
                throw DomainError("constellation '" + text + "': XQAM requires M_i = 2 N_q");
            }
        }
        return c;
    }
    if (fam == "rqam") {
        if (parts.size() < 3) throw DomainError("constellation '" + text + "': rqam needs MixNq");
        const auto x = parts[2].find('x');
        if (x == std::string::npos) throw DomainError("constellation '" + text + "': malformed MixNq");
        const int mi = std::stoi(parts[2].substr(0, x));
        const int nq = std::stoi(parts[2].substr(x + 1));
        if (mi * nq != m_total) throw DomainError("constellation '" + text + "': M_i*N_q != M");
        const double beta = parts.size() >= 4 ? std::stod(parts[3]) : 1.0;
        return ConstellationSpec::rqam(mi, nq, beta);
    }
    throw DomainError("constellation '" + text + "': unknown family '" + fam + "'");
}

double conditional_sep(const ConstellationSpec& c, double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("conditional_sep: gamma must be nonnegative");
    double p = 0.0;
    switch (c.family) {
        case Family::hqam: {
            const double th = c.hq.theta;
            const double q1 = gaussian_q(std::sqrt(th * gamma));
            const double q2 = gaussian_q(std::sqrt(2.0 * th * gamma / 3.0));
            const double q3 = gaussian_q(std::sqrt(th * gamma / 3.0));
            p = c.hq.k * q1 + (2.0 / 3.0) * c.hq.kc * q2 * q2 - 2.0 * c.hq.kc * q1 * q3;
            break;
        }
        case Family::rqam:
        case Family::sqam: {
            const double qa = gaussian_q(c.a0 * std::sqrt(gamma));
            const double qb = gaussian_q(c.b0 * std::sqrt(gamma));
            p = 2.0 * (c.p0 * qa * (1.0 - 2.0 * c.q0 * qb) + c.q0 * qb);
            break;
        }
        case Family::xqam: {
            const double u = std::sqrt(2.0 * gamma / c.a1);
            const double s = 8.0 / (double(c.m_i) * c.n_q);
            const double qu = gaussian_q(u);
            const double qa2 = gaussian_q(c.a2 * u);
            double inner = qa2 - qu * qa2;
            const int lmax = static_cast<int>(c.a2 / 2.0) - 1;
            for (int l1 = 1; l1 <= lmax; ++l1) {
                const double q2l = gaussian_q(2.0 * l1 * u);
                inner += q2l - 2.0 * qu * q2l;
            }
            p = c.nn * qu + s * inner - c.a3 * qu * qu;
            break;
        }
    }
    return p;
}

SepDerivativeTerms sep_derivative_terms(const ConstellationSpec& c) {
    SepDerivativeTerms t;
    switch (c.family) {
        case Family::hqam: {
            const double th = c.hq.theta, k = c.hq.k, kc = c.hq.kc;
            t.algebraic.push_back({0.5 * std::sqrt(th / (2.0 * M_PI)) * (kc - k), th / 2.0});
            t.algebraic.push_back({-(kc / 3.0) * std::sqrt(th / (3.0 * M_PI)), th / 3.0});
            t.algebraic.push_back({(kc / 2.0) * std::sqrt(th / (6.0 * M_PI)), th / 6.0});
            const double h = -kc * th / (2.0 * std::sqrt(3.0) * M_PI);
            t.hyper.push_back({2.0 * kc * th / (9.0 * M_PI), 2.0 * th / 3.0, th / 3.0});
            t.hyper.push_back({h, 2.0 * th / 3.0, th / 2.0});
            t.hyper.push_back({h, 2.0 * th / 3.0, th / 6.0});
            break;
        }
        case Family::rqam:
        case Family::sqam: {
            const double a0 = c.a0, b0 = c.b0, p0 = c.p0, q0 = c.q0;
            const double s2p = std::sqrt(2.0 * M_PI);
            t.algebraic.push_back({a0 * p0 * (q0 - 1.0) / s2p, a0 * a0 / 2.0});
            t.algebraic.push_back({b0 * (p0 - 1.0) * q0 / s2p, b0 * b0 / 2.0});
            const double h = -a0 * b0 * p0 * q0 / M_PI;
            const double rate = (a0 * a0 + b0 * b0) / 2.0;
            t.hyper.push_back({h, rate, a0 * a0 / 2.0});
            t.hyper.push_back({h, rate, b0 * b0 / 2.0});
            break;
        }
        case Family::xqam: {
            // Exact derivative of the conditional SEP. Two printed
            // coefficients differ: the gamma^{-1/2} e^{-gamma/a1} weight uses
            // (4 a2 - 4)/(M_i N_q) rather than 12/(M_i N_q), and the 1F1
            // argument paired with exp(-(1+a2^2) gamma/a1) is a2^2 gamma/a1.
            const double a1 = c.a1, a2 = c.a2, a3 = c.a3, a4 = c.a4, nn = c.nn;
            const double mn = double(c.m_i) * c.n_q;
            const double root = std::sqrt(M_PI * a1);
            t.algebraic.push_back({(-nn + (4.0 * a2 - 4.0) / mn + a3) / (2.0 * root), 1.0 / a1});
            t.algebraic.push_back({-a4 / root, a2 * a2 / a1});
            const int lmax = static_cast<int>(a2 / 2.0) - 1;
            for (int l1 = 1; l1 <= lmax; ++l1) {
                const double h = -(16.0 / mn) * l1 / (M_PI * a1);
                const double a5 = (4.0 * l1 * l1 + 1.0) / a1;
                t.hyper.push_back({h, a5, 1.0 / a1});
                t.hyper.push_back({h, a5, 4.0 * l1 * l1 / a1});
            }
            const double h = -2.0 * a4 / (M_PI * a1);
            t.hyper.push_back({h, (1.0 + a2 * a2) / a1, 1.0 / a1});
            t.hyper.push_back({h, (1.0 + a2 * a2) / a1, a2 * a2 / a1});
            t.hyper.push_back({-a3 / (M_PI * a1), 2.0 / a1, 1.0 / a1});
            break;
        }
    }
    return t;
}

double sep_derivative(const ConstellationSpec& c, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("sep_derivative: gamma must be positive");
    const SepDerivativeTerms t = sep_derivative_terms(c);
    double s = 0.0;
    for (const auto& a : t.algebraic) s += a.coeff * std::exp(-a.rate * gamma) / std::sqrt(gamma);
    for (const auto& h : t.hyper) s += h.coeff * std::exp(-h.rate * gamma) * specfun::kummer_1f1(1.0, 1.5, h.lambda * gamma);
    return s;
}

}  // namespace fsorf
