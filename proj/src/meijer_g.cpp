#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "fsorf/errors.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf::specfun {

namespace {

namespace bmp = boost::multiprecision;
template <unsigned D>
using mpfloat = bmp::number<bmp::mpfr_float_backend<D>, bmp::et_off>;

bool near_integer(double d, double* rounded = nullptr) {
    const double r = std::round(d);
    if (rounded) *rounded = r;
    return std::fabs(d - r) < kCoalesceTol;
}

// An a-parameter either stands alone or is pinned to a pole parameter b_g
// plus an integer offset, so that b_h - a_j is computed identically in every
// precision and Gamma-ratio cancellations are exact.
struct AParam {
    double value;
    int anchor = -1;
    double offset = 0.0;
};

struct Plan {
    int m, n, p, q;
    std::vector<AParam> a;
    std::vector<double> b;
    double arg_sign;
};

void validate(const MeijerGSpec& s) {
    const int p = static_cast<int>(s.a.size());
    const int q = static_cast<int>(s.b.size());
    if (s.m < 0 || s.n < 0 || s.m > q || s.n > p) {
        throw DomainError("meijer_g: require 0 <= m <= q and 0 <= n <= p");
    }
    for (double v : s.a)
        if (!std::isfinite(v)) throw DomainError("meijer_g: non-finite a parameter");
    for (double v : s.b)
        if (!std::isfinite(v)) throw DomainError("meijer_g: non-finite b parameter");
    if (q <= p) throw UnsupportedError("meijer_g: only the q > p class is supported");
    if (s.m == 0) throw UnsupportedError("meijer_g: m = 0 has no pole residues");
}

bool coalescing(const std::vector<double>& b, int m) {
    for (int j = 1; j < m; ++j)
        for (int h = 0; h < j; ++h)
            if (near_integer(b[j] - b[h])) return true;
    return false;
}

std::vector<double> perturb(std::vector<double> b, int m, double eps) {
    for (int j = 1; j < m; ++j) {
        for (int guard = 0; guard < 64; ++guard) {
            bool hit = false;
            for (int h = 0; h < j; ++h) hit = hit || near_integer(b[j] - b[h]);
            if (!hit) break;
            b[j] += eps;
        }
    }
    return b;
}

Plan make_plan(const MeijerGSpec& s, std::vector<double> b) {
    Plan pl;
    pl.m = s.m;
    pl.n = s.n;
    pl.p = static_cast<int>(s.a.size());
    pl.q = static_cast<int>(b.size());
    pl.b = std::move(b);
    for (double av : s.a) {
        AParam ap{av};
        for (int g = 0; g < pl.m; ++g) {
            double off;
            if (near_integer(av - pl.b[g], &off)) {
                ap.anchor = g;
                ap.offset = off;
                break;
            }
        }
        pl.a.push_back(ap);
    }
    pl.arg_sign = ((pl.p - pl.m - pl.n) % 2 == 0) ? 1.0 : -1.0;
    return pl;
}

template <class Real>
Real b_minus_a(const Plan& pl, int h, int j) {
    const AParam& ap = pl.a[j];
    if (ap.anchor == h) return Real(-ap.offset);
    if (ap.anchor >= 0) return (Real(pl.b[h]) - Real(pl.b[ap.anchor])) - Real(ap.offset);
    return Real(pl.b[h]) - Real(ap.value);
}

template <class Real>
bool is_nonpositive_integer(const Real& x) {
    using std::floor;
    return x <= 0 && x == floor(x);
}

// Collected Gamma arguments of one residue coefficient.
template <class Real>
struct Residue {
    Real bh;
    std::vector<Real> gnum, gden, num, den;
    bool vanishes = false;
};

template <class Real>
Residue<Real> residue(const Plan& pl, int h) {
    Residue<Real> r;
    r.bh = Real(pl.b[h]);
    for (int j = 0; j < pl.q; ++j) {
        if (j == h) continue;
        const Real d = Real(pl.b[j]) - r.bh;
        if (j < pl.m) r.gnum.push_back(d);
        else r.gden.push_back(Real(1) - d);
        r.den.push_back(Real(1) - d);
    }
    for (int j = 0; j < pl.p; ++j) {
        const Real ba = b_minus_a<Real>(pl, h, j);
        if (j < pl.n) r.gnum.push_back(Real(1) + ba);
        else r.gden.push_back(-ba);
        r.num.push_back(Real(1) + ba);
    }
    for (const Real& g : r.gnum) {
        if (is_nonpositive_integer(g)) {
            throw DomainError("meijer_g: Gamma pole in residue coefficient (coincident a/b poles)");
        }
    }
    for (const Real& g : r.gden)
        if (is_nonpositive_integer(g)) r.vanishes = true;
    if (!r.vanishes)
        for (const Real& d : r.den)
            if (is_nonpositive_integer(d)) throw UnsupportedError("meijer_g: degenerate residue series");
    return r;
}

template <class Real>
struct SlaterSum {
    Real sum = 0;
    Real max_abs = 0;
    bool finite = true;
};

// log|coef| and sign for the double path; direct Gamma for multiprecision.
inline void coefficient(const Residue<double>& r, double x, double& t0, bool& finite) {
    double lg = 0.0;
    int sign = 1;
    for (double g : r.gnum) {
        int s = 1;
        lg += boost::math::lgamma(g, &s);
        sign *= s;
    }
    for (double g : r.gden) {
        int s = 1;
        lg -= boost::math::lgamma(g, &s);
        sign *= s;
    }
    lg += r.bh * std::log(x);
    if (lg > 700.0) {
        finite = false;
        t0 = 0.0;
        return;
    }
    t0 = sign * std::exp(lg);
}

template <unsigned D>
inline void coefficient(const Residue<mpfloat<D>>& r, double x, mpfloat<D>& t0, bool& finite) {
    mpfloat<D> c = 1;
    for (const auto& g : r.gnum) c *= bmp::tgamma(g);
    for (const auto& g : r.gden) c /= bmp::tgamma(g);
    t0 = c * bmp::pow(mpfloat<D>(x), r.bh);
    finite = true;
}

template <class Real>
Real eps_of() {
    using std::pow;
    return pow(Real(10), -static_cast<int>(std::numeric_limits<Real>::digits10) - 1);
}

template <class Real>
SlaterSum<Real> slater(const Plan& pl, double x, bool leading_only) {
    using std::fabs;
    using bmp::fabs;
    SlaterSum<Real> out;
    const Real y = Real(pl.arg_sign * x);
    const Real eps = eps_of<Real>();
    for (int h = 0; h < pl.m; ++h) {
        Residue<Real> r = residue<Real>(pl, h);
        if (r.vanishes) continue;
        Real t;
        bool finite = true;
        coefficient(r, x, t, finite);
        if (!finite) {
            out.finite = false;
            return out;
        }
        Real s = t;
        Real local_max = fabs(t);
        if (!leading_only) {
            double settle = 2.0;
            for (const auto& v : r.num) settle = std::max(settle, std::fabs(static_cast<double>(v)) + 2.0);
            for (const auto& v : r.den) settle = std::max(settle, std::fabs(static_cast<double>(v)) + 2.0);
            long k = 0;
            for (;; ++k) {
                if (k >= kMeijerMaxTerms) {
                    throw ConvergenceError("meijer_g: residue series did not converge within 1e5 terms at x=" +
                                           std::to_string(x));
                }
                Real ratio = y / Real(k + 1);
                for (const auto& v : r.num) ratio *= v + k;
                for (const auto& v : r.den) ratio /= v + k;
                t *= ratio;
                if (t == 0) break;
                s += t;
                const Real at = fabs(t);
                if (at > local_max) local_max = at;
                if constexpr (std::is_same_v<Real, double>) {
                    if (!std::isfinite(s) || local_max > 1e300) {
                        out.finite = false;
                        return out;
                    }
                }
                if (k + 1 > settle && fabs(ratio) < 0.9 && at <= eps * local_max) break;
            }
        }
        out.sum += s;
        if (local_max > out.max_abs) out.max_abs = local_max;
    }
    return out;
}

template <unsigned D>
std::optional<MeijerGResult> try_tier(const Plan& pl, double x, double log_scale, double& digits_needed) {
    if (D < digits_needed && D < 1600) return std::nullopt;
    const SlaterSum<mpfloat<D>> r = slater<mpfloat<D>>(pl, x, false);
    if (r.max_abs == 0) return MeijerGResult{0.0, false, true, 0.0, static_cast<int>(D)};
    if (r.sum == 0) {
        digits_needed = D + 1;
        return std::nullopt;
    }
    const double loss = static_cast<double>(bmp::log10(r.max_abs / bmp::abs(r.sum)));
    if (static_cast<double>(D) - loss >= 20.0) {
        const mpfloat<D> scaled = r.sum * bmp::exp(mpfloat<D>(log_scale));
        return MeijerGResult{static_cast<double>(scaled), false, true, 0.0, static_cast<int>(D)};
    }
    // A sum that is pure rounding noise understates the loss, so jump further.
    digits_needed = std::max(loss + 25.0, static_cast<double>(D) - loss < 5.0 ? 2.0 * D : 0.0);
    return std::nullopt;
}

MeijerGResult evaluate(const Plan& pl, double x, double log_scale) {
    const SlaterSum<double> d = slater<double>(pl, x, false);
    double digits_needed = 50.0;
    if (d.finite) {
        if (d.max_abs == 0.0) return {0.0, false, true, 0.0, 16};
        if (d.sum != 0.0) {
            const double loss = std::log10(d.max_abs / std::fabs(d.sum));
            const double scaled = d.sum * std::exp(log_scale);
            const bool representable = std::isfinite(scaled) && std::fabs(scaled) > 1e-290;
            if (loss < 3.0 && representable) return {scaled, false, true, 0.0, 16};
            if (loss < 14.0) digits_needed = loss + 25.0;
        }
    }
    if (auto r = try_tier<50>(pl, x, log_scale, digits_needed)) return *r;
    if (auto r = try_tier<100>(pl, x, log_scale, digits_needed)) return *r;
    if (auto r = try_tier<200>(pl, x, log_scale, digits_needed)) return *r;
    if (auto r = try_tier<400>(pl, x, log_scale, digits_needed)) return *r;
    if (auto r = try_tier<800>(pl, x, log_scale, digits_needed)) return *r;
    if (auto r = try_tier<1600>(pl, x, log_scale, digits_needed)) return *r;
    throw ConvergenceError("meijer_g: cancellation exceeds 1600-digit working precision at x=" + std::to_string(x));
}

}  // namespace

MeijerGResult meijer_g_detailed(const MeijerGSpec& spec, double x, double log_scale) {
    validate(spec);
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("meijer_g: x must be positive and finite");
    if (!std::isfinite(log_scale)) throw DomainError("meijer_g: log_scale must be finite");
    if (!coalescing(spec.b, spec.m)) return evaluate(make_plan(spec, spec.b), x, log_scale);

    MeijerGResult r1 = evaluate(make_plan(spec, perturb(spec.b, spec.m, kCoalesceEps)), x, log_scale);
    const MeijerGResult r2 = evaluate(make_plan(spec, perturb(spec.b, spec.m, 0.5 * kCoalesceEps)), x, log_scale);
    r1.perturbed = true;
    const double scale = std::fmax(std::fabs(r1.value), std::numeric_limits<double>::min());
    r1.eps_spread = std::fabs(r1.value - r2.value) / scale;
    r1.consistent = r1.eps_spread < kDualEpsRelTol;
    // the perturbation error is linear in eps; extrapolate it away
    r1.value = 2.0 * r2.value - r1.value;
    return r1;
}

double meijer_g(const MeijerGSpec& spec, double x) {
    return meijer_g_detailed(spec, x).value;
}

double meijer_g_scaled(const MeijerGSpec& spec, double x, double log_scale) {
    return meijer_g_detailed(spec, x, log_scale).value;
}

double meijer_g_leading(const MeijerGSpec& spec, double x) {
    validate(spec);
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("meijer_g_leading: x must be positive and finite");
    const std::vector<double> b = coalescing(spec.b, spec.m) ? perturb(spec.b, spec.m, kCoalesceEps) : spec.b;
    const Plan pl = make_plan(spec, b);
    const SlaterSum<double> d = slater<double>(pl, x, true);
    if (d.finite) return d.sum;
    return static_cast<double>(slater<mpfloat<50>>(pl, x, true).sum);
}

bool meijer_g_coalescing(const MeijerGSpec& spec) {
    validate(spec);
    return coalescing(spec.b, spec.m);
}

}  // namespace fsorf::specfun
