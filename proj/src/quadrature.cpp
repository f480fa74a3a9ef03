#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fsorf/errors.hpp"
#include "fsorf/specfun.hpp"

namespace fsorf::specfun {

namespace {

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk21(const Integrand& f, double a, double b) {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = K::abscissa();
    const auto& wk = K::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * wk[0];
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = h * xk[i];
        const double s = f(c - dx) + f(c + dx);
        kron += wk[i] * s;
        // Gauss nodes sit at the odd Kronrod positions.
        if (i % 2 == 1) gauss += wg[i / 2] * s;
    }
    kron *= h;
    gauss *= h;
    if (!std::isfinite(kron)) {
        throw ConvergenceError("integrate: non-finite integrand on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
    }
    return {a, b, kron, std::fabs(kron - gauss)};
}

}  // namespace

QuadResult integrate_detailed(const Integrand& f, double a, double b, double tol, int max_subdivisions) {
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    if (a == b) return {};
    std::priority_queue<Segment> heap;
    Segment first = gk21(f, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int subdivisions = 0;
    while (err > std::fmax(tol, tol * std::fabs(total))) {
        if (subdivisions >= max_subdivisions) {
            throw ConvergenceError("integrate: subdivision budget exhausted on [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "], error estimate " + std::to_string(err));
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gk21(f, worst.a, mid);
        Segment right = gk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        // Re-sum periodically so running updates do not drift.
        if (subdivisions % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, subdivisions};
}

double integrate(const Integrand& f, double a, double b, double tol) {
    return integrate_detailed(f, a, b, tol).value;
}

double integrate_semi_infinite(const Integrand& f, double tol, double knee, double lower) {
    if (!(knee > 0.0)) throw DomainError("integrate_semi_infinite: knee must be positive");
    const double split = lower + knee;
    const double head = integrate(f, lower, split, tol);
    auto mapped = [&](double t) {
        const double u = 1.0 - t;
        if (u <= 0.0) return 0.0;
        const double v = f(split + knee * t / u);
        return v == 0.0 ? 0.0 : knee * v / (u * u);
    };
    const double tail = integrate(mapped, 0.0, 1.0, tol);
    return head + tail;
}

}  // namespace fsorf::specfun
