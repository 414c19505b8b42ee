#include "susyqm/bohr_sommerfeld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"
#include "susyqm/quadrature.hpp"
#include "susyqm/schrodinger.hpp"

namespace susyqm {

namespace {

constexpr double kPi = std::numbers::pi;

double scale_of(double e) { return std::max(1.0, std::fabs(e)); }

// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign.
template <class F>
double bisect_root(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo < 1e-15 * std::max(1.0, std::fabs(mid))) break;
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// x in [a, b] maximizing V (minimizing E - V), golden-section.
double golden_argmax(const Potential& v, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = v(c), fd = v(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = v(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = v(d);
        }
    }
    return 0.5 * (a + b);
}

// Integral of sqrt(max(0, E - V)) over [l, r] using x = c + rho sin(theta).
ActionResult segment_action(const Potential& v, double energy, double l, double r) {
    const double c = 0.5 * (l + r), rho = 0.5 * (r - l);
    auto integrate = [&](std::size_t order) {
        const auto& rule = gauss_legendre(order);
        double s = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
            const double theta = 0.5 * kPi * rule.nodes[i];
            const double x = c + rho * std::sin(theta);
            const double f = energy - v(x);
            if (f > 0.0) s += rule.weights[i] * std::sqrt(f) * rho * std::cos(theta);
        }
        return 0.5 * kPi * s;
    };
    double prev = integrate(16);
    double diff = 0.0;
    for (std::size_t order = 32; order <= 4096; order *= 2) {
        const double cur = integrate(order);
        diff = std::fabs(cur - prev);
        prev = cur;
        if (diff <= 1e-14 * scale_of(cur)) break;
    }
    return {prev, diff};
}

}  // namespace

TurningPoints turning_points(const Potential& v, double energy) {
    TurningPoints tp;
    double left = 0.0, right = 0.0;
    if (v.wall()) {
        left = -*v.wall();
        right = *v.wall();
    } else {
        if (!v.confining()) throw DomainError("turning points need a confining potential");
        right = exceedance_radius(v, energy);
        left = -right;
    }
    const double vmin = v.wall() ? std::numeric_limits<double>::infinity() : potential_minimum(v, right);
    auto f = [&](double x) { return energy - v(x); };
    const std::size_t steps = std::max<std::size_t>(8000, static_cast<std::size_t>(100.0 * (right - left)));
    const double step = (right - left) / static_cast<double>(steps);

    // Outermost sign changes, scanning inward from each edge.
    std::size_t ia = steps + 1, ib = steps + 1;
    for (std::size_t j = 0; j <= steps; ++j) {
        if (f(left + step * static_cast<double>(j)) >= 0.0) {
            ia = j;
            break;
        }
    }
    if (ia > steps) {
        if (!v.wall() && energy <= vmin)
            throw DomainError("E = " + format_shortest(energy) + " is not above min V");
        throw DomainError("no classically allowed region at E = " + format_shortest(energy));
    }
    for (std::size_t j = steps + 1; j-- > 0;) {
        if (f(left + step * static_cast<double>(j)) >= 0.0) {
            ib = j;
            break;
        }
    }
    if (ia == 0 && v.wall()) {
        tp.x_a = left;
        tp.hard_wall = true;
    } else {
        tp.x_a = bisect_root(f, left + step * static_cast<double>(ia - 1), left + step * static_cast<double>(ia));
    }
    if (ib == steps && v.wall()) {
        tp.x_b = right;
        tp.hard_wall = true;
    } else {
        tp.x_b = bisect_root(f, left + step * static_cast<double>(ib), left + step * static_cast<double>(ib + 1));
    }

    // Interior sign changes (below an interior barrier) and near-tangencies.
    const double tangency = 1e-6 * std::max(1.0, std::fabs(energy - (std::isfinite(vmin) ? vmin : 0.0)));
    std::vector<double> zeros;
    double prev = f(left + step * static_cast<double>(ia));
    for (std::size_t j = ia + 1; j < ib; ++j) {
        const double x = left + step * static_cast<double>(j);
        const double cur = f(x);
        if ((cur < 0.0) != (prev < 0.0)) {
            zeros.push_back(bisect_root(f, x - step, x));
            tp.below_barrier = true;
        }
        const double next = f(x + step);
        if (cur <= prev && cur <= next && cur >= 0.0) {
            const double xm = golden_argmax(v, x - step, x + step);
            const double fm = f(xm);
            if (fm < tangency) {
                zeros.push_back(xm);
                if (fm < 0.0) tp.below_barrier = true;
            }
        }
        prev = cur;
    }
    std::sort(zeros.begin(), zeros.end());
    for (double z : zeros) {
        if (z <= tp.x_a || z >= tp.x_b) continue;
        if (!tp.interior_zeros.empty() && z - tp.interior_zeros.back() < 1e-9 * scale_of(z)) continue;
        tp.interior_zeros.push_back(z);
    }
    return tp;
}

ActionResult action_integral(const Potential& v, double energy, const TurningPoints& tp) {
    std::vector<double> breaks{tp.x_a};
    std::vector<double> inner = tp.interior_zeros;
    if (v.has_absolute_terms() && tp.x_a < 0.0 && tp.x_b > 0.0) inner.push_back(0.0);
    std::sort(inner.begin(), inner.end());
    for (double z : inner) {
        if (z > breaks.back() && z < tp.x_b) breaks.push_back(z);
    }
    breaks.push_back(tp.x_b);

    ActionResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const ActionResult part = segment_action(v, energy, breaks[i], breaks[i + 1]);
        total.value += part.value;
        total.error += part.error;
    }
    if (total.error > 1e-8 * scale_of(total.value))
        throw ConvergenceError("action quadrature did not converge (error " + format_shortest(total.error) + ")");
    return total;
}

ActionResult action_integral(const Potential& v, double energy) {
    return action_integral(v, energy, turning_points(v, energy));
}

GammaEntry wkb_gamma(const Potential& v, std::size_t n, double energy, double energy_error) {
    GammaEntry entry;
    entry.n = n;
    entry.energy = energy;
    entry.energy_error = energy_error;
    entry.turning = turning_points(v, energy);
    entry.action = action_integral(v, energy, entry.turning);
    entry.gamma = entry.action.value / kPi - static_cast<double>(n) - 0.5;

    double sensitivity = 0.0;
    if (energy_error > 0.0) {
        const double up = action_integral(v, energy + energy_error).value;
        double down = entry.action.value;
        try {
            down = action_integral(v, energy - energy_error).value;
        } catch (const DomainError&) {
            // E - err below min V: one-sided estimate
            down = 2.0 * entry.action.value - up;
        }
        sensitivity = 0.5 * std::fabs(up - down);
    }
    entry.error = (entry.action.error + sensitivity) / kPi;
    return entry;
}

GammaTable gamma_table(const Potential& v, std::size_t n_max, double tol) {
    SolveRequest req;
    req.potential = v;
    req.levels = n_max + 1;
    req.tol = tol;
    const Spectrum spectrum = solve(req);
    GammaTable table;
    table.potential = v.to_string();
    for (const auto& level : spectrum.levels) {
        table.entries.push_back(wkb_gamma(v, level.index, level.energy, level.error));
    }
    return table;
}

double energy_from_action(const Potential& v, double action) {
    if (!(action > 0.0)) throw DomainError("action must be positive");
    double lo = std::numeric_limits<double>::infinity();
    if (v.wall()) {
        const double w = *v.wall();
        for (int j = 0; j <= 20000; ++j) lo = std::min(lo, v(-w + w * j / 10000.0));
    } else {
        lo = potential_minimum(v, exceedance_radius(v, v(0.0)));
    }
    auto s = [&](double e) { return action_integral(v, e).value - action; };
    double flo = -action;  // S(min V) = 0
    double hi = lo + 1.0;
    double fhi = s(hi);
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        hi = lo + 2.0 * (hi - lo) + 1.0;
        fhi = s(hi);
    }
    // Illinois-modified regula falsi.
    int side = 0;
    double e = hi;
    for (int it = 0; it < 200; ++it) {
        e = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(e > lo && e < hi)) e = 0.5 * (lo + hi);
        const double fe = s(e);
        if (fe == 0.0 || hi - lo < 1e-14 * scale_of(e)) break;
        if ((fe < 0) == (flo < 0)) {
            lo = e;
            flo = fe;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = e;
            fhi = fe;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
        if (std::fabs(fe) < 1e-14 * action) break;
    }
    return e;
}

SusyGammaPair susy_gamma_pair(double a, std::size_t n_max, double tol) {
    if (!(a > 0.0)) throw DomainError("susy_gamma_pair requires a > 0");
    const auto partners = partner_potentials(Superpotential::monomial(a, 3));
    SusyGammaPair out;
    out.a = a;
    out.bosonic = gamma_table(partners.bosonic, n_max + 1, tol);
    out.bosonic.sector = "B";
    out.fermionic = gamma_table(partners.fermionic, n_max, tol);
    out.fermionic.sector = "F";
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto& b = out.bosonic.entries[n + 1];
        const auto& f = out.fermionic.entries[n];
        out.pairs.push_back({n, b.energy, f.energy, b.gamma, f.gamma, b.error + f.error});
    }
    return out;
}

InvarianceReport coupling_invariance(std::span<const double> couplings, std::size_t n_max, bool bosonic,
                                     double tol) {
    InvarianceReport report;
    for (double a : couplings) {
        if (!(a > 0.0)) throw DomainError("coupling_invariance requires a > 0");
        const auto partners = partner_potentials(Superpotential::monomial(a, 3));
        GammaTable t = gamma_table(bosonic ? partners.bosonic : partners.fermionic, n_max, tol);
        t.sector = bosonic ? "B" : "F";
        report.couplings.push_back(a);
        report.tables.push_back(std::move(t));
    }
    for (std::size_t i = 1; i < report.tables.size(); ++i) {
        for (std::size_t n = 0; n <= n_max; ++n) {
            const auto& ref = report.tables.front().entries[n];
            const auto& cur = report.tables[i].entries[n];
            const double dev = std::fabs(cur.gamma - ref.gamma);
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > 10.0 * (cur.error + ref.error)) {
                report.violations.push_back("a=" + format_shortest(report.couplings[i]) + " N=" + std::to_string(n) +
                                            ": |dgamma| = " + format_shortest(dev));
            }
        }
    }
    return report;
}

}  // namespace susyqm
