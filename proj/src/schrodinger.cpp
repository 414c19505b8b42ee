#include "susyqm/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"
#include "susyqm/richardson.hpp"

namespace susyqm {

namespace {

constexpr double kBoxMargin = 25.0;
constexpr std::size_t kMaxBoxDoublings = 8;

double relative_scale(double e) { return std::max(1.0, std::fabs(e)); }

// Directional coefficients of the highest power: x -> +inf and x -> -inf.
struct LeadingBehaviour {
    double power = 0.0;
    double coeff = 0.0;  // min over both directions
    double next_power = 0.0;
    double others = 0.0;  // sum of |coeff| over lower powers, constant included
};

LeadingBehaviour leading_behaviour(const Potential& v) {
    LeadingBehaviour lb;
    const auto& terms = v.terms();
    if (terms.empty()) throw DomainError("constant potential is not confining");
    lb.power = terms.front().power;
    double plus = 0.0, minus = 0.0;
    for (const auto& t : terms) {
        if (t.power == lb.power) {
            const bool odd = !t.absolute && std::fmod(t.power, 2.0) != 0.0;
            plus += t.coeff;
            minus += odd ? -t.coeff : t.coeff;
        } else {
            lb.next_power = std::max(lb.next_power, t.power);
            lb.others += std::fabs(t.coeff);
        }
    }
    lb.coeff = std::min(plus, minus);
    lb.others += std::fabs(v.constant());
    if (!(lb.coeff > 0.0)) throw DomainError("potential " + v.to_string() + " is not confining");
    return lb;
}

double golden_minimum(const Potential& v, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = v(c), fd = v(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
        if (fc < fd) {
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
    return std::min({fc, fd, v(0.5 * (a + b))});
}

// Smallest |x| on the given side beyond which V stays above the threshold.
double outer_crossing(const Potential& v, double threshold, double radius, double side) {
    const std::size_t steps = std::max<std::size_t>(4000, static_cast<std::size_t>(20.0 * radius));
    double prev = radius;
    for (std::size_t j = 1; j <= steps; ++j) {
        const double r = radius * (1.0 - static_cast<double>(j) / static_cast<double>(steps));
        if (v(side * r) <= threshold) {
            double lo = r, hi = prev;  // V(lo) <= thr < V(hi)
            for (int it = 0; it < 100 && hi - lo > 1e-12 * relative_scale(hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                (v(side * mid) <= threshold ? lo : hi) = mid;
            }
            return hi;
        }
        prev = r;
    }
    return 0.0;
}

double box_minimum(const Potential& v, double x_min, double x_max) {
    const std::size_t steps = 20000;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= steps; ++j) {
        best = std::min(best, v(x_min + (x_max - x_min) * static_cast<double>(j) / steps));
    }
    return best;
}

// Coarsest grid used for a box: a few points per local wavelength of the top
// requested level, and never fewer than ~8 points per node.
std::size_t initial_points(const Potential& v, double x_min, double x_max, std::size_t levels) {
    const double vmin = box_minimum(v, x_min, x_max);
    const double vedge = std::max(v(x_min), v(x_max));
    double top = vedge - vmin;
    try {
        const double estimate = crude_level_estimate(v, levels - 1);
        // Without walls the box edge sits far out in the forbidden region, so
        // V there says nothing about the wavelength of the requested levels.
        top = v.wall() ? std::max(top, estimate) : std::min(top, estimate + kBoxMargin);
    } catch (const DomainError&) {
        // no polynomial growth (e.g. V = 0 inside walls)
    }
    if (!std::isfinite(top) || top < 0.0) top = 0.0;
    const double length = x_max - x_min;
    double h = 1.2 / std::sqrt(top + 1.0);
    h = std::min(h, length / static_cast<double>(8 * levels + 17));
    auto n = static_cast<std::size_t>(std::ceil(length / h)) - 1;
    if (n % 2 == 0) ++n;  // keep the midpoint on the grid
    return std::max<std::size_t>(n, 5);
}

std::vector<double> bisect_range(const TridiagonalOperator& t, std::size_t first, std::size_t count) {
    const std::size_t n = t.size();
    const double e = static_cast<double>(std::fabs(t.offdiag));
    double glo = std::numeric_limits<double>::infinity();
    double ghi = -glo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i == 0 || i + 1 == n) ? e : 2.0 * e;
        const double d = static_cast<double>(t.diag[i]);
        glo = std::min(glo, d - r);
        ghi = std::max(ghi, d + r);
    }
    const double pad = 1e-14 * std::max(std::fabs(glo), std::fabs(ghi)) + 1e-300;
    glo -= pad;
    ghi += pad;

    std::vector<double> lo(count, glo), hi(count, ghi);
    for (std::size_t k = 0; k < count; ++k) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo[k] + hi[k]);
            if (hi[k] - lo[k] <= 1e-14 * std::max({1.0, std::fabs(lo[k]), std::fabs(hi[k])}) ||
                mid <= lo[k] || mid >= hi[k])
                break;
            const std::size_t c = sturm_count(t, mid);
            // c eigenvalues below mid: indices < c have hi <= mid, others lo >= mid.
            for (std::size_t j = k; j < count; ++j) {
                if (first + j < c) {
                    hi[j] = std::min(hi[j], mid);
                } else {
                    lo[j] = std::max(lo[j], mid);
                }
            }
        }
    }
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = 0.5 * (lo[k] + hi[k]);
    return out;
}

// LU with partial pivoting of the tridiagonal T - shift, then solve in place.
class ShiftedTridiagonal {
public:
    ShiftedTridiagonal(const TridiagonalOperator& t, double shift)
        : n_(t.size()), dl_(n_ - 1, static_cast<double>(t.offdiag)), d_(n_),
          du_(n_ - 1, static_cast<double>(t.offdiag)), du2_(n_ > 2 ? n_ - 2 : 0, 0.0), swap_(n_ - 1, false) {
        for (std::size_t i = 0; i < n_; ++i) d_[i] = static_cast<double>(t.diag[i] - shift);
        double scale = 0.0;
        for (double v : d_) scale = std::max(scale, std::fabs(v));
        tiny_ = std::numeric_limits<double>::epsilon() * (scale + 2.0 * std::fabs(dl_.empty() ? 0.0 : dl_[0]));
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
                if (d_[i] == 0.0) d_[i] = tiny_;
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swap_[i] = true;
            }
        }
        for (auto& v : d_) {
            if (std::fabs(v) < tiny_) v = std::copysign(tiny_, v == 0.0 ? 1.0 : v);
        }
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (swap_[i]) {
                const double temp = b[i] - dl_[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= dl_[i] * b[i];
            }
        }
        b[n_ - 1] /= d_[n_ - 1];
        if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
        for (std::size_t i = n_ - 2; i-- > 0;) {
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
        }
    }

private:
    std::size_t n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<bool> swap_;
    double tiny_ = 0.0;
};

EigenState inverse_iteration(const TridiagonalOperator& t, const Grid& g, double lambda) {
    const std::size_t n = t.size();
    const ShiftedTridiagonal lu(t, lambda);
    std::vector<double> v(n);
    std::uint32_t state = 12345u;
    for (auto& x : v) {
        state = state * 1664525u + 1013904223u;
        x = 0.5 + static_cast<double>(state >> 8) / static_cast<double>(1u << 24);
    }
    double tnorm = 0.0;
    for (long double d : t.diag)
        tnorm = std::max(tnorm, static_cast<double>(std::fabs(d) + 2.0L * std::fabs(t.offdiag)));

    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double y : x) s += y * y;
        s = std::sqrt(s);
        for (auto& y : x) y /= s;
    };
    normalize(v);
    bool converged = false;
    for (int it = 0; it < 12; ++it) {
        lu.solve(v);
        normalize(v);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double tv = t.diag[i] * v[i];
            if (i > 0) tv += t.offdiag * v[i - 1];
            if (i + 1 < n) tv += t.offdiag * v[i + 1];
            const double r = tv - lambda * v[i];
            r2 += r * r;
        }
        if (it >= 1 && std::sqrt(r2) <= 1e-9 * tnorm) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceError("inverse iteration stagnated at E = " + format_shortest(lambda));

    const double h = g.spacing();
    double s = 0.0, vmax = 0.0;
    for (double y : v) {
        s += y * y;
        vmax = std::max(vmax, std::fabs(y));
    }
    const double scale = 1.0 / std::sqrt(h * s);
    double sign = 1.0;
    for (double y : v) {
        if (std::fabs(y) > 1e-3 * vmax) {
            sign = y > 0 ? 1.0 : -1.0;
            break;
        }
    }
    for (auto& y : v) y *= sign * scale;
    return {lambda, g, std::move(v)};
}

}  // namespace

// ---------------------------------------------------------------------------

void Grid::validate() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max))
        throw DomainError("grid requires finite x_min < x_max");
    if (n < 3) throw DomainError("grid requires at least 3 interior points");
}

TridiagonalOperator build_hamiltonian(const Potential& v, const Grid& g) {
    g.validate();
    const double h = g.spacing();
    const long double hl = h;
    const long double kinetic = 1.0L / (hl * hl);
    TridiagonalOperator t;
    t.diag.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) t.diag[i] = 2.0L * kinetic + v(g.point(i + 1));
    t.offdiag = -kinetic;
    return t;
}

std::size_t sturm_count(const TridiagonalOperator& t, double lambda) {
    const long double e2 = t.offdiag * t.offdiag;
    const long double pivmin = std::numeric_limits<long double>::min() * std::max(1.0L, e2);
    const long double shift = lambda;
    std::size_t count = 0;
    long double q = 0.0L;
    for (std::size_t i = 0; i < t.size(); ++i) {
        q = t.diag[i] - shift - (i == 0 ? 0.0L : e2 / q);
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> lowest_eigenvalues(const TridiagonalOperator& t, std::size_t k) {
    if (k > t.size())
        throw DomainError("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(t.size()) +
                          "-point operator");
    if (k == 0) return {};
    return bisect_range(t, 0, k);
}

std::vector<double> Spectrum::energies() const {
    std::vector<double> out;
    out.reserve(levels.size());
    for (const auto& l : levels) out.push_back(l.energy);
    return out;
}

double Spectrum::max_error() const {
    double m = 0.0;
    for (const auto& l : levels) m = std::max(m, l.error);
    return m;
}

double exceedance_radius(const Potential& v, double threshold) {
    if (v.wall()) throw DomainError("exceedance radius is undefined with hard walls");
    const LeadingBehaviour lb = leading_behaviour(v);
    // Beyond r every lower term is below coeff r^p / M in magnitude, so the
    // leading term wins (a Fujiwara-type bound; tight when coeff is small).
    const auto& terms = v.terms();
    std::vector<std::pair<double, double>> lower;  // (|c_k|, k)
    for (const auto& t : terms) {
        if (t.power != lb.power) lower.emplace_back(std::fabs(t.coeff), t.power);
    }
    const double c0 = std::fabs(v.constant() - threshold);
    if (c0 > 0.0) lower.emplace_back(c0, 0.0);
    const double m = static_cast<double>(lower.size()) + 1.0;
    double r = 0.0;
    for (const auto& [c, k] : lower) r = std::max(r, std::pow(m * c / lb.coeff, 1.0 / (lb.power - k)));
    return std::max(r, 1e-3) * (1.0 + 1e-9);
}

double potential_minimum(const Potential& v, double radius) {
    const std::size_t steps = std::max<std::size_t>(20000, static_cast<std::size_t>(50.0 * radius));
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    const double step = 2.0 * radius / static_cast<double>(steps);
    for (std::size_t j = 0; j <= steps; ++j) {
        const double val = v(-radius + step * static_cast<double>(j));
        if (val < best) {
            best = val;
            best_j = j;
        }
    }
    const double x0 = -radius + step * static_cast<double>(best_j);
    return std::min(best, golden_minimum(v, std::max(-radius, x0 - step), std::min(radius, x0 + step)));
}

double crude_level_estimate(const Potential& v, std::size_t n) {
    const LeadingBehaviour lb = leading_behaviour(v);
    const double d = lb.power;
    // int_0^1 sqrt(1 - u^d) du
    const double shape = std::tgamma(1.0 + 1.0 / d) * std::tgamma(1.5) / std::tgamma(1.5 + 1.0 / d);
    const double quantum = std::numbers::pi * (static_cast<double>(n) + 0.5);
    return std::pow(quantum * std::pow(lb.coeff, 1.0 / d) / (2.0 * shape), 2.0 * d / (d + 2.0));
}

double auto_box(const Potential& v, std::size_t levels, double tol) {
    if (levels == 0) throw DomainError("auto_box needs at least one level");
    if (v.wall()) return *v.wall();
    if (!v.confining()) throw DomainError("potential " + v.to_string() + " is not confining; give a box");

    const double r0 = exceedance_radius(v, v(0.0));
    const double vmin = potential_minimum(v, r0);
    const double threshold = vmin + crude_level_estimate(v, levels - 1) + kBoxMargin;
    const double radius = exceedance_radius(v, threshold);
    double box = std::max(outer_crossing(v, threshold, radius, 1.0), outer_crossing(v, threshold, radius, -1.0));
    if (!(box > 0.0)) box = radius;

    for (std::size_t d = 0; d < kMaxBoxDoublings; ++d) {
        const std::size_t n = std::max(initial_points(v, -box, box, levels), 2 * levels + 5);
        const Grid g1 = Grid::symmetric(box, n);
        const Grid g2 = Grid::symmetric(2.0 * box, 2 * (n + 1) - 1);
        const auto e1 = lowest_eigenvalues(build_hamiltonian(v, g1), levels);
        const auto e2 = lowest_eigenvalues(build_hamiltonian(v, g2), levels);
        bool stable = true;
        for (std::size_t k = 0; k < levels; ++k) {
            if (std::fabs(e1[k] - e2[k]) >= 0.1 * tol * relative_scale(e2[k])) stable = false;
        }
        if (stable) return box;
        box *= 2.0;
    }
    throw ConvergenceError("box size did not stabilize for " + v.to_string());
}

Spectrum solve(const SolveRequest& req) {
    if (req.levels == 0) throw DomainError("solve needs at least one level");
    if (!(req.tol > 0.0)) throw DomainError("tolerance must be positive");
    const Potential& v = req.potential;

    Grid grid;
    if (req.grid) {
        grid = *req.grid;
        grid.validate();
    } else {
        double box = 0.0;
        if (req.box) {
            if (!(*req.box > 0.0)) throw DomainError("box half-width must be positive");
            box = v.wall() ? std::min(*req.box, *v.wall()) : *req.box;
        } else {
            box = auto_box(v, req.levels, req.tol);
        }
        grid = Grid::symmetric(box, initial_points(v, -box, box, req.levels));
    }
    while (grid.n < 2 * req.levels + 5) grid = grid.refined();

    // A level is frozen the first time its Romberg diagonal settles; later
    // rows only add round-off once the grid is fine enough for that level.
    std::vector<RichardsonTable> tables(req.levels);
    std::vector<std::optional<Level>> done(req.levels);
    Spectrum out;
    out.box = 0.5 * (grid.x_max - grid.x_min);
    for (std::size_t j = 0;; ++j) {
        const auto e = lowest_eigenvalues(build_hamiltonian(v, grid), req.levels);
        bool converged = true;
        for (std::size_t k = 0; k < req.levels; ++k) {
            if (done[k]) continue;
            tables[k].push(e[k]);
            if (j >= 2 && tables[k].last_change() < req.tol * relative_scale(tables[k].best())) {
                done[k] = Level{k, tables[k].best(), tables[k].last_change()};
            } else {
                converged = false;
            }
        }
        out.finest = grid;
        out.grids = j + 1;
        if (converged) break;
        const Grid next = grid.refined();
        if (next.n > req.max_points) {
            std::ostringstream msg;
            msg << "eigenvalues of " << v.to_string() << " not converged to tol " << req.tol << " with "
                << grid.n << " points; unconverged levels:";
            for (std::size_t k = 0; k < req.levels; ++k) {
                if (!done[k]) msg << " N=" << k << " (change " << tables[k].last_change() << ")";
            }
            throw ConvergenceError(msg.str());
        }
        grid = next;
    }

    out.levels.resize(req.levels);
    for (std::size_t k = 0; k < req.levels; ++k) {
        out.levels[k] = *done[k];
        if (k > 0 && !(out.levels[k].energy > out.levels[k - 1].energy))
            throw ConvergenceError("extrapolated levels lost strict ordering at N = " + std::to_string(k));
    }
    return out;
}

// ---------------------------------------------------------------------------

double EigenState::norm() const {
    double s = 0.0;
    for (double y : samples) s += y * y;
    return grid.spacing() * s;
}

std::size_t EigenState::nodes() const {
    double vmax = 0.0;
    for (double y : samples) vmax = std::max(vmax, std::fabs(y));
    const double floor = 1e-8 * vmax;
    std::size_t count = 0;
    double last = 0.0;
    for (double y : samples) {
        if (std::fabs(y) <= floor) continue;
        if (last != 0.0 && (y > 0) != (last > 0)) ++count;
        last = y;
    }
    return count;
}

double EigenState::edge_ratio() const {
    double vmax = 0.0;
    for (double y : samples) vmax = std::max(vmax, std::fabs(y));
    if (samples.empty() || vmax == 0.0) return 0.0;
    return std::max(std::fabs(samples.front()), std::fabs(samples.back())) / vmax;
}

EigenState eigenstate(const TridiagonalOperator& t, const Grid& g, double energy) {
    if (t.size() != g.n) throw DomainError("operator and grid sizes differ");
    const std::size_t c = sturm_count(t, energy);
    double lambda = 0.0;
    if (c == 0) {
        lambda = bisect_range(t, 0, 1).front();
    } else if (c >= t.size()) {
        lambda = bisect_range(t, t.size() - 1, 1).front();
    } else {
        const auto pair = bisect_range(t, c - 1, 2);
        lambda = (energy - pair[0] <= pair[1] - energy) ? pair[0] : pair[1];
    }
    return inverse_iteration(t, g, lambda);
}

std::vector<EigenState> eigenstates(const Potential& v, const Grid& g, std::size_t k) {
    const TridiagonalOperator t = build_hamiltonian(v, g);
    const auto values = lowest_eigenvalues(t, k);
    std::vector<EigenState> out;
    out.reserve(k);
    for (double e : values) out.push_back(inverse_iteration(t, g, e));
    return out;
}

double matrix_element(const EigenState& a, const Potential& op, const EigenState& b) {
    if (a.samples.size() != b.samples.size() || a.grid.n != b.grid.n)
        throw DomainError("matrix element between states on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) s += a.samples[i] * op(a.grid.point(i + 1)) * b.samples[i];
    return a.grid.spacing() * s;
}

double expectation(const EigenState& state, const Potential& op) { return matrix_element(state, op, state); }

PtCoefficients pt_coefficients(const Potential& v0, const Potential& w1, const Potential& w2,
                               std::size_t n_states, double tol) {
    if (n_states == 0) throw DomainError("sum over states needs at least one excited state");
    const std::size_t probe_levels = 8;
    const double box = auto_box(v0, probe_levels, tol);
    std::size_t n = std::max(initial_points(v0, -box, box, probe_levels), n_states + 17);
    if (n % 2 == 0) ++n;
    Grid grid = Grid::symmetric(box, n);

    RichardsonTable t0, t1, t2;
    PtCoefficients out;
    out.n_states = n_states;
    const std::size_t max_grids = 7;
    for (std::size_t j = 0; j < max_grids; ++j) {
        const auto states = eigenstates(v0, grid, n_states + 1);
        const EigenState& ground = states.front();
        const double e0 = ground.energy;
        const double e1 = expectation(ground, w1);
        double e2 = expectation(ground, w2);
        for (std::size_t k = 1; k <= n_states; ++k) {
            const double gap = e0 - states[k].energy;
            if (std::fabs(gap) < 1e-12 * relative_scale(e0))
                throw DomainError("degenerate level E_" + std::to_string(k) + " = e0 in sum over states");
            const double m = matrix_element(ground, w1, states[k]);
            e2 += m * m / gap;
        }
        t0.push(e0);
        t1.push(e1);
        t2.push(e2);
        out.grids = j + 1;
        if (j >= 2 && t0.last_change() < tol * relative_scale(t0.best()) &&
            t1.last_change() < tol * relative_scale(t1.best()) && t2.last_change() < tol * relative_scale(t2.best()))
            break;
        grid = grid.refined();
    }
    out.e0 = t0.best();
    out.e1 = t1.best();
    out.e2 = t2.best();
    out.err0 = t0.last_change();
    out.err1 = t1.last_change();
    out.err2 = t2.last_change();
    return out;
}

}  // namespace susyqm
