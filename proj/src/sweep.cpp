#include "susyqm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"

namespace susyqm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double scale_of(double e) { return std::max(1.0, std::fabs(e)); }

// Runs body(i) for i in [0, n) on `threads` workers.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
    threads = std::min(std::max<std::size_t>(threads, 1), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

Sample solve_sample(const FamilySpec& family, std::size_t level, double a, double tol) {
    Sample s;
    s.a = a;
    try {
        SolveRequest req;
        req.potential = family.potential(a);
        req.levels = level + 1;
        req.tol = tol;
        const Spectrum spectrum = solve(req);
        s.energy = spectrum.levels[level].energy;
        s.error = spectrum.levels[level].error;
    } catch (const std::exception& e) {
        s.energy = kNaN;
        s.error = kNaN;
        s.failure = e.what();
        if (s.failure.empty()) s.failure = "solver failure";
    }
    return s;
}

struct Extrapolation {
    double value = 0.0;
    double error = 0.0;
    bool divergent = false;
    double growth = 0.0;
};

// Limit of f_k sampled at eps_k = eps0 2^-k as k grows, assuming a leading
// behaviour f = L + C eps^s.  noise[k] bounds the error of f[k].
Extrapolation extrapolate(const std::vector<double>& f, const std::vector<double>& noise, bool allow_divergence,
                          const char* what) {
    const std::size_t n = f.size();
    if (n < 4) throw DomainError("extrapolation needs at least four samples");
    auto floor_at = [&](std::size_t k) {
        return 10.0 * (noise[k] + noise[k + 1]) + 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(f[k]);
    };

    if (allow_divergence) {
        // Steady geometric growth of |f| over the last four steps.
        std::vector<double> s;
        for (std::size_t k = n - 4; k + 1 < n; ++k) {
            if (f[k] == 0.0 || f[k + 1] == 0.0 || (f[k] < 0) != (f[k + 1] < 0)) break;
            if (std::fabs(f[k] - f[k + 1]) <= floor_at(k)) break;
            s.push_back(std::log2(std::fabs(f[k + 1] / f[k])));
        }
        if (s.size() == 3) {
            const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
            if (*lo > 0.1 && *hi - *lo < 0.1) {
                Extrapolation out;
                out.divergent = true;
                out.growth = (s[0] + s[1] + s[2]) / 3.0;
                out.value = std::copysign(std::numeric_limits<double>::infinity(), f.back());
                out.error = 0.0;
                return out;
            }
        }
    }

    const double d_last = f[n - 2] - f[n - 1];
    if (std::fabs(d_last) <= floor_at(n - 2)) {
        return {f[n - 1], std::fabs(d_last) + noise[n - 1]};
    }
    // Aitken-type estimate from the triples ending at n-1 and at n-2.
    auto estimate = [&](std::size_t end) -> std::optional<double> {
        const double d1 = f[end - 2] - f[end - 1];
        const double d2 = f[end - 1] - f[end];
        if (std::fabs(d2) <= floor_at(end - 1)) return f[end];
        const double r = d1 / d2;
        if (!std::isfinite(r) || r < 1.05) return std::nullopt;
        return f[end] - d2 / (r - 1.0);
    };
    const auto e1 = estimate(n - 1);
    const auto e0 = estimate(n - 2);
    if (!e1 || !e0) {
        throw ConvergenceError(std::string("extrapolation of ") + what + " did not settle (last values " +
                               format_shortest(f[n - 2]) + ", " + format_shortest(f[n - 1]) + ")");
    }
    return {*e1, std::fabs(*e1 - *e0) + noise[n - 1]};
}

struct LineFit {
    double intercept = 0.0, slope = 0.0;
    double intercept_se = 0.0, slope_se = 0.0;
    double rms = 0.0;
    double correlation = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    f.rms = std::sqrt(rss / n);
    f.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    if (x.size() > 2) {
        const double s2 = rss / (n - 2.0);
        f.slope_se = std::sqrt(s2 / sxx);
        f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return f;
}

void check_fit_samples(std::span<const Sample> samples) {
    if (samples.size() < 4) throw DomainError("fit needs at least four samples");
    const bool negative = samples.front().a < 0.0;
    for (const auto& s : samples) {
        if (!s.ok()) throw DomainError("fit window contains a failed sample at a = " + format_shortest(s.a));
        if (s.a == 0.0 || (s.a < 0.0) != negative) throw DomainError("fit samples must lie on one side of a = 0");
        if (!(s.energy > 0.0))
            throw DomainError("non-positive energy " + format_shortest(s.energy) + " at a = " + format_shortest(s.a));
    }
}

void set_window(FitResult& r, std::span<const Sample> samples) {
    r.points = samples.size();
    r.a_lo = samples.front().a;
    r.a_hi = samples.front().a;
    for (const auto& s : samples) {
        r.a_lo = std::min(r.a_lo, s.a);
        r.a_hi = std::max(r.a_hi, s.a);
    }
}

InstantonProbe probe_side(const FamilySpec& family, std::size_t level, double side, double reference,
                          double reference_error, const ClassifyOptions& opt) {
    InstantonProbe probe;
    probe.side = side;
    probe.reference = reference;
    std::vector<double> a;
    for (std::size_t k = 0; k < opt.probe_points; ++k)
        a.push_back(side * opt.probe_start * std::pow(2.0, -0.5 * static_cast<double>(k)));
    std::sort(a.begin(), a.end());
    const SweepResult r =
        sweep(family, level, a, SweepOptions{opt.limits.tol, opt.limits.threads});
    std::vector<Sample> samples = r.samples;
    // outermost first
    std::sort(samples.begin(), samples.end(),
              [](const Sample& x, const Sample& y) { return std::fabs(x.a) > std::fabs(y.a); });

    std::vector<double> aa, dd;
    for (const auto& s : samples) {
        probe.a.push_back(s.a);
        probe.delta.push_back(s.energy - reference);
        probe.errors.push_back(s.error + reference_error);
        const double d = s.energy - reference;
        const bool resolvable = s.ok() && std::fabs(d) > 20.0 * (s.error + reference_error) + 1e-12;
        if (resolvable) {
            aa.push_back(s.a);
            dd.push_back(d);
        }
    }
    if (aa.size() > 6) {
        aa.erase(aa.begin(), aa.end() - 6);
        dd.erase(dd.begin(), dd.end() - 6);
    }
    probe.used = aa.size();
    if (aa.size() < 4) return probe;
    for (double d : dd) {
        if ((d < 0) != (dd.front() < 0)) return probe;
    }

    const std::size_t m = aa.size();
    probe.slope = std::log(std::fabs(dd[m - 1] / dd[m - 2])) / std::log(std::fabs(aa[m - 1] / aa[m - 2]));
    std::vector<double> y(m), x(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = std::log(std::fabs(dd[i])) - family.prefactor_power * std::log(std::fabs(aa[i]));
    probe.correlation = -1.0;
    for (int j = 0; j <= 55; ++j) {
        const double q = 0.25 + 0.05 * j;
        for (std::size_t i = 0; i < m; ++i) x[i] = -std::pow(std::fabs(aa[i]), -q);
        const double c = fit_line(x, y).correlation;
        if (c > probe.correlation) {
            probe.correlation = c;
            probe.q = q;
        }
    }
    probe.instanton_like = probe.correlation > opt.correlation && probe.slope > opt.min_slope;
    probe.ambiguous = !probe.instanton_like && probe.correlation > 0.99 && probe.slope > 0.5 * opt.min_slope;
    return probe;
}

}  // namespace

std::string_view to_string(Sector s) { return s == Sector::Bosonic ? "B" : "F"; }

std::string_view to_string(TransitionKind k) {
    switch (k) {
        case TransitionKind::Analytic: return "Analytic";
        case TransitionKind::FirstOrder: return "FirstOrder";
        case TransitionKind::SecondOrder: return "SecondOrder";
        case TransitionKind::InfiniteOrder: return "InfiniteOrder";
    }
    return "?";
}

std::string_view to_string(FitModel m) { return m == FitModel::PowerLaw ? "power" : "instanton"; }

FamilySpec FamilySpec::sextic(double b) {
    FamilySpec f;
    f.name = "sextic";
    f.p = Superpotential::monomial(1.0, 3);
    f.q = Superpotential::monomial(1.0, 1);
    f.b = b;
    f.prefactor_power = 0.5;
    f.instanton_power = 0.5;
    return f;
}

FamilySpec FamilySpec::quartic(double b) {
    FamilySpec f;
    f.name = "quartic";
    f.p = Superpotential::monomial(1.0, 2);
    f.q = Superpotential::monomial(1.0, 1);
    f.b = b;
    f.prefactor_power = 2.0 / 3.0;
    f.instanton_power = 2.0 / 3.0;
    return f;
}

FamilySpec FamilySpec::harmonic() {
    FamilySpec f;
    f.name = "harmonic";
    f.p = Superpotential::monomial(1.0, 1);
    return f;
}

FamilySpec FamilySpec::named(std::string_view name, double b) {
    if (name == "sextic") return sextic(b);
    if (name == "quartic") return quartic(b);
    if (name == "harmonic") {
        FamilySpec f = harmonic();
        f.b = b;
        return f;
    }
    throw DomainError("unknown family '" + std::string(name) + "' (expected sextic, quartic or harmonic)");
}

FamilySpec FamilySpec::with_box(double half_width) const {
    if (!(half_width > 0.0)) throw DomainError("box half-width must be positive");
    FamilySpec f = *this;
    f.box = half_width;
    return f;
}

Superpotential FamilySpec::superpotential(double a) const { return p * a + q * b; }

Potential FamilySpec::potential(double a) const {
    const PartnerPotentials pp = partner_potentials(superpotential(a));
    Potential v = sector == Sector::Bosonic ? pp.bosonic : pp.fermionic;
    return box ? v.with_wall(*box) : v;
}

void FamilySpec::validate() const {
    if (p.is_zero()) throw DomainError("family needs a nonzero p(x)");
    if (!std::isfinite(b)) throw DomainError("b must be finite");
    if (box && !(*box > 0.0)) throw DomainError("box half-width must be positive");
}

bool SweepResult::ok() const noexcept {
    return std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.ok(); });
}

std::size_t worker_threads() {
    const char* env = std::getenv("SUSYQM_THREADS");
    if (!env) return 1;
    std::size_t n = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec != std::errc{} || ptr != end || n == 0) return 1;
    return std::min<std::size_t>(n, 256);
}

std::vector<double> coupling_grid(double a_min, double a_max, std::size_t points) {
    if (!(a_min < a_max)) throw DomainError("coupling range needs a_min < a_max");
    if (points < 2) throw DomainError("coupling range needs at least two points");
    std::vector<double> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        double a = a_min + (a_max - a_min) * t;
        if (i + 1 == points) a = a_max;
        // snap round-off residue of an intended zero
        if (std::fabs(a) < 1e-12 * (a_max - a_min)) continue;
        out.push_back(a);
    }
    return out;
}

std::vector<double> geometric_grid(double a_lo, double a_hi, std::size_t points) {
    if (!(a_lo < a_hi) || a_lo * a_hi <= 0.0) throw DomainError("geometric grid needs a_lo < a_hi on one side of 0");
    if (points < 2) throw DomainError("geometric grid needs at least two points");
    const double s = a_lo < 0.0 ? -1.0 : 1.0;
    const double l0 = std::log(std::fabs(a_lo)), l1 = std::log(std::fabs(a_hi));
    std::vector<double> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out.push_back(s * std::exp(l0 + (l1 - l0) * t));
    }
    out.front() = a_lo;
    out.back() = a_hi;
    std::sort(out.begin(), out.end());
    return out;
}

SweepResult sweep(const FamilySpec& family, std::size_t level, std::span<const double> couplings,
                  const SweepOptions& options) {
    family.validate();
    if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
    std::vector<double> a(couplings.begin(), couplings.end());
    for (double x : a) {
        if (!std::isfinite(x)) throw DomainError("coupling must be finite");
        if (x == 0.0) throw DomainError("a = 0 is not a sweep sample; use the limits at zero");
    }
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) throw DomainError("repeated coupling in sweep");

    SweepResult out;
    out.family = family.name;
    out.level = level;
    out.b = family.b;
    out.sector = family.sector;
    out.samples.resize(a.size());
    const std::size_t threads = options.threads ? options.threads : worker_threads();
    parallel_for(a.size(), threads, [&](std::size_t i) { out.samples[i] = solve_sample(family, level, a[i], options.tol); });
    return out;
}

std::optional<Level> energy_at_zero(const FamilySpec& family, std::size_t level, double tol) {
    family.validate();
    const Potential v = family.potential(0.0);
    if (!v.wall() && !v.confining()) return std::nullopt;
    SolveRequest req;
    req.potential = v;
    req.levels = level + 1;
    req.tol = tol;
    return solve(req).levels[level];
}

ZeroLimits limits_at_zero(const FamilySpec& family, std::size_t level, const LimitOptions& options) {
    if (!(options.eps0 > 0.0)) throw DomainError("eps0 must be positive");
    if (options.halvings < 4) throw DomainError("limits need at least four halvings");
    std::vector<double> eps;
    for (std::size_t k = 0; k <= options.halvings; ++k) eps.push_back(options.eps0 * std::ldexp(1.0, -static_cast<int>(k)));
    std::vector<double> couplings;
    for (double e : eps) {
        couplings.push_back(e);
        couplings.push_back(-e);
    }
    const SweepResult r = sweep(family, level, couplings, SweepOptions{options.tol, options.threads});

    ZeroLimits out;
    out.at_zero = energy_at_zero(family, level, options.tol);
    for (double side : {-1.0, 1.0}) {
        OneSidedLimit lim;
        lim.side = side;
        lim.eps = eps;
        for (double e : eps) {
            const auto it = std::find_if(r.samples.begin(), r.samples.end(), [&](const Sample& s) { return s.a == side * e; });
            if (!it->ok())
                throw ConvergenceError("limit sample at a = " + format_shortest(it->a) + " failed: " + it->failure);
            lim.energies.push_back(it->energy);
            lim.errors.push_back(it->error);
        }
        const char* name = side > 0 ? "E(0+)" : "E(0-)";
        const Extrapolation el = extrapolate(lim.energies, lim.errors, false, name);
        lim.limit = el.value;
        lim.limit_error = el.error;
        // Secants between neighbouring samples: free of the error in `limit`.
        std::vector<double> qnoise;
        for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
            const double de = side * (eps[k] - eps[k + 1]);
            lim.quotients.push_back((lim.energies[k] - lim.energies[k + 1]) / de);
            qnoise.push_back((lim.errors[k] + lim.errors[k + 1]) / std::fabs(de));
        }
        const Extrapolation ed = extrapolate(lim.quotients, qnoise, true, side > 0 ? "D+" : "D-");
        lim.derivative = ed.value;
        lim.derivative_error = ed.error;
        lim.divergent = ed.divergent;
        lim.growth = ed.growth;
        (side > 0 ? out.plus : out.minus) = std::move(lim);
    }
    return out;
}

TransitionClass classify(const FamilySpec& family, std::size_t level, const ClassifyOptions& options) {
    TransitionClass out;
    out.limits = limits_at_zero(family, level, options.limits);
    const ZeroLimits& z = out.limits;

    // First order: a jump among the one-sided limits and E(0).
    std::vector<std::pair<double, double>> values{{z.minus.limit, z.minus.limit_error}, {z.plus.limit, z.plus.limit_error}};
    if (z.at_zero) values.emplace_back(z.at_zero->energy, z.at_zero->error);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double d = std::fabs(values[i].first - values[j].first);
            if (d > out.jump) {
                out.jump = d;
                out.jump_error = values[i].second + values[j].second;
            }
        }
    }
    if (std::fabs(out.jump - options.tol_jump) <= 3.0 * out.jump_error)
        throw UnresolvedError("energy jump " + format_shortest(out.jump) + " +- " + format_shortest(out.jump_error) +
                              " is within error of tol_jump");
    if (out.jump > options.tol_jump) {
        out.kind = TransitionKind::FirstOrder;
        return out;
    }

    // Second order: one-sided slopes differ, or one of them diverges.
    if (z.minus.divergent || z.plus.divergent) {
        out.derivative_gap = std::numeric_limits<double>::infinity();
        out.kind = TransitionKind::SecondOrder;
        return out;
    }
    out.derivative_gap = std::fabs(z.plus.derivative - z.minus.derivative);
    out.derivative_gap_error = z.plus.derivative_error + z.minus.derivative_error;
    if (std::fabs(out.derivative_gap - options.tol_deriv) <= 3.0 * out.derivative_gap_error)
        throw UnresolvedError("derivative gap " + format_shortest(out.derivative_gap) + " +- " +
                              format_shortest(out.derivative_gap_error) + " is within error of tol_deriv");
    if (out.derivative_gap > options.tol_deriv) {
        out.kind = TransitionKind::SecondOrder;
        return out;
    }

    // Infinite order: continuous with matching slopes, yet one side departs
    // from the a = 0 value by an exponentially small amount.
    for (double side : {-1.0, 1.0}) {
        const OneSidedLimit& lim = side > 0 ? z.plus : z.minus;
        const double ref = z.at_zero ? z.at_zero->energy : lim.limit;
        const double ref_err = z.at_zero ? z.at_zero->error : lim.limit_error;
        (side > 0 ? out.plus_probe : out.minus_probe) = probe_side(family, level, side, ref, ref_err, options);
    }
    const bool instanton = out.minus_probe->instanton_like || out.plus_probe->instanton_like;
    const bool ambiguous = out.minus_probe->ambiguous || out.plus_probe->ambiguous;
    if (instanton) {
        out.kind = TransitionKind::InfiniteOrder;
        return out;
    }
    if (ambiguous)
        throw UnresolvedError("departure from E(0) is neither clearly exponential nor clearly power-like");
    out.kind = TransitionKind::Analytic;
    return out;
}

FitResult fit_power_law(std::span<const Sample> samples, std::optional<double> p) {
    check_fit_samples(samples);
    std::vector<double> x, y;
    for (const auto& s : samples) {
        x.push_back(std::log(std::fabs(s.a)));
        y.push_back(std::log(s.energy));
    }
    FitResult r;
    r.model = FitModel::PowerLaw;
    set_window(r, samples);
    if (p) {
        const auto n = static_cast<double>(x.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) mean += (y[i] - *p * x[i]) / n;
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) rss += std::pow(y[i] - *p * x[i] - mean, 2);
        r.p = *p;
        r.beta = std::exp(mean);
        r.residual_rms = std::sqrt(rss / n);
        r.beta_error = r.beta * std::sqrt(rss / (n - 1.0) / n);
    } else {
        const LineFit f = fit_line(x, y);
        r.p = f.slope;
        r.p_error = f.slope_se;
        r.beta = std::exp(f.intercept);
        r.beta_error = r.beta * f.intercept_se;
        r.residual_rms = f.rms;
    }
    return r;
}

constexpr double kResolvable = 10.0;

FitResult fit_instanton(std::span<const Sample> all, double b, double p, double q) {
    if (!(b > 0.0)) throw DomainError("instanton fit needs b > 0");
    if (!(q > 0.0)) throw DomainError("instanton fit needs q > 0");
    for (const auto& s : all)
        if (!s.ok()) throw DomainError("fit window contains a failed sample at a = " + format_shortest(s.a));
    // Exponentially small energies sink into solver noise near a = 0; those
    // samples carry no information about alpha.
    std::vector<Sample> kept;
    for (const auto& s : all)
        if (s.energy > kResolvable * s.error) kept.push_back(s);
    const std::size_t dropped = all.size() - kept.size();
    if (kept.size() < 4)
        throw DomainError("instanton fit: only " + std::to_string(kept.size()) + " of " +
                          std::to_string(all.size()) + " samples resolve E above its error estimate");
    check_fit_samples(kept);
    const std::span<const Sample> samples = kept;
    std::vector<double> x, y;
    for (const auto& s : samples) {
        x.push_back(b / std::pow(std::fabs(s.a), q));
        y.push_back(std::log(s.energy) - p * std::log(std::fabs(s.a)));
    }
    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const double span = *xhi - *xlo;
    if (!(span > 0.25)) throw DomainError("instanton window too narrow: b/|a|^q spans " + format_shortest(span));

    FitResult r;
    r.model = FitModel::Instanton;
    set_window(r, all);
    const LineFit f = fit_line(x, y);
    r.beta = std::exp(f.intercept);
    r.beta_error = r.beta * f.intercept_se;
    r.alpha = -f.slope;
    r.alpha_error = f.slope_se;
    r.p = p;
    r.q = q;
    r.residual_rms = f.rms;
    r.dropped = dropped;

    // Quadratic term in the centred variable: c2 t^2 with t in [-span/2, span/2].
    const double mid = 0.5 * (*xlo + *xhi);
    std::vector<double> t2(x.size()), res(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - mid;
        t2[i] = t * t;
        res[i] = y[i] - f.intercept - f.slope * x[i];
    }
    // residual against the part of t^2 orthogonal to (1, x)
    const LineFit g = fit_line(x, t2);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = t2[i] - g.intercept - g.slope * x[i];
        num += u * res[i];
        den += u * u;
    }
    const double c2 = den > 0.0 ? num / den : 0.0;
    r.curvature = c2 * 0.25 * span * span;
    // significant when the t^2 coefficient stands 3 standard errors clear
    double rss2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = t2[i] - g.intercept - g.slope * x[i];
        rss2 += std::pow(res[i] - c2 * u, 2);
    }
    const double se_c2 = x.size() > 3 && den > 0.0 ? std::sqrt(rss2 / static_cast<double>(x.size() - 3) / den) : 0.0;
    r.curvature_dominant = std::fabs(r.curvature) > 1e-9 && std::fabs(c2) > 3.0 * se_c2;
    return r;
}

std::pair<double, double> default_power_window(const FamilySpec& family) {
    (void)family;
    return {-1.0, -0.0625};
}

std::pair<double, double> default_instanton_window(const FamilySpec& family) {
    if (family.name == "quartic") {
        // b / |a|^(2/3) in [1.5, 3], positive side
        const double b = std::fabs(family.b) > 0.0 ? std::fabs(family.b) : 1.0;
        return {std::pow(b / 3.0, 1.5), std::pow(b / 1.5, 1.5)};
    }
    return {-0.04, -0.005};
}

DegeneracyReport check_degeneracy(const Superpotential& w, std::size_t levels, double tol) {
    if (levels == 0) throw DomainError("degeneracy check needs at least one level");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    DegeneracyReport rep;
    rep.susy = classify_susy(w);
    const PartnerPotentials pp = partner_potentials(w);
    const double solver_tol = std::min(1e-10, 0.01 * tol);
    auto levels_of = [&](const Potential& v) {
        SolveRequest req;
        req.potential = v;
        req.levels = levels + 1;
        req.tol = solver_tol;
        return solve(req).energies();
    };
    rep.bosonic = levels_of(pp.bosonic);
    rep.fermionic = levels_of(pp.fermionic);

    const bool broken = rep.susy == SusyClass::Broken;
    const std::vector<double>& upper = rep.susy == SusyClass::ExactFermionic ? rep.fermionic : rep.bosonic;
    const std::vector<double>& lower = rep.susy == SusyClass::ExactFermionic ? rep.bosonic : rep.fermionic;
    for (std::size_t n = 0; n < levels; ++n) {
        DegeneracyPair pr;
        pr.n = n;
        pr.upper = broken ? rep.bosonic[n] : upper[n + 1];
        pr.lower = broken ? rep.fermionic[n] : lower[n];
        pr.difference = std::fabs(pr.upper - pr.lower);
        rep.max_difference = std::max(rep.max_difference, pr.difference);
        if (!(pr.difference < tol * scale_of(pr.lower))) {
            rep.violations.push_back("N=" + std::to_string(n) + ": |dE| = " + format_shortest(pr.difference));
        }
        rep.pairs.push_back(pr);
    }
    if (!broken) {
        rep.zero_energy = upper[0];
        if (!(std::fabs(upper[0]) < tol))
            rep.violations.push_back("zero mode energy " + format_shortest(upper[0]) + " is not 0");
    }
    return rep;
}

PtCoefficients family_pt_coefficients(const FamilySpec& family, std::size_t n_states, double tol) {
    family.validate();
    // V(a) = (a p + b q)^2 -+ (a p' + b q') expanded in a
    const double sign = family.sector == Sector::Bosonic ? -1.0 : 1.0;
    const Superpotential bq = family.q * family.b;
    const Superpotential dp = derivative(family.p);
    const Superpotential dq = derivative(bq);
    Potential v0 = (bq * bq).as_potential() + dq.as_potential() * sign;
    Potential w1 = (family.p * bq).as_potential() * 2.0 + dp.as_potential() * sign;
    Potential w2 = (family.p * family.p).as_potential();
    if (family.box) {
        v0 = v0.with_wall(*family.box);
        w1 = w1.with_wall(*family.box);
        w2 = w2.with_wall(*family.box);
    }
    return pt_coefficients(v0, w1, w2, n_states, tol);
}

}  // namespace susyqm
