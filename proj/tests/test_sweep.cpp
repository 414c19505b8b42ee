#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "susyqm/errors.hpp"
#include "susyqm/sweep.hpp"

using namespace susyqm;

namespace {

std::vector<double> energies(const SweepResult& r) {
    std::vector<double> e;
    for (const auto& s : r.samples) e.push_back(s.energy);
    return e;
}

SweepResult run(const FamilySpec& f, std::vector<double> a, std::size_t level = 0) { return sweep(f, level, a); }

std::vector<Sample> synthetic(double beta, double p, double alpha, double b, double q, std::vector<double> a) {
    std::vector<Sample> out;
    for (double x : a) out.push_back({x, beta * std::pow(std::fabs(x), p) * std::exp(-alpha * b / std::pow(std::fabs(x), q)), 0.0, {}});
    return out;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("family construction") {
    const FamilySpec s = FamilySpec::sextic(2.0);
    CHECK(s.superpotential(0.5) == Superpotential({0, 2, 0, 0.5}));
    CHECK(s.potential(1.0) == partner_potentials(Superpotential({0, 2, 0, 1})).bosonic);
    FamilySpec f = FamilySpec::quartic(1.0);
    f.sector = Sector::Fermionic;
    CHECK(f.potential(1.0) == partner_potentials(Superpotential({0, 1, 1})).fermionic);
    CHECK(FamilySpec::harmonic().with_box(2.0).potential(1.0).wall() == 2.0);
    CHECK(FamilySpec::named("harmonic", 5.0).q.is_zero());
    CHECK_THROWS_AS(FamilySpec::named("octic", 1.0), DomainError);
    CHECK_THROWS_AS(FamilySpec::sextic(0.0).with_box(-1.0), DomainError);
    CHECK(to_string(Sector::Bosonic) == "B");
}

TEST_CASE("coupling grids") {
    const auto g = coupling_grid(-1.0, 1.0, 5);
    CHECK(g == std::vector<double>{-1.0, -0.5, 0.5, 1.0});
    const auto geo = geometric_grid(-0.04, -0.005, 4);
    REQUIRE(geo.size() == 4);
    CHECK(geo.front() == doctest::Approx(-0.04));
    CHECK(geo.back() == doctest::Approx(-0.005));
    CHECK(geo[1] / geo[0] == doctest::Approx(geo[2] / geo[1]));
    CHECK_THROWS_AS(geometric_grid(-1.0, 1.0, 4), DomainError);
    CHECK_THROWS_AS(coupling_grid(1.0, -1.0, 4), DomainError);
}

TEST_CASE("documented sweeps") {
    auto e = energies(run(FamilySpec::harmonic(), {-1, -0.5, 0.5, 1}));
    CHECK(e[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(e[2]) < 1e-9);
    CHECK(std::fabs(e[3]) < 1e-9);

    e = energies(run(FamilySpec::sextic(0.0), {0.25, 1}));
    CHECK(std::fabs(e[0]) < 1e-8);
    CHECK(std::fabs(e[1]) < 1e-8);

    e = energies(run(FamilySpec::sextic(0.0), {-1, -0.25}));
    CHECK(e[0] == doctest::Approx(1.93556).epsilon(5e-4 / 1.93556));
    CHECK(e[1] == doctest::Approx(0.96778).epsilon(5e-4));

    e = energies(run(FamilySpec::quartic(0.0), {-1, 1}));
    CHECK(e[0] == doctest::Approx(0.562136).epsilon(1e-5 / 0.562136));
    CHECK(e[0] == doctest::Approx(e[1]).epsilon(1e-10));
}

TEST_CASE("sweep bookkeeping") {
    const auto r = sweep(FamilySpec::sextic(1.0), 1, std::vector<double>{0.5, -0.5, 0.25});
    CHECK(r.level == 1);
    CHECK(r.b == 1.0);
    REQUIRE(r.samples.size() == 3);
    CHECK(r.samples[0].a == -0.5);
    CHECK(r.samples[2].a == 0.5);
    for (const auto& s : r.samples) {
        CHECK(s.ok());
        CHECK(s.error <= 1e-10 * std::max(1.0, std::fabs(s.energy)));
    }
    CHECK_THROWS_AS(sweep(FamilySpec::sextic(1.0), 0, std::vector<double>{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(sweep(FamilySpec::sextic(1.0), 0, std::vector<double>{0.5, 0.5}), DomainError);

    // a failing solve is annotated, not thrown
    const auto bad = sweep(FamilySpec::sextic(1.0), 0, std::vector<double>{1.0}, SweepOptions{1e-17, 1});
    REQUIRE(bad.samples.size() == 1);
    CHECK_FALSE(bad.samples[0].ok());
    CHECK(std::isnan(bad.samples[0].energy));
    CHECK_FALSE(bad.ok());
}

TEST_CASE("thread count does not change results") {
    const std::vector<double> a{-0.7, -0.3, 0.2, 0.6};
    const auto one = sweep(FamilySpec::quartic(1.0), 0, a, SweepOptions{1e-10, 1});
    const auto three = sweep(FamilySpec::quartic(1.0), 0, a, SweepOptions{1e-10, 3});
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(one.samples[i].energy == three.samples[i].energy);
}

TEST_CASE("quartic mirror symmetry") {
    for (double b : {-1.0, 0.0, 1.0}) {
        const auto r = run(FamilySpec::quartic(b), {-0.8, -0.3, 0.3, 0.8});
        CHECK(r.samples[0].energy == doctest::Approx(r.samples[3].energy).epsilon(1e-9));
        CHECK(r.samples[1].energy == doctest::Approx(r.samples[2].energy).epsilon(1e-9));
    }
}

TEST_CASE("b = 0 scaling shortcut") {
    const double tol = 1e-10;
    for (std::size_t n : {0u, 2u}) {
        const auto ref = run(FamilySpec::sextic(0.0), {-1, 1}, n);
        const auto r = run(FamilySpec::sextic(0.0), {-0.3, 0.6}, n);
        CHECK(std::fabs(r.samples[0].energy - std::sqrt(0.3) * ref.samples[0].energy) < 5 * tol * std::max(1.0, ref.samples[0].energy));
        CHECK(std::fabs(r.samples[1].energy - std::sqrt(0.6) * ref.samples[1].energy) < 5 * tol * std::max(1.0, ref.samples[1].energy));

        const auto qref = run(FamilySpec::quartic(0.0), {-1, 1}, n);
        const auto q = run(FamilySpec::quartic(0.0), {-0.3, 0.6}, n);
        CHECK(std::fabs(q.samples[0].energy - std::pow(0.3, 2.0 / 3.0) * qref.samples[0].energy) < 5 * tol * std::max(1.0, qref.samples[0].energy));
        CHECK(std::fabs(q.samples[1].energy - std::pow(0.6, 2.0 / 3.0) * qref.samples[1].energy) < 5 * tol * std::max(1.0, qref.samples[1].energy));
    }
}

TEST_CASE("energy at a = 0") {
    const auto e = energy_at_zero(FamilySpec::sextic(-1.0), 0);
    REQUIRE(e);
    CHECK(e->energy == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(energy_at_zero(FamilySpec::sextic(0.0), 0));
    CHECK_FALSE(energy_at_zero(FamilySpec::harmonic(), 0));
    const auto box = energy_at_zero(FamilySpec::harmonic().with_box(2.0), 0);
    REQUIRE(box);
    CHECK(box->energy == doctest::Approx(std::pow(3.14159265358979 / 4, 2)).epsilon(1e-9));
}

TEST_CASE("one-sided limits") {
    SUBCASE("harmonic") {
        const auto z = limits_at_zero(FamilySpec::harmonic(), 0);
        CHECK(std::fabs(z.minus.limit) < 1e-7);
        CHECK(std::fabs(z.plus.limit) < 1e-7);
        CHECK(z.minus.derivative == doctest::Approx(-2.0).epsilon(1e-6));
        CHECK(std::fabs(z.plus.derivative) < 1e-6);
        CHECK_FALSE(z.minus.divergent);
        CHECK_FALSE(z.at_zero);
        CHECK(z.minus.eps.size() == 9);
    }
    SUBCASE("sextic b = 0") {
        const auto z = limits_at_zero(FamilySpec::sextic(0.0), 0);
        CHECK(std::fabs(z.minus.limit) < 1e-6);
        CHECK(std::fabs(z.plus.limit) < 1e-7);
        CHECK(z.minus.divergent);
        CHECK(z.minus.growth == doctest::Approx(0.5).epsilon(0.05));
        CHECK_FALSE(z.plus.divergent);
        CHECK(std::fabs(z.plus.derivative) < 1e-6);
    }
    SUBCASE("sextic b = -1") {
        const auto z = limits_at_zero(FamilySpec::sextic(-1.0), 0);
        REQUIRE(z.at_zero);
        CHECK(z.at_zero->energy == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(std::fabs(z.plus.limit) < 1e-6);
    }
    CHECK_THROWS_AS(limits_at_zero(FamilySpec::harmonic(), 0, LimitOptions{0.1, 3, 1e-10, 0}), DomainError);
}

TEST_CASE("classification of fast cases") {
    CHECK(classify(FamilySpec::sextic(-1.0), 0).kind == TransitionKind::FirstOrder);
    CHECK(classify(FamilySpec::sextic(0.0), 0).kind == TransitionKind::SecondOrder);
    const auto inf = classify(FamilySpec::sextic(1.0), 0);
    CHECK(inf.kind == TransitionKind::InfiniteOrder);
    REQUIRE(inf.minus_probe);
    CHECK(inf.minus_probe->instanton_like);
    CHECK(inf.minus_probe->correlation > 0.999);

    const auto box = classify(FamilySpec::harmonic().with_box(2.0), 0);
    CHECK(box.kind == TransitionKind::Analytic);
    CHECK(std::fabs(box.limits.minus.derivative - box.limits.plus.derivative) < 1e-3);
    CHECK(to_string(TransitionKind::InfiniteOrder) == "InfiniteOrder");
}

TEST_CASE("power-law fits") {
    const auto exact = synthetic(1.7, 0.8, 0.0, 1.0, 1.0, {-1, -0.5, -0.25, -0.125, -0.0625});
    auto f = fit_power_law(exact);
    CHECK(f.beta == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(f.p == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(f.residual_rms < 1e-12);
    CHECK(f.a_lo == -1.0);
    CHECK(f.a_hi == -0.0625);
    f = fit_power_law(exact, 0.8);
    CHECK(f.p == 0.8);
    CHECK(f.beta == doctest::Approx(1.7).epsilon(1e-10));

    const FamilySpec h = FamilySpec::harmonic();
    const auto [lo, hi] = default_power_window(h);
    const auto r = sweep(h, 0, geometric_grid(lo, hi, 8));
    const auto hf = fit_power_law(r.samples);
    CHECK(std::fabs(hf.p - 1.0) < 1e-6);
    CHECK(std::fabs(hf.beta - 2.0) < 1e-6);

    CHECK_THROWS_AS(fit_power_law(std::vector<Sample>(exact.begin(), exact.begin() + 3)), DomainError);
    auto mixed = exact;
    mixed.back().a = 0.0625;
    CHECK_THROWS_AS(fit_power_law(mixed), DomainError);
    auto negative = exact;
    negative[2].energy = -1e-15;
    CHECK_THROWS_AS(fit_power_law(negative), DomainError);
}

TEST_CASE("instanton fits") {
    const std::vector<double> a{-0.3, -0.25, -0.2, -0.15, -0.1};
    const auto s = synthetic(1.2, 0.5, 0.7, 2.0, 0.5, a);
    const auto f = fit_instanton(s, 2.0, 0.5, 0.5);
    CHECK(f.alpha == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(f.beta == doctest::Approx(1.2).epsilon(1e-6));
    CHECK(f.dropped == 0);
    CHECK_FALSE(f.curvature_dominant);

    // a subleading (1 + c/|a|^-q) correction shows up as curvature
    auto bent = s;
    for (auto& x : bent) x.energy *= std::exp(0.5 * std::pow(2.0 / std::sqrt(std::fabs(x.a)), 2));
    CHECK(fit_instanton(bent, 2.0, 0.5, 0.5).curvature_dominant);

    // unresolved energies are skipped, not fitted
    auto noisy = s;
    noisy.push_back({-0.05, 1e-15, 1e-13, {}});
    noisy.push_back({-0.04, -2e-15, 1e-13, {}});
    const auto g = fit_instanton(noisy, 2.0, 0.5, 0.5);
    CHECK(g.dropped == 2);
    CHECK(g.alpha == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(g.points == 7);

    CHECK_THROWS_AS(fit_instanton(s, -1.0, 0.5, 0.5), DomainError);
    const auto narrow = synthetic(1.0, 0.5, 0.7, 1.0, 0.5, {-0.30, -0.29, -0.28, -0.27});
    CHECK_THROWS_AS(fit_instanton(narrow, 1.0, 0.5, 0.5), DomainError);
}

TEST_CASE("degeneracy of partner spectra") {
    SUBCASE("w = x^3") {
        const auto r = check_degeneracy(Superpotential({0, 0, 0, 1}), 6);
        CHECK(r.ok());
        CHECK(r.susy == SusyClass::ExactBosonic);
        REQUIRE(r.zero_energy);
        CHECK(std::fabs(*r.zero_energy) < 1e-6);
        CHECK(r.pairs[0].upper == doctest::Approx(1.93556).epsilon(5e-4 / 1.93556));
        CHECK(r.max_difference < 1e-6);
    }
    SUBCASE("w = x") {
        const auto r = check_degeneracy(Superpotential({0, 1}), 5);
        CHECK(r.ok());
        for (const auto& p : r.pairs) CHECK(p.lower == doctest::Approx(2.0 * (p.n + 1)).epsilon(1e-9));
    }
    SUBCASE("w = x^2") {
        const auto r = check_degeneracy(Superpotential({0, 0, 1}), 6);
        CHECK(r.ok());
        CHECK(r.susy == SusyClass::Broken);
        CHECK_FALSE(r.zero_energy);
        CHECK(r.bosonic[0] > 0.5);
        CHECK(r.max_difference < 1e-6);
    }
    SUBCASE("w = -x^3 puts the zero mode in the fermionic sector") {
        const auto r = check_degeneracy(Superpotential({0, 0, 0, -1}), 3);
        CHECK(r.ok());
        CHECK(r.susy == SusyClass::ExactFermionic);
        CHECK(std::fabs(r.fermionic[0]) < 1e-6);
    }
}

TEST_CASE("exact susy means a zero ground state, broken means a shared positive one") {
    for (const auto& w : {Superpotential({0, 1, 0, 1}), Superpotential({0, -2, 0, 1}), Superpotential({1, 0, 0, 0, 0, 1})}) {
        const auto r = check_degeneracy(w, 2);
        if (r.susy == SusyClass::Broken) {
            CHECK(r.bosonic[0] > 1e-6);
            CHECK(r.bosonic[0] == doctest::Approx(r.fermionic[0]).epsilon(1e-8));
        } else {
            CHECK(std::fabs(*r.zero_energy) < 1e-6);
        }
    }
}

TEST_CASE("family perturbation coefficients vanish at b = 1") {
    const auto s = family_pt_coefficients(FamilySpec::sextic(1.0), 200);
    CHECK(std::fabs(s.e1) < 1e-8);
    CHECK(std::fabs(s.e2) < 1e-4);
    const auto q = family_pt_coefficients(FamilySpec::quartic(1.0), 200);
    CHECK(std::fabs(q.e1) < 1e-8);
    CHECK(std::fabs(q.e2) < 1e-4);
}

}  // TEST_SUITE
