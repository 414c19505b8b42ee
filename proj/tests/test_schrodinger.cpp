#include <doctest.h>

#include <cmath>
#include <numbers>

#include "susyqm/errors.hpp"
#include "susyqm/expression.hpp"
#include "susyqm/richardson.hpp"
#include "susyqm/schrodinger.hpp"

using namespace susyqm;

namespace {

Spectrum solve_text(const char* v, std::size_t levels, double tol = 1e-10, std::optional<double> box = std::nullopt) {
    SolveRequest req;
    req.potential = parse_potential(v);
    req.levels = levels;
    req.tol = tol;
    req.box = box;
    return solve(req);
}

// Dense Jacobi sweep: an independent reference for small symmetric matrices.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

TEST_SUITE("schrodinger") {

TEST_CASE("hamiltonian assembly") {
    const Grid g{-2.0, 2.0, 3};  // h = 1
    const auto t = build_hamiltonian(Potential{}, g);
    REQUIRE(t.size() == 3);
    for (auto d : t.diag) CHECK(static_cast<double>(d) == 2.0);
    CHECK(static_cast<double>(t.offdiag) == -1.0);

    const auto sym = build_hamiltonian(parse_potential("x^2"), Grid::symmetric(3.0, 11));
    for (std::size_t i = 0; i < sym.size(); ++i) CHECK(sym.diag[i] == sym.diag[sym.size() - 1 - i]);

    const Grid g7 = Grid::symmetric(4.0, 7);
    const auto sextic = build_hamiltonian(parse_potential("x^6 - 3*x^2"), g7);
    const double h = g7.spacing();
    for (std::size_t i = 0; i < 7; ++i) {
        const double x = g7.point(i + 1);
        CHECK(static_cast<double>(sextic.diag[i]) == doctest::Approx(2 / (h * h) + std::pow(x, 6) - 3 * x * x));
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((Grid{1.0, 1.0, 5}).validate(), DomainError);
    CHECK_THROWS_AS((Grid{0.0, 1.0, 2}).validate(), DomainError);
    CHECK(Grid::symmetric(1.0, 3).refined().spacing() == doctest::Approx(0.5 * Grid::symmetric(1.0, 3).spacing()));
}

TEST_CASE("tridiagonal eigenvalues") {
    TridiagonalOperator t;
    t.diag = {2, 2, 2};
    t.offdiag = -1;
    const auto ev = lowest_eigenvalues(t, 3);
    CHECK(ev[0] == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(2).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(lowest_eigenvalues(t, 4), DomainError);
    CHECK(sturm_count(t, 2.0 - 1e-9) == 1);
    CHECK(sturm_count(t, 2.0 + 1e-9) == 2);
    CHECK(sturm_count(t, 10.0) == 3);

    TridiagonalOperator d;
    d.diag = {5, 5, 5, 5};
    d.offdiag = 0;
    CHECK(lowest_eigenvalues(d, 1)[0] == doctest::Approx(5));

    // against a dense Jacobi reference on an irregular diagonal
    TridiagonalOperator r;
    std::vector<std::vector<double>> dense(12, std::vector<double>(12, 0.0));
    for (std::size_t i = 0; i < 12; ++i) {
        const double v = std::sin(1.7 * i) * 3 + 0.1 * i * i;
        r.diag.push_back(v);
        dense[i][i] = v;
        if (i + 1 < 12) dense[i][i + 1] = dense[i + 1][i] = -0.8;
    }
    r.offdiag = -0.8;
    const auto ref = jacobi_eigenvalues(dense);
    const auto got = lowest_eigenvalues(r, 12);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12 * std::max(1.0, std::fabs(ref[i]))));
}

TEST_CASE("coarse harmonic discretization sits near 1") {
    const auto t = build_hamiltonian(parse_potential("x^2"), Grid::symmetric(6.0, 100));
    CHECK(lowest_eigenvalues(t, 1)[0] == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("harmonic exactness") {
    const auto s = solve_text("x^2", 11, 1e-9);
    REQUIRE(s.levels.size() == 11);
    for (const auto& l : s.levels) {
        CHECK(std::fabs(l.energy - (2.0 * l.index + 1.0)) < 1e-8);
        CHECK(l.error >= 0.0);
        CHECK(l.error <= 1e-9 * std::max(1.0, l.energy));
    }
    for (std::size_t i = 1; i < s.levels.size(); ++i) CHECK(s.levels[i - 1].energy < s.levels[i].energy);
}

TEST_CASE("reference energies") {
    CHECK(std::fabs(solve_text("x^6 - 3*x^2", 1).energy(0)) < 1e-7);
    CHECK(solve_text("x^6 + 3*x^2", 1).energy(0) == doctest::Approx(1.93556).epsilon(5e-4 / 1.93556));
    CHECK(solve_text("x^4 - 2*x", 1).energy(0) == doctest::Approx(0.562136).epsilon(1e-5 / 0.562136));
}

TEST_CASE("particle in a box") {
    const auto s = solve_text("0", 6, 1e-11, 1.0);
    for (const auto& l : s.levels) {
        const double exact = std::pow((l.index + 1) * std::numbers::pi / 2, 2);
        CHECK(l.energy == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK(s.box == 1.0);
}

TEST_CASE("auto box") {
    const double l = auto_box(parse_potential("x^2"), 3);
    CHECK(l * l >= crude_level_estimate(parse_potential("x^2"), 2) + 25);
    CHECK(l >= 5.5);
    CHECK(auto_box(parse_potential("x^2").with_wall(1.0), 3) == 1.0);
    CHECK_THROWS_AS(auto_box(parse_potential("x^3"), 1), DomainError);

    // doubling the box leaves a converged level alone
    const Potential v = parse_potential("x^6 + 3*x^2");
    const double lv = auto_box(v, 1);
    CHECK(v(lv) >= 25);
    SolveRequest wide;
    wide.potential = v;
    wide.box = 2 * lv;
    CHECK(solve(wide).energy(0) == doctest::Approx(solve_text("x^6 + 3*x^2", 1).energy(0)).epsilon(1e-9));
}

TEST_CASE("second-order convergence and approach from below") {
    const Potential v = parse_potential("x^2");
    Grid g = Grid::symmetric(8.0, 199);
    std::vector<double> e;
    for (int k = 0; k < 4; ++k) {
        e.push_back(lowest_eigenvalues(build_hamiltonian(v, g), 1)[0]);
        g = g.refined();
    }
    for (int k = 0; k + 2 < 4; ++k) CHECK((e[k] - e[k + 1]) / (e[k + 1] - e[k + 2]) == doctest::Approx(4.0).epsilon(0.3 / 4));
    // the central-difference ground state rises monotonically to the limit
    for (int k = 0; k + 1 < 4; ++k) CHECK(e[k] < e[k + 1]);
    CHECK(e.back() < 1.0);
}

TEST_CASE("richardson table removes h^2 and h^4") {
    RichardsonTable t;
    for (double h : {0.4, 0.2, 0.1, 0.05}) t.push(3.0 + 2 * h * h - 5 * std::pow(h, 4) + 7 * std::pow(h, 6));
    CHECK(t.best() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(t.raw(0) == doctest::Approx(3.0 + 2 * 0.16 - 5 * 0.0256 + 7 * 0.004096));
    // the previous diagonal still carries the h^6 term
    CHECK(t.last_change() == doctest::Approx(7 * 0.16 * 0.04 * 0.01).epsilon(1e-9));
}

TEST_CASE("scaling oracle for the fermionic sextic") {
    const double tol = 1e-10;
    const auto one = solve_text("x^6 + 3*x^2", 3, tol);
    for (double a : {0.25, 4.0}) {
        SolveRequest req;
        req.potential = Potential({{a * a, 6, false}, {3 * a, 2, false}});
        req.levels = 3;
        req.tol = tol;
        const auto s = solve(req);
        for (std::size_t n = 0; n < 3; ++n) {
            const double expect = std::sqrt(a) * one.energy(n);
            CHECK(std::fabs(s.energy(n) - expect) < 5 * tol * std::max(1.0, expect));
        }
    }
}

TEST_CASE("convergence failure is reported") {
    SolveRequest req;
    req.potential = parse_potential("x^2");
    req.levels = 3;
    req.tol = 1e-14;
    req.max_points = 4000;
    CHECK_THROWS_AS(solve(req), ConvergenceError);
    req.levels = 0;
    CHECK_THROWS_AS(solve(req), DomainError);
}

TEST_CASE("eigenstates") {
    const Grid g = Grid::symmetric(8.0, 1601);
    const Potential v = parse_potential("x^2");
    const auto states = eigenstates(v, g, 4);
    REQUIRE(states.size() == 4);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(states[n].norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(states[n].nodes() == n);
        CHECK(states[n].edge_ratio() < 1e-6);
        for (std::size_t m = 0; m < n; ++m) CHECK(std::fabs(matrix_element(states[n], Potential({}, 1.0), states[m])) < 1e-9);
    }
    // Gaussian ground state
    const auto& psi = states[0];
    const double c = std::pow(std::numbers::pi, -0.25);
    for (std::size_t i = 0; i < g.n; i += 100) {
        const double x = g.point(i + 1);
        if (std::fabs(x) > 2.0) continue;
        CHECK(psi.samples[i] == doctest::Approx(c * std::exp(-x * x / 2)).epsilon(1e-4));
    }
    CHECK(expectation(psi, parse_potential("x^2")) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(expectation(psi, parse_potential("x^4")) == doctest::Approx(0.75).epsilon(1e-5));
    CHECK(std::fabs(expectation(psi, parse_potential("x"))) < 1e-12);
}

TEST_CASE("zero mode of the bosonic sextic") {
    const Grid g = Grid::symmetric(4.0, 1601);
    const Potential v = parse_potential("x^6 - 3*x^2");
    const auto t = build_hamiltonian(v, g);
    const double e0 = lowest_eigenvalues(t, 1)[0];
    const EigenState psi = eigenstate(t, g, e0);
    const std::size_t mid = g.n / 2;
    const double scale = psi.samples[mid];
    for (std::size_t i = 0; i < g.n; i += 50) {
        const double x = g.point(i + 1);
        if (std::fabs(x) > 1.5) continue;
        CHECK(psi.samples[i] / scale == doctest::Approx(std::exp(-std::pow(x, 4) / 4)).epsilon(1e-4));
    }
    CHECK(psi.nodes() == 0);

    const Potential q = parse_potential("x^4 - 2*x");
    const auto tq = build_hamiltonian(q, Grid::symmetric(6.0, 801));
    CHECK(eigenstate(tq, Grid::symmetric(6.0, 801), lowest_eigenvalues(tq, 1)[0]).nodes() == 0);
}

TEST_CASE("perturbation coefficients about a = 0") {
    const Potential v0 = parse_potential("x^2 - 1");
    SUBCASE("sextic, b = 1") {
        const auto c = pt_coefficients(v0, parse_potential("2*x^4 - 3*x^2"), parse_potential("x^6"), 200);
        CHECK(std::fabs(c.e0) < 1e-9);
        CHECK(std::fabs(c.e1) < 1e-8);
        CHECK(std::fabs(c.e2) < 1e-4);
        CHECK(c.n_states == 200);
    }
    SUBCASE("quartic, b = 1") {
        const auto c = pt_coefficients(v0, parse_potential("2*x^3 - 2*x"), parse_potential("x^4"), 200);
        CHECK(std::fabs(c.e1) < 1e-8);
        CHECK(std::fabs(c.e2) < 1e-4);
    }
    SUBCASE("anharmonic oscillator textbook value") {
        // -d2 + x^2 + g x^4: E0 = 1 + (3/4) g - (21/16) g^2 + ...
        const auto c = pt_coefficients(parse_potential("x^2"), parse_potential("x^4"), Potential{}, 200, 1e-10);
        CHECK(c.e1 == doctest::Approx(0.75).epsilon(1e-8));
        CHECK(c.e2 == doctest::Approx(-21.0 / 16.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(pt_coefficients(v0, v0, v0, 0), DomainError);
}

}  // TEST_SUITE
