#include "figures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyqm/bohr_sommerfeld.hpp"
#include "susyqm/errors.hpp"
#include "susyqm/format.hpp"
#include "susyqm/schrodinger.hpp"
#include "susyqm/sweep.hpp"

namespace susyqm::cli {

namespace {

using json = nlohmann::ordered_json;

const FigurePreset* find_preset(std::string_view name) {
    for (const auto& p : figure_presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

// E_0 of -d^2/dx^2 + w^2 x^2 (optionally in a box) against w.
FigureData oscillator_frequency(const std::string& name, std::size_t points, std::optional<double> box) {
    FigureData fig;
    fig.name = name;
    fig.columns = {"omega", "E", "err"};
    std::vector<double> omegas;
    for (std::size_t i = 0; i < points; ++i) omegas.push_back(-2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    double worst = 0.0;
    for (double w : omegas) {
        if (std::fabs(w) < 1e-12) {
            if (!box) continue;  // free particle
            w = 0.0;
        }
        std::vector<PolyTerm> terms;
        if (w != 0.0) terms.push_back({w * w, 2.0, false});
        Potential v(terms, 0.0, box);
        SolveRequest req;
        req.potential = v;
        const Level l = solve(req).levels.front();
        fig.rows.push_back({w, l.energy, l.error});
        worst = std::max(worst, l.error);
    }
    fig.details = {{"potential", "omega^2 x^2"}, {"box", box ? json(*box) : json(nullptr)}, {"max_error", worst}};
    return fig;
}

FigureData family_energy(const std::string& name, const FamilySpec& family, std::size_t points) {
    FigureData fig;
    fig.name = name;
    fig.columns = {"a", "E", "err"};
    const auto grid = coupling_grid(-1.0, 1.0, points);
    const SweepResult r = sweep(family, 0, grid);
    std::vector<std::vector<double>> rows;
    std::size_t failed = 0;
    double worst = 0.0;
    for (const auto& s : r.samples) {
        rows.push_back({s.a, s.energy, s.error});
        if (!s.ok()) {
            ++failed;
        } else {
            worst = std::max(worst, s.error);
        }
    }
    const auto zero = energy_at_zero(family, 0);
    if (zero) rows.push_back({0.0, zero->energy, zero->error});
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x[0] < y[0]; });
    fig.rows = std::move(rows);
    fig.details = {{"family", family.name},
                   {"b", family.b},
                   {"sector", std::string(to_string(family.sector))},
                   {"level", 0},
                   {"includes_a_zero", zero.has_value()},
                   {"failed_samples", failed},
                   {"max_error", worst}};
    return fig;
}

FigureData sextic_potentials(const std::string& name, double sign) {
    FigureData fig;
    fig.name = name;
    const std::vector<double> couplings{sign * 0.25, sign * 0.5, sign * 1.0};
    fig.columns = {"x"};
    std::vector<Potential> vs;
    json levels = json::array();
    for (double a : couplings) {
        fig.columns.push_back("V(a=" + format_shortest(a) + ")");
        const FamilySpec f = FamilySpec::sextic(0.0);
        vs.push_back(f.potential(a));
        SolveRequest req;
        req.potential = vs.back();
        const Level l = solve(req).levels.front();
        levels.push_back({{"a", a}, {"E0", l.energy}, {"err", l.error}});
    }
    for (int i = 0; i <= 400; ++i) {
        const double x = -2.0 + 0.01 * i;
        std::vector<double> row{x};
        for (const auto& v : vs) row.push_back(v(x));
        fig.rows.push_back(std::move(row));
    }
    fig.details = {{"potential", "a^2 x^6 - 3 a x^2"}, {"ground_states", levels}};
    return fig;
}

FigureData gamma_oscillators(const std::string& name) {
    FigureData fig;
    fig.name = name;
    fig.columns = {"N", "gamma_m4", "err_m4", "gamma_m6", "err_m6"};
    const std::size_t n_max = 40;
    const double c4[] = {0, 0, 0, 0, 1};
    const double c6[] = {0, 0, 0, 0, 0, 0, 1};
    const GammaTable t4 = gamma_table(Potential::polynomial(c4), n_max);
    const GammaTable t6 = gamma_table(Potential::polynomial(c6), n_max);
    for (std::size_t n = 0; n <= n_max; ++n) {
        fig.rows.push_back({static_cast<double>(n), t4.entries[n].gamma, t4.entries[n].error, t6.entries[n].gamma,
                            t6.entries[n].error});
    }
    fig.details = {{"potentials", {"x^4", "x^6"}}, {"n_max", n_max}};
    return fig;
}

FigureData gamma_partners(const std::string& name) {
    FigureData fig;
    fig.name = name;
    fig.columns = {"N", "gamma_B", "err_B", "gamma_F", "err_F"};
    const std::size_t n_max = 20;
    const SusyGammaPair pair = susy_gamma_pair(1.0, n_max);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto& b = pair.bosonic.entries[n];
        const auto& f = pair.fermionic.entries[n];
        fig.rows.push_back({static_cast<double>(n), b.gamma, b.error, f.gamma, f.error});
    }
    fig.details = {{"bosonic", pair.bosonic.potential}, {"fermionic", pair.fermionic.potential}, {"n_max", n_max}};
    return fig;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets{
        {"ho-frequency", "ground energy of -d2/dx2 + omega^2 x^2 against omega", "omega", "E_0"},
        {"ho-box-frequency", "the same oscillator between hard walls at x = -2, 2", "omega", "E_0"},
        {"harmonic-susy", "bosonic ground energy for w = omega x", "omega", "E_0"},
        {"sextic-potentials-pos", "V_B(x; a) = a^2 x^6 - 3 a x^2 for a = 0.25, 0.5, 1", "x", "V_B"},
        {"sextic-potentials-neg", "V_B(x; a) for a = -0.25, -0.5, -1", "x", "V_B"},
        {"sextic-b-pos", "bosonic ground energy for w = a x^3 + x", "a", "E_0"},
        {"sextic-b-zero", "bosonic ground energy for w = a x^3", "a", "E_0"},
        {"sextic-b-neg", "bosonic ground energy for w = a x^3 - x", "a", "E_0"},
        {"quartic-b-neg", "bosonic ground energy for w = a x^2 - x", "a", "E_0"},
        {"quartic-b-zero", "bosonic ground energy for w = a x^2", "a", "E_0"},
        {"quartic-b-pos", "bosonic ground energy for w = a x^2 + x", "a", "E_0"},
        {"gamma-quartic-sextic", "WKB correction gamma(N) of x^4 and x^6, N = 0..40", "N", "gamma"},
        {"gamma-susy", "gamma_B(N), gamma_F(N) of x^6 -+ 3 x^2, N = 0..20", "N", "gamma"},
    };
    return presets;
}

FigureData make_figure(std::string_view name, std::size_t points) {
    const FigurePreset* preset = find_preset(name);
    if (!preset) throw DomainError("unknown figure '" + std::string(name) + "' (see figure --list)");
    const std::string n(name);
    const std::size_t pts = points ? points : 81;
    if (pts < 3) throw DomainError("a figure needs at least three points");
    FigureData fig;
    if (n == "ho-frequency") fig = oscillator_frequency(n, pts, std::nullopt);
    else if (n == "ho-box-frequency") fig = oscillator_frequency(n, pts, 2.0);
    else if (n == "harmonic-susy") fig = family_energy(n, FamilySpec::harmonic(), pts);
    else if (n == "sextic-potentials-pos") fig = sextic_potentials(n, 1.0);
    else if (n == "sextic-potentials-neg") fig = sextic_potentials(n, -1.0);
    else if (n == "sextic-b-pos") fig = family_energy(n, FamilySpec::sextic(1.0), pts);
    else if (n == "sextic-b-zero") fig = family_energy(n, FamilySpec::sextic(0.0), pts);
    else if (n == "sextic-b-neg") fig = family_energy(n, FamilySpec::sextic(-1.0), pts);
    else if (n == "quartic-b-neg") fig = family_energy(n, FamilySpec::quartic(-1.0), pts);
    else if (n == "quartic-b-zero") fig = family_energy(n, FamilySpec::quartic(0.0), pts);
    else if (n == "quartic-b-pos") fig = family_energy(n, FamilySpec::quartic(1.0), pts);
    else if (n == "gamma-quartic-sextic") fig = gamma_oscillators(n);
    else fig = gamma_partners(n);
    return fig;
}

std::string to_dat(const FigureData& fig) {
    std::ostringstream out;
    const FigurePreset* preset = find_preset(fig.name);
    out << "# " << fig.name;
    if (preset) out << ": " << preset->description;
    out << "\n# columns:";
    for (const auto& c : fig.columns) out << ' ' << c;
    out << '\n';
    for (const auto& row : fig.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << format_full(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string to_gnuplot(const FigureData& fig, const std::string& dat_path) {
    const FigurePreset* preset = find_preset(fig.name);
    std::ostringstream out;
    out << "set title \"" << fig.name << "\"\n";
    if (preset) out << "set xlabel \"" << preset->x_label << "\"\nset ylabel \"" << preset->y_label << "\"\n";
    out << "set key top left\nplot ";
    // columns of value/error pairs share one curve each
    bool first = true;
    for (std::size_t c = 1; c < fig.columns.size(); ++c) {
        const std::string& col = fig.columns[c];
        if (col.rfind("err", 0) == 0) continue;
        if (!first) out << ", \\\n     ";
        first = false;
        out << "\"" << dat_path << "\" using 1:" << c + 1 << " with linespoints title \"" << col << "\"";
    }
    out << "\n";
    return out.str();
}

}  // namespace susyqm::cli
