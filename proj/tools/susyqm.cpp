// susyqm: command-line front end.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "figures.hpp"
#include "susyqm/bohr_sommerfeld.hpp"
#include "susyqm/errors.hpp"
#include "susyqm/expression.hpp"
#include "susyqm/format.hpp"
#include "susyqm/schrodinger.hpp"
#include "susyqm/sweep.hpp"

#ifndef SUSYQM_VERSION
#define SUSYQM_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace susyqm;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kNumerical = 3 };

// Everything a subcommand produces: CSV text for stdout/--out and the JSON
// report body.
struct Output {
    std::string csv;
    json inputs = json::object();
    json outputs = json::object();
    json diagnostics = json::object();
};

struct Common {
    bool json_stdout = false;
    std::string report_path;
    std::string out_path;
    bool timing = false;
};

class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) {
        bool first = true;
        for (const auto& h : header) {
            if (!first) text_ += ',';
            text_ += h;
            first = false;
        }
        text_ += '\n';
    }

    Csv& row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) text_ += ',';
            text_ += format_full(v);
            first = false;
        }
        text_ += '\n';
        return *this;
    }

    Csv& pair(const std::string& key, const std::string& value) {
        text_ += key + ',' + value + '\n';
        return *this;
    }

    Csv& pair(const std::string& key, double value) { return pair(key, format_full(value)); }

    const std::string& str() const { return text_; }

private:
    std::string text_;
};

json value_with_error(double value, double error) { return {{"value", value}, {"error", error}}; }

// JSON has no infinities; divergent quantities are spelled out.
json maybe_infinite(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json level_json(const Level& l) { return {{"N", l.index}, {"E", l.energy}, {"error", l.error}}; }

json sample_json(const Sample& s) {
    json j = {{"a", s.a}, {"E", s.ok() ? json(s.energy) : json(nullptr)}, {"error", s.ok() ? json(s.error) : json(nullptr)}};
    if (!s.ok()) j["failure"] = s.failure;
    return j;
}

json fit_json(const FitResult& f) {
    json j = {{"model", std::string(to_string(f.model))},
              {"beta", value_with_error(f.beta, f.beta_error)},
              {"p", value_with_error(f.p, f.p_error)}};
    if (f.model == FitModel::Instanton) {
        j["alpha"] = value_with_error(f.alpha, f.alpha_error);
        j["q"] = f.q;
        j["dropped"] = f.dropped;
        j["curvature"] = f.curvature;
        j["curvature_dominant"] = f.curvature_dominant;
    }
    j["residual_rms"] = f.residual_rms;
    j["window"] = {f.a_lo, f.a_hi};
    j["points"] = f.points;
    return j;
}

json gamma_entry_json(const GammaEntry& e) {
    return {{"N", e.n},
            {"E", value_with_error(e.energy, e.energy_error)},
            {"x_a", e.turning.x_a},
            {"x_b", e.turning.x_b},
            {"action", value_with_error(e.action.value, e.action.error)},
            {"gamma", value_with_error(e.gamma, e.error)}};
}

json one_sided_json(const OneSidedLimit& l) {
    json j = {{"side", l.side > 0 ? "+" : "-"},
              {"limit", value_with_error(l.limit, l.limit_error)},
              {"divergent", l.divergent}};
    if (l.divergent) {
        j["derivative"] = value_with_error(std::nan(""), 0.0);
        j["derivative"]["value"] = maybe_infinite(l.derivative);
        j["growth"] = l.growth;
    } else {
        j["derivative"] = value_with_error(l.derivative, l.derivative_error);
    }
    json samples = json::array();
    for (std::size_t k = 0; k < l.eps.size(); ++k)
        samples.push_back({{"a", l.side * l.eps[k]}, {"E", l.energies[k]}, {"error", l.errors[k]}});
    j["samples"] = samples;
    return j;
}

json probe_json(const InstantonProbe& p) {
    return {{"side", p.side > 0 ? "+" : "-"}, {"reference", p.reference}, {"points_used", p.used},
            {"q", p.q},          {"correlation", p.correlation}, {"slope", p.slope},
            {"instanton_like", p.instanton_like}};
}

std::string sector_name(Sector s) { return s == Sector::Bosonic ? "bosonic" : "fermionic"; }

Sector parse_sector(const std::string& s) {
    if (s == "B" || s == "b" || s == "bosonic") return Sector::Bosonic;
    if (s == "F" || s == "f" || s == "fermionic") return Sector::Fermionic;
    throw DomainError("sector must be B or F");
}

FamilySpec family_from(const std::string& name, double b, const std::string& sector, std::optional<double> box) {
    FamilySpec f = FamilySpec::named(name, b);
    f.sector = parse_sector(sector);
    if (box) f = f.with_box(*box);
    return f;
}

json family_json(const FamilySpec& f) {
    return {{"family", f.name},
            {"b", f.b},
            {"sector", sector_name(f.sector)},
            {"box", f.box ? json(*f.box) : json(nullptr)},
            {"superpotential", "a*(" + f.p.to_string() + ") + b*(" + (f.q.is_zero() ? "0" : f.q.to_string()) + ")"}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersymmetric quantum mechanics in one dimension: spectra, coupling sweeps, WKB corrections"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SUSYQM_VERSION);

    Common common;
    auto add_common = [&](CLI::App* sub, bool has_out = true) {
        sub->add_flag("--json", common.json_stdout, "Print the JSON run report instead of CSV");
        sub->add_option("--report", common.report_path, "Also write the JSON run report to this file");
        if (has_out) sub->add_option("--out", common.out_path, "Write CSV to this file instead of stdout");
        sub->add_flag("--timing", common.timing, "Include wall time in the report");
    };

    Output out;
    std::function<void()> action;

    // solve
    std::string potential_text;
    std::size_t levels = 1;
    double tol = 1e-10;
    std::optional<double> box;
    auto* solve_cmd = app.add_subcommand("solve", "Lowest eigenvalues of -d2/dx2 + V(x)");
    solve_cmd->add_option("--potential", potential_text, "V(x), e.g. \"x^6 - 3*x^2\"")->required();
    solve_cmd->add_option("--levels", levels, "Number of levels K")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--tol", tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--box", box, "Hard walls at -L, L");
    add_common(solve_cmd);
    solve_cmd->callback([&] {
        action = [&] {
            Potential v = parse_potential(potential_text);
            if (box) v = v.with_wall(*box);
            SolveRequest req;
            req.potential = v;
            req.levels = levels;
            req.tol = tol;
            const Spectrum s = solve(req);
            Csv csv{"N", "E", "err"};
            json lv = json::array();
            for (const auto& l : s.levels) {
                csv.row({static_cast<double>(l.index), l.energy, l.error});
                lv.push_back(level_json(l));
            }
            out.csv = csv.str();
            out.inputs = {{"potential", v.to_string()}, {"levels", levels}, {"tol", tol}, {"box", box ? json(*box) : json(nullptr)}};
            out.outputs = {{"levels", lv}};
            out.diagnostics = {{"box", s.box}, {"finest_points", s.finest.n}, {"grids", s.grids}, {"max_error", s.max_error()}};
        };
    });

    // partner
    std::string w_text;
    auto* partner_cmd = app.add_subcommand("partner", "Partner potentials, SUSY class and zero mode of w(x)");
    partner_cmd->add_option("--superpotential", w_text, "w(x), e.g. \"x^3\"")->required();
    add_common(partner_cmd);
    partner_cmd->callback([&] {
        action = [&] {
            const Superpotential w = parse_superpotential(w_text);
            const PartnerPotentials pp = partner_potentials(w);
            const SusyClass cls = classify_susy(w);
            const Superpotential phi = zero_mode_exponent(w);
            std::string zero_mode = "none (normalizable in neither sector)";
            if (cls == SusyClass::ExactBosonic) zero_mode = "exp(-(" + phi.to_string() + "))";
            if (cls == SusyClass::ExactFermionic) zero_mode = "exp(+(" + phi.to_string() + "))";
            Csv csv{"key", "value"};
            csv.pair("V_B", pp.bosonic.to_string()).pair("V_F", pp.fermionic.to_string());
            csv.pair("susy", std::string(to_string(cls))).pair("zero_mode", zero_mode);
            csv.pair("duality", duality_holds(w) ? "holds" : "violated");
            out.csv = csv.str();
            out.inputs = {{"superpotential", w.to_string()}};
            out.outputs = {{"V_B", pp.bosonic.to_string()},
                           {"V_F", pp.fermionic.to_string()},
                           {"susy", std::string(to_string(cls))},
                           {"zero_mode", zero_mode},
                           {"duality_holds", duality_holds(w)}};
        };
    });

    // sweep
    std::string family_name;
    double b = 0.0;
    std::size_t level = 0;
    double a_min = -1.0, a_max = 1.0;
    std::size_t points = 41;
    std::string sector = "B";
    auto add_family = [&](CLI::App* sub) {
        sub->add_option("--family", family_name, "sextic, quartic or harmonic")
            ->required()
            ->check(CLI::IsMember({"sextic", "quartic", "harmonic"}));
        sub->add_option("--b", b, "Fixed coupling b of the q(x) term");
        sub->add_option("--sector", sector, "B (bosonic, default) or F");
        sub->add_option("--box", box, "Hard walls at -L, L");
    };
    auto* sweep_cmd = app.add_subcommand("sweep", "Level N of a family across couplings a");
    add_family(sweep_cmd);
    sweep_cmd->add_option("--level", level, "Level N");
    sweep_cmd->add_option("--a-min", a_min, "Smallest coupling");
    sweep_cmd->add_option("--a-max", a_max, "Largest coupling");
    sweep_cmd->add_option("--points", points, "Number of evenly spaced couplings (a = 0 is skipped)");
    sweep_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    add_common(sweep_cmd);
    sweep_cmd->callback([&] {
        action = [&] {
            const FamilySpec f = family_from(family_name, b, sector, box);
            const auto grid = coupling_grid(a_min, a_max, points);
            const SweepResult r = sweep(f, level, grid, SweepOptions{tol, 0});
            Csv csv{"a", "E", "err"};
            json samples = json::array();
            std::size_t failed = 0;
            for (const auto& s : r.samples) {
                csv.row({s.a, s.energy, s.error});
                samples.push_back(sample_json(s));
                if (!s.ok()) ++failed;
            }
            out.csv = csv.str();
            out.inputs = family_json(f);
            out.inputs["level"] = level;
            out.inputs["a_min"] = a_min;
            out.inputs["a_max"] = a_max;
            out.inputs["points"] = points;
            out.inputs["tol"] = tol;
            out.outputs = {{"samples", samples}};
            out.diagnostics = {{"failed_samples", failed}, {"threads", worker_threads()}};
            if (failed) {
                for (const auto& s : r.samples)
                    if (!s.ok()) std::cerr << "warning: a = " << format_shortest(s.a) << ": " << s.failure << '\n';
            }
        };
    });

    // classify
    ClassifyOptions copt;
    auto* classify_cmd = app.add_subcommand("classify", "Transition type of E_N(a) at a = 0");
    add_family(classify_cmd);
    classify_cmd->add_option("--level", level, "Level N");
    classify_cmd->add_option("--eps0", copt.limits.eps0, "Largest |a| of the limit sequence");
    classify_cmd->add_option("--halvings", copt.limits.halvings, "Number of halvings of eps0");
    classify_cmd->add_option("--tol", copt.limits.tol, "Solver tolerance")->check(CLI::PositiveNumber);
    classify_cmd->add_option("--tol-jump", copt.tol_jump, "Energy jump threshold");
    classify_cmd->add_option("--tol-deriv", copt.tol_deriv, "Slope mismatch threshold");
    classify_cmd->add_option("--correlation", copt.correlation, "Instanton correlation threshold");
    add_common(classify_cmd);
    classify_cmd->callback([&] {
        action = [&] {
            const FamilySpec f = family_from(family_name, b, sector, box);
            const TransitionClass c = classify(f, level, copt);
            const ZeroLimits& z = c.limits;
            Csv csv{"key", "value"};
            csv.pair("class", std::string(to_string(c.kind)));
            csv.pair("E_minus", z.minus.limit).pair("E_minus_err", z.minus.limit_error);
            csv.pair("E_plus", z.plus.limit).pair("E_plus_err", z.plus.limit_error);
            if (z.at_zero) csv.pair("E_at_zero", z.at_zero->energy).pair("E_at_zero_err", z.at_zero->error);
            for (const OneSidedLimit* l : {&z.minus, &z.plus}) {
                const std::string tag = l->side > 0 ? "D_plus" : "D_minus";
                if (l->divergent) {
                    csv.pair(tag, "divergent").pair(tag + "_growth", l->growth);
                } else {
                    csv.pair(tag, l->derivative).pair(tag + "_err", l->derivative_error);
                }
            }
            csv.pair("jump", c.jump).pair("derivative_gap", c.derivative_gap);
            for (const auto* p : {&c.minus_probe, &c.plus_probe}) {
                if (!*p || (*p)->used == 0) continue;
                const std::string tag = (*p)->side > 0 ? "probe_plus" : "probe_minus";
                csv.pair(tag + "_correlation", (*p)->correlation).pair(tag + "_q", (*p)->q).pair(tag + "_slope", (*p)->slope);
            }
            out.csv = csv.str();
            out.inputs = family_json(f);
            out.inputs["level"] = level;
            out.inputs["eps0"] = copt.limits.eps0;
            out.inputs["halvings"] = copt.limits.halvings;
            out.inputs["tol"] = copt.limits.tol;
            out.inputs["tol_jump"] = copt.tol_jump;
            out.inputs["tol_deriv"] = copt.tol_deriv;
            out.inputs["correlation_threshold"] = copt.correlation;
            json evidence = {{"minus", one_sided_json(z.minus)},
                             {"plus", one_sided_json(z.plus)},
                             {"at_zero", z.at_zero ? level_json(*z.at_zero) : json(nullptr)},
                             {"jump", value_with_error(c.jump, c.jump_error)},
                             {"derivative_gap", value_with_error(0.0, c.derivative_gap_error)}};
            evidence["derivative_gap"]["value"] = maybe_infinite(c.derivative_gap);
            if (c.minus_probe) evidence["probe_minus"] = probe_json(*c.minus_probe);
            if (c.plus_probe) evidence["probe_plus"] = probe_json(*c.plus_probe);
            out.outputs = {{"classification", std::string(to_string(c.kind))}, {"evidence", evidence}};
        };
    });

    // fit
    std::string model = "power";
    std::vector<double> window;
    std::optional<double> fixed_p;
    std::size_t fit_points = 8;
    auto* fit_cmd = app.add_subcommand("fit", "Power-law or instanton fit of E_N(a) near a = 0");
    add_family(fit_cmd);
    fit_cmd->add_option("--level", level, "Level N");
    fit_cmd->add_option("--model", model, "power or instanton")->check(CLI::IsMember({"power", "instanton"}));
    fit_cmd->add_option("--window", window, "Coupling window: A_LO A_HI (one side of 0)")->expected(2);
    fit_cmd->add_option("--points", fit_points, "Geometrically spaced samples in the window");
    fit_cmd->add_option("--p", fixed_p, "Fix the power-law exponent");
    fit_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    add_common(fit_cmd);
    fit_cmd->callback([&] {
        action = [&] {
            const FamilySpec f = family_from(family_name, b, sector, box);
            std::pair<double, double> win =
                model == "power" ? default_power_window(f) : default_instanton_window(f);
            if (window.size() == 2) win = {std::min(window[0], window[1]), std::max(window[0], window[1])};
            const auto grid = geometric_grid(win.first, win.second, fit_points);
            const SweepResult r = sweep(f, level, grid, SweepOptions{tol, 0});
            const FitResult fr = model == "power" ? fit_power_law(r.samples, fixed_p)
                                                  : fit_instanton(r.samples, f.b, f.prefactor_power, f.instanton_power);
            Csv csv{"key", "value"};
            csv.pair("model", model).pair("beta", fr.beta).pair("beta_err", fr.beta_error);
            csv.pair("p", fr.p).pair("p_err", fr.p_error);
            if (fr.model == FitModel::Instanton) {
                csv.pair("alpha", fr.alpha).pair("alpha_err", fr.alpha_error).pair("q", fr.q);
                csv.pair("dropped", std::to_string(fr.dropped));
                csv.pair("curvature", fr.curvature).pair("curvature_dominant", fr.curvature_dominant ? "yes" : "no");
            }
            csv.pair("residual_rms", fr.residual_rms).pair("a_lo", fr.a_lo).pair("a_hi", fr.a_hi);
            out.csv = csv.str();
            out.inputs = family_json(f);
            out.inputs["level"] = level;
            out.inputs["model"] = model;
            out.inputs["window"] = {win.first, win.second};
            out.inputs["points"] = fit_points;
            out.inputs["fixed_p"] = fixed_p ? json(*fixed_p) : json(nullptr);
            json samples = json::array();
            for (const auto& s : r.samples) samples.push_back(sample_json(s));
            out.outputs = {{"fit", fit_json(fr)}, {"samples", samples}};
        };
    });

    // bs-gamma
    std::size_t n_max = 10;
    auto* gamma_cmd = app.add_subcommand("bs-gamma", "WKB correction gamma(N) at the exact levels of V");
    gamma_cmd->add_option("--potential", potential_text, "V(x)")->required();
    gamma_cmd->add_option("--n-max", n_max, "Highest level");
    gamma_cmd->add_option("--box", box, "Hard walls at -L, L");
    gamma_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    add_common(gamma_cmd);
    gamma_cmd->callback([&] {
        action = [&] {
            Potential v = parse_potential(potential_text);
            if (box) v = v.with_wall(*box);
            const GammaTable t = gamma_table(v, n_max, tol);
            Csv csv{"N", "E", "x_a", "x_b", "action", "gamma", "err"};
            json entries = json::array();
            for (const auto& e : t.entries) {
                csv.row({static_cast<double>(e.n), e.energy, e.turning.x_a, e.turning.x_b, e.action.value, e.gamma, e.error});
                entries.push_back(gamma_entry_json(e));
            }
            out.csv = csv.str();
            out.inputs = {{"potential", v.to_string()}, {"n_max", n_max}, {"tol", tol}};
            out.outputs = {{"gamma", entries}};
        };
    });

    // susy-gamma
    double a_coupling = 1.0;
    auto* susy_cmd = app.add_subcommand("susy-gamma", "gamma_B(N), gamma_F(N) for w = a x^3");
    susy_cmd->add_option("--a", a_coupling, "Coupling a > 0")->check(CLI::PositiveNumber);
    susy_cmd->add_option("--n-max", n_max, "Highest fermionic level");
    susy_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    add_common(susy_cmd);
    susy_cmd->callback([&] {
        action = [&] {
            const SusyGammaPair p = susy_gamma_pair(a_coupling, n_max, tol);
            Csv csv{"N", "E_B", "gamma_B", "err_B", "E_F", "gamma_F", "err_F"};
            json bos = json::array(), fer = json::array(), pairs = json::array();
            for (std::size_t n = 0; n <= n_max; ++n) {
                const auto& eb = p.bosonic.entries[n];
                const auto& ef = p.fermionic.entries[n];
                csv.row({static_cast<double>(n), eb.energy, eb.gamma, eb.error, ef.energy, ef.gamma, ef.error});
            }
            for (const auto& e : p.bosonic.entries) bos.push_back(gamma_entry_json(e));
            for (const auto& e : p.fermionic.entries) fer.push_back(gamma_entry_json(e));
            for (const auto& pr : p.pairs) {
                pairs.push_back({{"N", pr.n},
                                 {"E_B_next", pr.bosonic_energy},
                                 {"E_F", pr.fermionic_energy},
                                 {"gamma_B_next", pr.bosonic_gamma},
                                 {"gamma_F", pr.fermionic_gamma},
                                 {"error", pr.error_budget}});
            }
            out.csv = csv.str();
            out.inputs = {{"a", a_coupling}, {"n_max", n_max}, {"tol", tol}};
            out.outputs = {{"bosonic", {{"potential", p.bosonic.potential}, {"gamma", bos}}},
                           {"fermionic", {{"potential", p.fermionic.potential}, {"gamma", fer}}},
                           {"pairs", pairs}};
        };
    });

    // degeneracy
    double deg_tol = 1e-6;
    std::size_t deg_levels = 5;
    auto* deg_cmd = app.add_subcommand("degeneracy", "SUSY level pairing of the partner spectra");
    deg_cmd->add_option("--superpotential", w_text, "w(x)")->required();
    deg_cmd->add_option("--levels", deg_levels, "Number of pairs K")->check(CLI::PositiveNumber);
    deg_cmd->add_option("--tol", deg_tol, "Allowed mismatch")->check(CLI::PositiveNumber);
    add_common(deg_cmd);
    deg_cmd->callback([&] {
        action = [&] {
            const Superpotential w = parse_superpotential(w_text);
            const DegeneracyReport r = check_degeneracy(w, deg_levels, deg_tol);
            Csv csv{"N", "E_upper", "E_lower", "diff"};
            json pairs = json::array();
            for (const auto& p : r.pairs) {
                csv.row({static_cast<double>(p.n), p.upper, p.lower, p.difference});
                pairs.push_back({{"N", p.n}, {"E_upper", p.upper}, {"E_lower", p.lower}, {"difference", p.difference}});
            }
            out.csv = csv.str();
            out.inputs = {{"superpotential", w.to_string()}, {"levels", deg_levels}, {"tol", deg_tol}};
            out.outputs = {{"susy", std::string(to_string(r.susy))},
                           {"pairs", pairs},
                           {"zero_energy", r.zero_energy ? json(*r.zero_energy) : json(nullptr)},
                           {"max_difference", r.max_difference},
                           {"ok", r.ok()},
                           {"violations", r.violations}};
            for (const auto& v : r.violations) std::cerr << "violation: " << v << '\n';
        };
    });

    // pt-coeff
    std::size_t n_states = 200;
    auto* pt_cmd = app.add_subcommand("pt-coeff", "Perturbative coefficients of E_0(a) about a = 0");
    add_family(pt_cmd);
    pt_cmd->add_option("--n-states", n_states, "States kept in the second-order sum")->check(CLI::PositiveNumber);
    pt_cmd->add_option("--tol", tol, "Solver tolerance")->check(CLI::PositiveNumber);
    add_common(pt_cmd);
    pt_cmd->callback([&] {
        action = [&] {
            const FamilySpec f = family_from(family_name, b, sector, box);
            const PtCoefficients c = family_pt_coefficients(f, n_states, tol);
            Csv csv{"order", "value", "err"};
            csv.row({0, c.e0, c.err0}).row({1, c.e1, c.err1}).row({2, c.e2, c.err2});
            out.csv = csv.str();
            out.inputs = family_json(f);
            out.inputs["n_states"] = n_states;
            out.inputs["tol"] = tol;
            out.outputs = {{"e0", value_with_error(c.e0, c.err0)},
                           {"e1", value_with_error(c.e1, c.err1)},
                           {"e2", value_with_error(c.e2, c.err2)}};
            out.diagnostics = {{"grids", c.grids}};
        };
    });

    // figure
    std::string figure_name;
    std::string gnuplot_path;
    bool list_figures = false;
    std::size_t figure_points = 0;
    auto* fig_cmd = app.add_subcommand("figure", "Write the data file of a figure preset");
    fig_cmd->add_option("name", figure_name, "Preset name (see --list)");
    fig_cmd->add_flag("--list", list_figures, "List the presets");
    fig_cmd->add_option("--points", figure_points, "Override the number of couplings");
    fig_cmd->add_option("--gnuplot", gnuplot_path, "Also write a gnuplot script");
    add_common(fig_cmd);
    fig_cmd->callback([&] {
        action = [&] {
            if (list_figures) {
                Csv csv{"name", "description"};
                json names = json::array();
                for (const auto& p : cli::figure_presets()) {
                    csv.pair(p.name, "\"" + p.description + "\"");
                    names.push_back({{"name", p.name}, {"description", p.description}});
                }
                out.csv = csv.str();
                out.outputs = {{"presets", names}};
                return;
            }
            if (figure_name.empty()) throw DomainError("figure needs a preset name (or --list)");
            if (common.out_path.empty()) throw DomainError("figure needs --out FILE");
            const cli::FigureData fig = cli::make_figure(figure_name, figure_points);
            std::ofstream dat(common.out_path);
            if (!dat) throw DomainError("cannot write " + common.out_path);
            dat << cli::to_dat(fig);
            if (!gnuplot_path.empty()) {
                std::ofstream gp(gnuplot_path);
                if (!gp) throw DomainError("cannot write " + gnuplot_path);
                gp << cli::to_gnuplot(fig, common.out_path);
            }
            out.inputs = {{"name", figure_name}, {"points", figure_points}};
            out.outputs = {{"file", common.out_path}, {"columns", fig.columns}, {"rows", fig.rows.size()},
                           {"details", fig.details}};
            common.out_path.clear();  // the .dat replaces CSV output
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    std::string command = app.get_subcommands().front()->get_name();
    try {
        action();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report;
    report["command"] = command;
    report["inputs"] = out.inputs;
    report["outputs"] = out.outputs;
    report["diagnostics"] = out.diagnostics;
    report["versions"] = {{"susyqm", SUSYQM_VERSION},
                          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                          {"cli11", CLI11_VERSION},
                          {"compiler", __VERSION__}};
    if (common.timing) report["wall_time_s"] = wall;
    const std::string report_text = report.dump(2) + "\n";

    if (!common.report_path.empty()) {
        std::ofstream f(common.report_path);
        if (!f) {
            std::cerr << "error: cannot write " << common.report_path << '\n';
            return kUsage;
        }
        f << report_text;
    }
    if (!common.out_path.empty()) {
        std::ofstream f(common.out_path);
        if (!f) {
            std::cerr << "error: cannot write " << common.out_path << '\n';
            return kUsage;
        }
        f << out.csv;
    }
    if (common.json_stdout) {
        std::cout << report_text;
    } else if (common.out_path.empty()) {
        std::cout << out.csv;
    }
    return kOk;
}
