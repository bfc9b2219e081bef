// Command-line front end: trajectories, error sweeps, self-verification and
// the RWA validity criterion, all emitting deterministic CSV (and optional
// SVG rendered natively from the CSV just written, so re-plotting a file
// always reproduces the same image bytes).
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
// failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rabi/closed_form.hpp"
#include "rabi/core.hpp"
#include "rabi/csv.hpp"
#include "rabi/integrator.hpp"
#include "rabi/ms_matrices.hpp"
#include "rabi/repair.hpp"
#include "rabi/sweep.hpp"
#include "rabi/svg_plot.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// A flag/config problem detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config support for CLI11: top-level keys are subcommand names mapping
// to {option: value} objects; scalars at the top level configure global
// options.  Command-line values always win.
class ConfigJson : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable()) continue;
            if (opt->count() > 0 || default_also) {
                j[opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames()[0]] =
                    opt->count() > 0 ? opt->results().at(0) : opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::FileError("config must be a JSON object");
        std::vector<CLI::ConfigItem> out;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [name, v] : value.items()) {
                    CLI::ConfigItem item;
                    item.parents = {key};
                    item.name = name;
                    item.inputs = to_inputs(v);
                    out.push_back(std::move(item));
                }
            } else {
                CLI::ConfigItem item;
                item.name = key;
                item.inputs = to_inputs(value);
                out.push_back(std::move(item));
            }
        }
        return out;
    }

  private:
    static std::vector<std::string> to_inputs(const nlohmann::json& v) {
        if (v.is_array()) {
            std::vector<std::string> r;
            for (const auto& e : v) r.push_back(scalar(e));
            return r;
        }
        return {scalar(v)};
    }
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f.good()) throw std::runtime_error("failed to write " + path.string());
}

unsigned sweep_thread_cap() {
    const char* env = std::getenv("RABI_THREADS");
    if (env == nullptr || *env == '\0') return 0;  // auto
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0 || v > 4096) {
        throw UsageError("RABI_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<unsigned>(v);
}

// ---------------------------------------------------------------- trajectory

struct TrajectoryArgs {
    double eps = 0.0;
    double theta = -1.0, phi = -1.0;
    std::string preset;
    int oscillations = 1;
    std::vector<std::string> solutions{"exact", "rwa", "ms2", "ms2n"};
    double dtau = 1e-3;
    std::string out_dir;
    bool svg = false;
};

// Sample tau values exactly as the integrator's mesh + stride sampling does,
// so closed-form CSVs line up row for row with the integrated one.
std::vector<double> mesh_taus(double dtau, double tau_max, std::size_t stride) {
    auto n_full = static_cast<std::size_t>(tau_max / dtau);
    if (n_full > 0 && static_cast<double>(n_full) * dtau >= tau_max - 1e-12 * std::max(1.0, tau_max)) {
        --n_full;
    }
    const bool partial = tau_max - static_cast<double>(n_full) * dtau > 0.0;
    std::vector<double> taus;
    for (std::size_t k = 0; k <= n_full; k += stride) taus.push_back(static_cast<double>(k) * dtau);
    const double last = partial ? tau_max : static_cast<double>(n_full) * dtau;
    if (taus.back() != last) taus.push_back(last);
    return taus;
}

std::size_t pick_stride(double dtau, double tau_max, std::size_t max_rows) {
    std::size_t stride = 1;
    while (mesh_taus(dtau, tau_max, stride).size() > max_rows) ++stride;
    return stride;
}

void render_trajectory_svg(const std::filesystem::path& dir, const std::vector<std::string>& labels,
                           double eps) {
    struct Style {
        const char* color;
        const char* dash;
    };
    const std::map<std::string, Style> styles{{"exact", {"#d62728", ""}},
                                              {"ms2", {"#000000", "8 4 2 4"}},
                                              {"ms2n", {"#1f77b4", "7 4"}},
                                              {"rwa", {"#cc00cc", "2 4"}}};
    std::vector<rabi::SvgPanel> panels(3);
    const char* names[3] = {"alpha10", "alpha20", "alpha30"};
    for (int c = 0; c < 3; ++c) {
        panels[c].x_label = "tau";
        panels[c].y_label = names[c];
    }
    for (const std::string& label : labels) {
        std::ifstream f(dir / ("trajectory_" + label + ".csv"), std::ios::binary);
        const rabi::CsvTable t = rabi::read_csv(f);
        for (int c = 0; c < 3; ++c) {
            rabi::SvgSeries s;
            s.label = label;
            s.color = styles.at(label).color;
            s.dash = styles.at(label).dash;
            s.x = t.columns[0];
            s.y = t.columns[static_cast<std::size_t>(c) + 1];
            panels[static_cast<std::size_t>(c)].series.push_back(std::move(s));
        }
    }
    std::ostringstream os;
    rabi::write_svg_plot(os, "Bloch components, eps = " + rabi::fmt_g15(eps), panels);
    write_file(dir / "trajectory.svg", os.str());
}

int cmd_trajectory(const TrajectoryArgs& a, bool theta_given, bool phi_given) {
    if (!(a.eps > 0.0 && a.eps < 1.0)) {
        throw UsageError("--eps must lie in (0,1), got " + rabi::fmt_g15(a.eps));
    }
    if (a.oscillations < 1) throw UsageError("--oscillations must be >= 1");
    if (!(a.dtau > 0.0)) throw UsageError("--dtau must be positive");
    if (a.out_dir.empty()) throw UsageError("--out is required");
    if (a.solutions.empty()) throw UsageError("--solutions must name at least one of exact,rwa,ms2,ms2n");
    for (const std::string& s : a.solutions) {
        if (s != "exact" && s != "rwa" && s != "ms2" && s != "ms2n") {
            throw UsageError("unknown solution '" + s + "' (expected exact, rwa, ms2 or ms2n)");
        }
    }

    rabi::Vec3 r0;
    if (!a.preset.empty()) {
        if (theta_given || phi_given) throw UsageError("--preset conflicts with --theta/--phi");
        if (a.preset == "ground") {
            r0 = {0.0, 0.0, -1.0};
        } else if (a.preset == "superposition") {
            r0 = {1.0, 0.0, 0.0};
        } else {
            throw UsageError("unknown preset '" + a.preset + "' (expected ground or superposition)");
        }
    } else {
        if (!theta_given || !phi_given) throw UsageError("give either --preset or both --theta and --phi");
        try {
            r0 = rabi::bloch_from_angles({a.theta, a.phi});
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    const double tau_max = a.oscillations * 2.0 * kPi / a.eps;
    const std::size_t stride = pick_stride(a.dtau, tau_max, 20000);
    const std::vector<double> taus = mesh_taus(a.dtau, tau_max, stride);

    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);

    for (const std::string& label : a.solutions) {
        rabi::Trajectory t;
        if (label == "exact") {
            t = rabi::integrate(r0, a.eps, {a.dtau, tau_max, stride});
        } else if (label == "rwa") {
            t = rabi::sample_rwa(r0, a.eps, taus);
        } else if (label == "ms2") {
            t = rabi::sample_ms2(r0, a.eps, taus);
        } else {
            t = rabi::sample_ms2_normalized(r0, a.eps, taus);
        }
        std::ostringstream os;
        rabi::write_trajectory_csv(os, t);
        write_file(dir / ("trajectory_" + label + ".csv"), os.str());
    }

    if (a.svg) render_trajectory_svg(dir, a.solutions, a.eps);
    return 0;
}

// --------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string figure;
    double eps_min = 0.0, eps_max = 0.0;
    int oscillations = 0;
    std::string profile = "desk";
    std::string out_dir;
    bool svg = false;
};

void render_sweep_svg(const std::filesystem::path& dir) {
    std::ifstream f(dir / "error_curve_spline.csv", std::ios::binary);
    const rabi::CsvTable t = rabi::read_csv(f);

    rabi::SvgPanel panel;
    panel.x_label = "eps";
    panel.y_label = "max relative error";
    panel.hlines = {0.15, 0.10, 0.05, 0.01};
    const char* labels[3] = {"E_R", "E_RN", "E_R_RWA"};
    const char* colors[3] = {"#d62728", "#1f77b4", "#cc00cc"};
    const char* dashes[3] = {"", "7 4", "8 4 2 4"};
    for (int c = 0; c < 3; ++c) {
        rabi::SvgSeries s;
        s.label = labels[c];
        s.color = colors[c];
        s.dash = dashes[c];
        s.x = t.columns[0];
        s.y = t.columns[static_cast<std::size_t>(c) + 1];
        panel.series.push_back(std::move(s));
    }
    std::ostringstream os;
    rabi::write_svg_plot(os, "worst-case relative error over initial states", {panel}, 860, 420);
    write_file(dir / "error_curves.svg", os.str());
}

int cmd_sweep(const SweepArgs& a) {
    double eps_min = a.eps_min, eps_max = a.eps_max;
    int osc = a.oscillations;
    const bool explicit_range = a.eps_min > 0.0 || a.eps_max > 0.0 || a.oscillations > 0;
    if (!a.figure.empty()) {
        if (explicit_range) throw UsageError("--figure conflicts with --eps-min/--eps-max/--oscillations");
        if (a.figure == "1a") {
            eps_min = 0.05;
            eps_max = 0.25;
            osc = 1;
        } else if (a.figure == "1b") {
            eps_min = 0.02;
            eps_max = 0.125;
            osc = 10;
        } else {
            throw UsageError("unknown figure '" + a.figure + "' (expected 1a or 1b)");
        }
    } else if (!explicit_range) {
        throw UsageError("give either --figure or an explicit --eps-min/--eps-max/--oscillations range");
    }
    rabi::SweepProfile profile;
    if (a.profile == "desk") {
        profile = rabi::SweepProfile::desk;
    } else if (a.profile == "paper") {
        profile = rabi::SweepProfile::paper;
    } else {
        throw UsageError("unknown profile '" + a.profile + "' (expected desk or paper)");
    }
    if (a.out_dir.empty()) throw UsageError("--out is required");

    rabi::SweepConfig cfg;
    try {
        cfg = rabi::make_sweep_config(eps_min, eps_max, osc, profile);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const rabi::ErrorCurve curve = rabi::error_curve(cfg, sweep_thread_cap());

    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ostringstream os;
        rabi::write_error_curve_csv(os, curve);
        write_file(dir / "error_curve.csv", os.str());
    }
    if (curve.spline_r) {
        std::ostringstream os;
        rabi::write_error_curve_spline_csv(os, curve);
        write_file(dir / "error_curve_spline.csv", os.str());
        if (a.svg) render_sweep_svg(dir);
    } else if (a.svg) {
        throw std::runtime_error("sweep produced fewer than 4 knots; no spline curves to plot");
    }
    return 0;
}

// -------------------------------------------------------------------- verify

struct Check {
    std::string name;
    bool pass;
    double worst;
    double bound;
};

int cmd_verify(std::uint64_t seed, bool tamper) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    auto random_state = [&]() {
        const double z = uniform(-1.0, 1.0);
        const double ph = uniform(0.0, 2.0 * kPi);
        const double r = std::cbrt(uniform(0.0, 1.0));
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return rabi::density_from_bloch({r * s * std::cos(ph), r * s * std::sin(ph), r * z});
    };

    // A tampered run shrinks every tolerance to zero; everything must then
    // fail and the exit code must say so.
    const double scale = tamper ? 0.0 : 1.0;
    std::vector<Check> checks;

    {
        double worst = 0.0;
        for (double eps : {0.02, 0.1, 0.25}) {
            for (int i = 0; i < 3; ++i) {
                const rabi::DensityState d0 = random_state();
                for (int k = 0; k <= 60; ++k) {
                    const double tau = k * (2.0 * kPi / eps) / 60.0;
                    const auto x = rabi::x1_matrix_form(rabi::state_vector(d0), eps, tau);
                    const auto ref = rabi::ms2_density(d0, eps, tau);
                    worst = std::max(worst, std::abs(x.x1 - ref.rho12));
                    worst = std::max(worst, std::abs(x.x3 - rabi::complexd{ref.alpha30, 0.0}));
                }
            }
        }
        checks.push_back({"two-term matrix route matches closed form", worst <= 1e-10 * scale, worst, 1e-10});
    }
    {
        double worst = 0.0;
        for (double eps : {0.02, 0.1, 0.25}) {
            for (int i = 0; i < 3; ++i) {
                const rabi::DensityState d0 = random_state();
                for (int k = 0; k <= 60; ++k) {
                    const double tau = k * (2.0 * kPi / eps) / 60.0;
                    const auto x = rabi::rwa_matrix_form(rabi::state_vector(d0), eps, tau);
                    const auto ref = rabi::rwa_density(d0, eps, tau);
                    worst = std::max(worst, std::abs(x.x1 - ref.rho12));
                    worst = std::max(worst, std::abs(x.x3 - rabi::complexd{ref.alpha30, 0.0}));
                }
            }
        }
        checks.push_back({"one-term matrix route matches closed form", worst <= 1e-12 * scale, worst, 1e-12});
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const auto x0 = rabi::state_vector(random_state());
            const double t2 = uniform(-6.0, 6.0);
            worst = std::max(worst, rabi::secular_residual_O1(x0, t2));
            worst = std::max(worst, rabi::secular_residual_O2(x0, t2));
        }
        checks.push_back({"secularity residuals vanish to FD error", worst < 1e-8 * scale, worst, 1e-8});
    }
    {
        double worst_ratio = 0.0;
        for (double eps : {0.05, 0.1, 0.25}) {
            for (int i = 0; i < 200; ++i) {
                const rabi::DensityState d0 = random_state();
                for (int k = 0; k < 50; ++k) {
                    const double tau = uniform(0.0, 10.0 * 2.0 * kPi / eps);
                    const rabi::RwaDeviation dev = rabi::rwa_deviation(d0, eps, tau);
                    worst_ratio = std::max(worst_ratio, dev.d_rho12 / (2.0 * eps));
                    worst_ratio = std::max(worst_ratio, dev.d_alpha30 / (4.0 * eps));
                }
            }
        }
        checks.push_back({"one-term deviation bounds 2eps and 4eps hold", worst_ratio <= 1.0 * scale,
                          worst_ratio, 1.0});
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const rabi::DensityState d0 = random_state();
            const double eps = uniform(0.02, 0.3);
            const double tau = uniform(0.0, 150.0);
            const rabi::Vec3 r = rabi::ms2_bloch(rabi::bloch_from_density(d0), eps, tau);
            worst = std::max(worst, std::abs(rabi::ms_norm_sq(d0, eps, tau) - rabi::norm_sq(r)));
        }
        checks.push_back({"coherence growth law matches propagated state", worst <= 1e-10 * scale, worst,
                          1e-10});
    }
    {
        double worst = 0.0;
        for (double eps : {0.25, 0.05}) {
            rabi::integrate_stream({0.0, 0.0, -1.0}, eps, {1e-3, 2.0 * kPi / eps, 1},
                                   [&](double, const rabi::Vec3& r) {
                                       worst = std::max(worst, std::abs(rabi::norm(r) - 1.0));
                                   });
        }
        checks.push_back({"integrator conserves coherence length", worst <= 1e-9 * scale, worst, 1e-9});
    }
    {
        double worst = 0.0;
        const rabi::DensityState ground{rabi::complexd{0.0, 0.0}, -1.0};
        for (int k = 0; k <= 1000; ++k) {
            const double tau = k * 0.1;
            const auto p = rabi::excited_population_ground_start(0.25, tau);
            const double via = (1.0 + rabi::ms2_density(ground, 0.25, tau).alpha30) / 2.0;
            worst = std::max(worst, std::abs(p.raw - via));
        }
        checks.push_back({"population formula consistent with inversion", worst <= 1e-14 * scale, worst,
                          1e-14});
    }

    bool all = true;
    std::printf("self-verification (seed %llu)\n", static_cast<unsigned long long>(seed));
    for (const Check& c : checks) {
        std::printf("  [%s] %-46s worst %.3e  bound %.0e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.worst, c.bound);
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "VERIFICATION FAILED");
    return all ? 0 : 3;
}

// ----------------------------------------------------------------- criterion

std::string round_one_digit(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", v);
    return buf;
}

int cmd_criterion(double omega1, double omega0, double eps_in, bool have_freqs, bool have_eps) {
    if (have_freqs == have_eps) {
        throw UsageError("give either --omega1 and --omega0, or --eps");
    }
    rabi::ModelParams params;
    try {
        params = have_eps ? rabi::ModelParams::from_epsilon(eps_in)
                          : rabi::ModelParams::from_frequencies(omega1, omega0);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const double eps = params.epsilon;
    std::printf("epsilon = %s (~%s)\n", rabi::fmt_g15(eps).c_str(), round_one_digit(eps).c_str());
    std::printf("bound 2*eps = %s (~%s) on |rho12 - rho12_RWA|\n", rabi::fmt_g15(2.0 * eps).c_str(),
                round_one_digit(2.0 * eps).c_str());
    std::printf("bound 4*eps = %s (~%s) on |alpha30 - alpha30_RWA|\n", rabi::fmt_g15(4.0 * eps).c_str(),
                round_one_digit(4.0 * eps).c_str());
    std::printf("the one-term (RWA) density matrix elements stay within these bounds of the\n"
                "two-term solution for all time; small epsilon means the RWA is trustworthy.\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonant two-level dynamics: trajectories, error sweeps, checks"};
    app.require_subcommand(1);
    app.set_config("--config")->description("JSON config file mirroring the flags; command-line wins");
    app.config_formatter(std::make_shared<ConfigJson>());
    app.allow_config_extras(true);

    TrajectoryArgs ta;
    CLI::App* traj = app.add_subcommand("trajectory", "integrate and sample one initial state");
    traj->add_option("--eps", ta.eps, "coupling ratio in (0,1)")->required();
    CLI::Option* opt_theta = traj->add_option("--theta", ta.theta, "polar angle of the initial state");
    CLI::Option* opt_phi = traj->add_option("--phi", ta.phi, "azimuthal angle of the initial state");
    traj->add_option("--preset", ta.preset, "initial state preset: ground | superposition");
    traj->add_option("--oscillations", ta.oscillations, "slow oscillations to cover (default 1)");
    traj->add_option("--solutions", ta.solutions, "comma list of exact,rwa,ms2,ms2n")->delimiter(',');
    traj->add_option("--dtau", ta.dtau, "integration step (default 1e-3)");
    traj->add_option("--out", ta.out_dir, "output directory")->required();
    traj->add_flag("--svg", ta.svg, "also render trajectory.svg");

    SweepArgs sa;
    CLI::App* swp = app.add_subcommand("sweep", "worst-case error curves over a range of eps");
    swp->add_option("--figure", sa.figure, "preset range: 1a (1 osc) | 1b (10 osc)");
    swp->add_option("--eps-min", sa.eps_min, "lowest eps knot");
    swp->add_option("--eps-max", sa.eps_max, "highest eps knot");
    swp->add_option("--oscillations", sa.oscillations, "slow oscillations per trajectory");
    swp->add_option("--profile", sa.profile, "mesh profile: desk (default) | paper");
    swp->add_option("--out", sa.out_dir, "output directory")->required();
    swp->add_flag("--svg", sa.svg, "also render error_curves.svg");

    std::uint64_t seed = 12345;
    bool tamper = false;
    CLI::App* ver = app.add_subcommand("verify", "run cross-module consistency checks");
    ver->add_option("--seed", seed, "RNG seed for the sampled checks");
    ver->add_flag("--tamper-tolerances", tamper, "test hook: force every tolerance to zero")
        ->group("");  // hidden

    double omega1 = 0.0, omega0 = 0.0, eps_in = 0.0;
    CLI::App* cri = app.add_subcommand("criterion", "RWA validity bound from the coupling ratio");
    CLI::Option* o1 = cri->add_option("--omega1", omega1, "transition angular frequency (rad/s)");
    CLI::Option* o0 = cri->add_option("--omega0", omega0, "Rabi angular frequency (rad/s)");
    CLI::Option* oe = cri->add_option("--eps", eps_in, "coupling ratio directly");

    // Let `rabi <sub> --config file.json` reach the root --config option.
    for (CLI::App* sub : {traj, swp, ver, cri}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (traj->parsed()) {
            return cmd_trajectory(ta, opt_theta->count() > 0, opt_phi->count() > 0);
        }
        if (swp->parsed()) return cmd_sweep(sa);
        if (ver->parsed()) return cmd_verify(seed, tamper);
        if (cri->parsed()) {
            const bool have_freqs = o1->count() > 0 || o0->count() > 0;
            if (have_freqs && (o1->count() == 0 || o0->count() == 0)) {
                throw UsageError("--omega1 and --omega0 must be given together");
            }
            return cmd_criterion(omega1, omega0, eps_in, have_freqs, oe->count() > 0);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
