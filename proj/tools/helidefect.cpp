// helidefect: spectral helicity-defect analysis on periodic boxes and slabs.
//
// Subcommands: synth, analyze, regularity, boundary, budget, verify, report.
// Exit codes: 0 success, 2 validation error, 3 failed verdict under --strict.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "heli/boundary.hpp"
#include "heli/calculus.hpp"
#include "heli/config.hpp"
#include "heli/errors.hpp"
#include "heli/field_io.hpp"
#include "heli/fields_lab.hpp"
#include "heli/mollify.hpp"
#include "heli/pointwise.hpp"
#include "heli/quadrature.hpp"
#include "heli/regularity.hpp"
#include "heli/report.hpp"
#include "heli/rng.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVerdict = 3;

const std::vector<std::string> kKnownKeys = {
    "grid.n",         "grid.nz",        "ladder.rungs",  "ladder.kernel", "recipe.theta",
    "recipe.seed",    "recipe.c0",      "regularity.p",  "mc.samples",    "mc.seed",
    "budget.alphas",  "out.prefix",     "strict",        "dealias"};

json provenance(const heli::Config& cfg, const std::map<std::string, std::string>& seeds) {
    json meta;
    meta["tool_version"] = heli::kToolVersion;
    meta["config_hash"] = heli::config_hash(cfg.values());
    json s = json::object();
    for (const auto& [k, v] : seeds) s[k] = v;
    meta["seeds"] = s;
    json opts = json::object();
    for (const auto& [k, v] : cfg.values()) opts[k] = v;
    meta["options"] = opts;
    return meta;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw heli::FormatError("cannot open " + path);
    const std::string body = j.dump(2);
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    os.put('\n');
}

void print_config_warnings(const heli::Config& cfg) {
    for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << "\n";
}

// ---------------------------------------------------------------- synth ----

int run_synth(const std::string& recipe_name, double A, double B, double C, double theta,
              std::uint64_t seed, bool c0, int n, int nz, const std::string& out) {
    heli::VectorField field;
    if (recipe_name == "abc") {
        field = heli::sample_recipe(heli::AbcRecipe{A, B, C}, heli::GridSpec::torus(n));
    } else if (recipe_name == "taylor-green") {
        field = heli::sample_recipe(heli::TaylorGreenRecipe{}, heli::GridSpec::torus(n));
    } else if (recipe_name == "besov") {
        field = heli::sample_recipe(heli::SyntheticBesovRecipe{theta, seed, 0.0, c0},
                                    heli::GridSpec::torus(n));
    } else if (recipe_name == "gradient") {
        field = heli::sample_recipe(heli::GradientRecipe{seed, 3}, heli::GridSpec::torus(n));
    } else if (recipe_name == "shear") {
        field = heli::sample_recipe(heli::RotatedShearRecipe::standard(),
                                    heli::GridSpec::slab(n, n, nz > 0 ? nz : n));
    } else {
        std::cerr << "unknown recipe '" << recipe_name << "'\n";
        return kExitValidation;
    }
    heli::write_field(field, out);
    std::cout << "wrote " << out << " (" << field.grid().describe() << ")\n";
    return kExitOk;
}

// --------------------------------------------------------------- analyze ----

int run_analyze(const heli::Config& cfg, const std::string& in, const std::string& ladder_arg,
                const std::string& kernel, const std::string& out_prefix, bool strict) {
    const heli::VectorField u = heli::read_vector_field(in);
    const heli::GridSpec grid = u.grid();

    std::vector<double> eps;
    if (ladder_arg == "default") {
        eps = heli::default_epsilon_ladder(grid, cfg.get_int("ladder.rungs", 6));
    } else {
        std::stringstream ss(ladder_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
    }
    const heli::MollifierKind kind = kernel == "gaussian" ? heli::MollifierKind::Gaussian
                                                          : heli::MollifierKind::Bump;

    const heli::ScalarField p(grid); // defect formula ignores the pressure
    const auto bumps = heli::make_pairing_bumps(grid);
    const heli::DefectLadder lad = heli::defect_ladder(u, p, eps, bumps, kind);

    std::vector<std::string> cols = {"epsilon", "l1_defect"};
    for (std::size_t t = 0; t < bumps.size(); ++t) cols.push_back("pairing_phi" + std::to_string(t));
    heli::CsvWriter csv(cols);
    for (std::size_t j = 0; j < eps.size(); ++j) {
        std::vector<double> row = {eps[j], lad.l1_norms[j]};
        row.insert(row.end(), lad.pairings[j].begin(), lad.pairings[j].end());
        csv.add_row(row);
    }
    csv.write(out_prefix + "_ladder.csv");
    heli::write_gnuplot_script(out_prefix + "_ladder.gp", out_prefix + "_ladder.csv", cols,
                               "helicity defect ladder");

    json j;
    j["meta"] = provenance(cfg, {});
    j["input"] = in;
    j["kernel"] = kernel;
    j["pairing_mode"] = lad.space_only ? "space_only" : "time_weighted";
    j["fitted_slope"] = lad.fitted_slope;
    j["slope_r2"] = lad.slope_r2;
    j["defect_scale"] = lad.defect_scale;
    j["extrapolated_pairing"] = lad.extrapolated_pairing;
    j["verdict"] = heli::to_string(lad.verdict);
    write_json(j, out_prefix + "_verdict.json");

    std::cout << "verdict: " << heli::to_string(lad.verdict) << " (slope "
              << lad.fitted_slope << ", r2 " << lad.slope_r2 << ")\n";
    if (strict && lad.verdict != heli::DefectVerdict::Vanishes) return kExitVerdict;
    return kExitOk;
}

// ------------------------------------------------------------ regularity ----

int run_regularity(const heli::Config& cfg, const std::string& in, const std::string& suite,
                   double theta, double p, std::uint64_t seed, std::size_t samples,
                   const std::string& out_prefix) {
    const heli::VectorField u = heli::read_vector_field(in);
    heli::ScalarField f(u.grid());
    std::copy(u.component(0).begin(), u.component(0).end(), f.component(0).begin());

    heli::CsvWriter csv({"quantity", "x", "value"});
    json j;
    j["meta"] = provenance(cfg, {{"mc.seed", std::to_string(seed)}});
    j["input"] = in;

    auto add_rows = [&](double quantity_id, const std::vector<std::pair<double, double>>& table) {
        for (const auto& [x, v] : table) csv.add_row({quantity_id, x, v});
    };

    if (suite == "seminorm" || suite == "all") {
        const auto four = heli::h_half_seminorm_fourier(f);
        j["h_half_fourier"] = four.value;
        if (u.grid().dims[0] <= 32) {
            const auto mc = heli::gagliardo_seminorm_mc(f, samples, seed);
            j["gagliardo_mc"] = mc.value;
            j["gagliardo_mc_stderr"] = mc.mc_stderr;
            j["cross_method_sigma"] =
                mc.mc_stderr > 0 ? std::abs(mc.value - four.value) / mc.mc_stderr : 0.0;
        }
    }
    if (suite == "scaling" || suite == "all") {
        const auto fit =
            heli::scaling_exponent(f, p, heli::default_increments(u.grid()));
        j["scaling_theta"] = fit.theta;
        j["scaling_r2"] = fit.r2;
        j["poor_fit"] = fit.poor_fit;
    }
    if (suite == "modulus" || suite == "all") {
        heli::BesovParams params{theta, p, heli::default_increments(u.grid())};
        const auto table = heli::besov_modulus(f, params);
        add_rows(1, table);
        j["c0_proxy"] = heli::c0_modulus_proxy(table);
        j["c0_proxy_gate"] = heli::kC0ProxyRatioGate;
        j["modulus_ratio"] =
            table.back().second > 0 ? table.front().second / table.back().second : 0.0;
        const auto semi = heli::besov_seminorm(f, params);
        j["besov_seminorm"] = semi.value;
    }
    if (suite == "commutator" || suite == "all") {
        heli::ScalarField g(u.grid());
        std::copy(u.component(1).begin(), u.component(1).end(), g.component(0).begin());
        const auto rep = heli::verify_commutator_bounds(
            f, g, theta, p, heli::default_epsilon_ladder(u.grid()), 1);
        add_rows(2, rep.grad_table);
        add_rows(3, rep.quad_table);
        j["grad_slope"] = rep.grad_slope;
        j["grad_predicted"] = rep.grad_predicted;
        j["grad_pass"] = rep.grad_pass;
        j["quad_slope"] = rep.quad_slope;
        j["quad_predicted"] = rep.quad_predicted;
        j["quad_pass"] = rep.quad_pass;
    }

    csv.write(out_prefix + "_regularity.csv");
    write_json(j, out_prefix + "_regularity.json");
    std::cout << "regularity suite '" << suite << "' written to " << out_prefix << "_*\n";
    return kExitOk;
}

// -------------------------------------------------------------- boundary ----

int run_boundary(const heli::Config& cfg, const std::string& in, const std::string& suite,
                 const std::string& out_prefix, bool strict) {
    const heli::VectorField raw = heli::read_vector_field(in);
    const heli::VectorField u = heli::as_slab(raw);
    const heli::SlabDomain dom(u.grid());

    json j;
    j["meta"] = provenance(cfg, {});
    j["input"] = in;
    bool pass = true;

    if (suite == "trace" || suite == "all") {
        for (auto face : {heli::Face::Bottom, heli::Face::Top}) {
            const auto est = heli::normal_trace_estimate(u, dom, face);
            const std::string key =
                face == heli::Face::Bottom ? "normal_trace_bottom" : "normal_trace_top";
            j[key + "_mean"] = est.mean();
            j[key + "_residual"] = est.residual;
        }
    }
    if (suite == "pairing" || suite == "all") {
        const heli::ScalarField one(u.grid(), 1.0);
        std::vector<double> radii;
        const double hz = u.grid().spacing(2);
        for (double r = 0.25 * dom.height(); r > 2.5 * hz && radii.size() < 6; r *= 0.5)
            radii.push_back(r);
        if (radii.size() < 4) {
            std::cerr << "pairing: slab too coarse for a 4-rung radius ladder\n";
            return kExitValidation;
        }
        const auto rep = heli::trace_pairing_limit(u, one, dom, radii);
        j["pairing_rhs"] = rep.rhs;
        j["pairing_lhs_extrapolated"] = rep.lhs_extrapolated;
        j["pairing_final_gap"] = rep.final_gap;
        j["pairing_gaps_decreasing"] = rep.gaps_decreasing;
        j["pairing_pass"] = rep.pass;
        pass = pass && rep.pass;
    }
    if (suite == "flux" || suite == "all") {
        const heli::ScalarField p(u.grid());
        const auto rep = heli::boundary_helicity_flux(u, p, dom);
        j["flux"] = rep.flux;
        j["tangency"] = rep.tangency;
        j["flux_trusted"] = rep.trusted;
        if (!rep.note.empty()) j["flux_note"] = rep.note;
        j["total_helicity"] = heli::slab_total_helicity(u, dom);
    }

    write_json(j, out_prefix + "_boundary.json");
    std::cout << "boundary suite '" << suite << "' written to " << out_prefix
              << "_boundary.json\n";
    if (strict && !pass) return kExitVerdict;
    return kExitOk;
}

// ---------------------------------------------------------------- budget ----

int run_budget(const heli::Config& cfg, const std::vector<std::string>& series_files, double dt,
               int alphas, const std::string& out_prefix, bool strict) {
    if (series_files.size() < 8) {
        std::cerr << "budget: need at least 8 slices\n";
        return kExitValidation;
    }
    std::vector<heli::VectorField> u_series;
    std::vector<heli::ScalarField> p_series;
    for (const auto& path : series_files) {
        u_series.push_back(heli::as_slab(heli::read_vector_field(path)));
        p_series.emplace_back(u_series.back().grid());
    }
    const heli::SlabDomain dom(u_series.front().grid());
    const auto rep = heli::helicity_budget(u_series, p_series, dt, dom, alphas);

    heli::CsvWriter csv({"t", "H", "flux"});
    for (std::size_t n = 0; n < rep.times.size(); ++n)
        csv.add_row({rep.times[n], rep.helicity[n], rep.flux[n]});
    csv.write(out_prefix + "_budget.csv");

    json j;
    j["meta"] = provenance(cfg, {});
    j["residual_per_alpha"] = rep.residual;
    j["residual_raw_per_alpha"] = rep.residual_raw;
    j["max_residual"] = rep.max_residual;
    j["trusted"] = rep.trusted;
    write_json(j, out_prefix + "_budget.json");
    std::cout << "budget: max residual " << rep.max_residual << "\n";
    if (strict && !(rep.trusted && rep.max_residual < 1e-6)) return kExitVerdict;
    return kExitOk;
}

// ---------------------------------------------------------------- verify ----

int run_verify(const std::string& suite, std::uint64_t seed, int n, bool strict) {
    bool all_pass = true;
    auto report = [&](const std::string& name, double residual, double gate) {
        const bool ok = residual < gate;
        all_pass = all_pass && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": max residual "
                  << heli::format_double(residual) << " (gate " << gate << ")\n";
    };

    if (suite == "levi-civita" || suite == "all") {
        heli::Rng rng(seed);
        const heli::GridSpec grid = heli::GridSpec::torus(16);
        double worst1 = 0.0, worst2 = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            heli::SpectralVector U(grid);
            heli::SpectralTensor R(grid);
            for (int c = 0; c < 3; ++c)
                for (int kz = -3; kz <= 3; ++kz)
                    for (int ky = -3; ky <= 3; ++ky)
                        for (int kx = 0; kx <= 3; ++kx) {
                            if (kx == 0 && (ky < 0 || (ky == 0 && kz <= 0))) continue;
                            const std::complex<double> z{rng.normal(), rng.normal()};
                            U.at(c, kx, ky, kz) = z;
                            U.at(c, -kx, -ky, -kz) = std::conj(z);
                        }
            for (int r = 0; r < 3; ++r)
                for (int c = r; c < 3; ++c)
                    for (int kz = -3; kz <= 3; ++kz)
                        for (int ky = -3; ky <= 3; ++ky)
                            for (int kx = 0; kx <= 3; ++kx) {
                                if (kx == 0 && (ky < 0 || (ky == 0 && kz <= 0))) continue;
                                const std::complex<double> z{rng.normal(), rng.normal()};
                                R.at(heli::tensor_index(r, c), kx, ky, kz) = z;
                                R.at(heli::tensor_index(r, c), -kx, -ky, -kz) = std::conj(z);
                                R.at(heli::tensor_index(c, r), kx, ky, kz) = z;
                                R.at(heli::tensor_index(c, r), -kx, -ky, -kz) = std::conj(z);
                            }
            const auto rep = heli::verify_levi_civita_identities(heli::to_physical(U),
                                                                 heli::to_physical(R));
            worst1 = std::max(worst1, rep.curl_div_residual);
            worst2 = std::max(worst2, rep.column_split_residual);
        }
        report("levi-civita identity 1 (50 pairs, N=16)", worst1, 1e-10);
        report("levi-civita identity 2 (50 pairs, N=16)", worst2, 1e-10);
    }
    if (suite == "beltrami" || suite == "all") {
        const auto grid = heli::GridSpec::torus(n);
        const auto u = heli::sample_recipe(heli::AbcRecipe{}, grid);
        report("beltrami curl(ABC) = ABC (N=" + std::to_string(n) + ")",
               heli::max_abs(heli::sub(heli::curl(u), u)), 1e-12);
    }
    if (suite == "parseval" || suite == "all") {
        heli::Rng rng(seed + 17);
        double worst = 0.0;
        for (int nn : {8, 16, 32}) {
            const auto grid = heli::GridSpec::torus(nn);
            heli::ScalarField f(grid);
            for (auto& v : f.raw()) v = rng.normal();
            const auto F = heli::to_spectral(f);
            double phys = 0.0;
            for (double v : f.raw()) phys += v * v;
            phys *= grid.cell_volume();
            double spec = 0.0;
            for (const auto& z : F.component(0)) spec += std::norm(z);
            spec *= grid.volume();
            worst = std::max(worst, std::abs(phys - spec) / spec);
        }
        report("parseval (N=8,16,32)", worst, 1e-12);
    }
    if (strict && !all_pass) return kExitVerdict;
    return all_pass ? kExitOk : kExitVerdict;
}

// ---------------------------------------------------------------- report ----

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
    std::ofstream os(out, std::ios::binary | std::ios::trunc);
    if (!os) {
        std::cerr << "report: cannot open " << out << "\n";
        return kExitValidation;
    }
    os << "| source | key | value |\n|---|---|---|\n";
    for (const auto& path : inputs) {
        std::ifstream is(path);
        if (!is) {
            std::cerr << "report: cannot open " << path << "\n";
            return kExitValidation;
        }
        json j = json::parse(is, nullptr, true);
        const std::string base = std::filesystem::path(path).filename().string();
        for (auto& [key, value] : j.items()) {
            if (key == "meta") continue;
            if (value.is_number() || value.is_string() || value.is_boolean())
                os << "| " << base << " | " << key << " | " << value.dump() << " |\n";
        }
    }
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"helicity defect analysis for incompressible velocity fields"};
    app.require_subcommand(1);
    heli::Config cfg;
    std::string config_path;
    bool strict = false;
    app.add_option("--config", config_path, "key=value config file");
    app.add_flag("--strict", strict, "exit 3 when a verdict fails");

    // synth
    auto* synth = app.add_subcommand("synth", "write a recipe field to a VF3 file");
    std::string recipe = "abc", out = "field.vf3";
    double A = 1, B = 1, C = 1, theta = 2.0 / 3.0;
    std::uint64_t seed = 1;
    bool c0 = false;
    int n = 64, nz = 0;
    synth->add_option("--recipe", recipe, "abc|taylor-green|besov|gradient|shear");
    synth->add_option("--A", A);
    synth->add_option("--B", B);
    synth->add_option("--C", C);
    synth->add_option("--theta", theta);
    synth->add_option("--seed", seed);
    synth->add_flag("--c0", c0, "apply the c0 log decay");
    synth->add_option("--n", n, "grid points per axis");
    synth->add_option("--nz", nz, "z points (slab recipes)");
    synth->add_option("--out", out)->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "defect ladder on an input field");
    std::string in, ladder = "default", kernel = "bump", out_prefix = "out";
    int rungs = 0;
    analyze->add_option("--in", in)->required();
    analyze->add_option("--ladder", ladder, "'default' or comma list of epsilons");
    analyze->add_option("--kernel", kernel, "bump|gaussian");
    analyze->add_option("--rungs", rungs, "rung count for the default ladder");
    analyze->add_option("--out-prefix", out_prefix);

    // regularity
    auto* reg = app.add_subcommand("regularity", "seminorm/scaling/commutator suites");
    std::string reg_suite = "all";
    double reg_p = 3.0;
    std::size_t samples = 200000;
    reg->add_option("--in", in)->required();
    reg->add_option("--suite", reg_suite, "seminorm|scaling|modulus|commutator|all");
    reg->add_option("--theta", theta);
    reg->add_option("--p", reg_p);
    reg->add_option("--seed", seed);
    reg->add_option("--samples", samples);
    reg->add_option("--out-prefix", out_prefix);

    // boundary
    auto* bnd = app.add_subcommand("boundary", "trace and flux suites on slab input");
    std::string bnd_suite = "all";
    bnd->add_option("--in", in)->required();
    bnd->add_option("--suite", bnd_suite, "trace|pairing|flux|all");
    bnd->add_option("--out-prefix", out_prefix);

    // budget
    auto* bud = app.add_subcommand("budget", "helicity budget over a time series");
    std::vector<std::string> series;
    double dt = 0.01;
    int alphas = 5;
    bud->add_option("--series", series, "slice files in time order")->required();
    bud->add_option("--dt", dt);
    bud->add_option("--alphas", alphas);
    bud->add_option("--out-prefix", out_prefix);

    // verify
    auto* ver = app.add_subcommand("verify", "exact-identity suites");
    std::string ver_suite = "all";
    ver->add_option("--suite", ver_suite, "levi-civita|beltrami|parseval|all");
    ver->add_option("--seed", seed);
    ver->add_option("--n", n);

    // report
    auto* repc = app.add_subcommand("report", "merge JSON summaries into a markdown table");
    std::vector<std::string> report_inputs;
    std::string report_out = "report.md";
    repc->add_option("--inputs", report_inputs)->required();
    repc->add_option("--out", report_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (!config_path.empty()) cfg.load_file(config_path, kKnownKeys);
        print_config_warnings(cfg);
        // flags override config values
        if (rungs > 0) cfg.set("ladder.rungs", std::to_string(rungs));
        cfg.set("strict", strict ? "1" : "0");

        if (synth->parsed()) return run_synth(recipe, A, B, C, theta, seed, c0, n, nz, out);
        if (analyze->parsed()) {
            if (rungs > 0) cfg.set("ladder.rungs", std::to_string(rungs));
            cfg.set("ladder.kernel", kernel);
            return run_analyze(cfg, in, ladder, kernel, out_prefix, strict);
        }
        if (reg->parsed()) {
            cfg.set("regularity.p", heli::format_double(reg_p));
            cfg.set("mc.samples", std::to_string(samples));
            cfg.set("mc.seed", std::to_string(seed));
            return run_regularity(cfg, in, reg_suite, theta, reg_p, seed, samples, out_prefix);
        }
        if (bnd->parsed()) return run_boundary(cfg, in, bnd_suite, out_prefix, strict);
        if (bud->parsed()) {
            cfg.set("budget.alphas", std::to_string(alphas));
            return run_budget(cfg, series, dt, alphas, out_prefix, strict);
        }
        if (ver->parsed()) return run_verify(ver_suite, seed, n, strict);
        if (repc->parsed()) return run_report(report_inputs, report_out);
    } catch (const heli::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
