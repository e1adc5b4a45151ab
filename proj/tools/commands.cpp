// commands.cpp

#include "commands.hpp"

#include "sqlattice/cluster.hpp"
#include "sqlattice/dynamics.hpp"
#include "sqlattice/metrics.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace sqlat::cli {

namespace {

ExperimentConfig load(const CommandOptions& opt) {
    if (!opt.config) throw ValidationError("--config is required");
    ExperimentConfig cfg = load_config(*opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out) cfg.output = *opt.out;
    return cfg;
}

std::ofstream open_output(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw ValidationError(p.string() + ": cannot write file");
    return f;
}

RVector chain_couplings(const ExperimentConfig& cfg, Eigen::Index n) {
    if (!cfg.couplings) throw ValidationError("config .couplings: required to build a model from a target");
    const CouplingSpec& c = *cfg.couplings;
    if (c.uniform) return RVector::Constant(n, *c.uniform);
    if (c.explicit_values) {
        if (c.explicit_values->size() != n) {
            throw ValidationError("config .couplings: expected " + std::to_string(n) + " values, got " +
                                  std::to_string(c.explicit_values->size()));
        }
        return *c.explicit_values;
    }
    EqualizeOptions eo;
    eo.mean_coupling = *c.equalized_mean;
    const EqualizeResult r = equalize_overlaps(n + 1, RVector::Constant(n, eo.mean_coupling), eo);
    if (!r.converged) {
        throw ConvergenceError("coupling equalization reached min overlap " + io::format_double(r.min_overlap) +
                               " only");
    }
    return r.couplings;
}

std::string describe_dark_modes(const StabilityReport& r, double threshold) {
    std::string s;
    for (const auto& c : r.clusters) {
        if (c.overlap <= threshold) {
            s += "dark mode: normal mode at eigenvalue " + io::format_double(c.eigenvalue) + " (multiplicity " +
                 std::to_string(c.multiplicity) + ") has overlap " + io::format_double(c.overlap) +
                 " with the auxiliary site\n";
        }
    }
    return s;
}

}  // namespace

io::ModelDocument resolve_model(const ExperimentConfig& cfg) {
    if (cfg.model) return io::model_from_json(io::read_json_file(*cfg.model), cfg.model->string());
    if (!cfg.bath) throw ValidationError("config .bath: required unless a model document is given");

    io::ModelDocument doc;
    doc.bath = *cfg.bath;
    if (cfg.hamiltonian) {
        doc.hamiltonian.J = *cfg.hamiltonian;
        validate_coupling(doc.hamiltonian);
        return doc;
    }
    if (!cfg.target) throw ValidationError("config .target: required unless 'model' or 'hamiltonian' is given");

    const double z0 = doc.bath.z0();
    BogoliubovTransform lattice;
    if (const auto* t = std::get_if<LatticeTarget>(&*cfg.target)) {
        doc.graph = square_lattice(t->rows, t->cols);
    } else if (const auto* t = std::get_if<EdgeListTarget>(&*cfg.target)) {
        doc.graph = io::read_edge_list_file(t->path, t->nodes);
    } else {
        const auto& p = std::get<TransformTarget>(*cfg.target).path;
        lattice = io::bogoliubov_from_json(io::read_json_file(p), p.string());
    }
    if (doc.graph) {
        lattice = build_target(*doc.graph, z0).B;
        doc.z = z0;
    }
    const RVector couplings = chain_couplings(cfg, lattice.n_modes());
    const TheoremModel tm = model_from_target(doc.bath, couplings, lattice);
    doc.hamiltonian = tm.hamiltonian;
    doc.couplings = tm.couplings;
    doc.squeeze_phases = tm.squeeze_phases;
    doc.target = tm.target;
    return doc;
}

int cmd_build(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load(opt);
    const io::ModelDocument doc = resolve_model(cfg);
    const StabilityOptions so;
    const StabilityReport sr = stability_report(doc.hamiltonian, doc.bath.kappa, so);
    const ChiralReport cr = chiral_report(doc.hamiltonian);

    io::write_json_file(cfg.output / "model.json", io::to_json(doc, &sr, &cr));
    if (doc.target) {
        auto f = open_output(cfg.output / "target_covariance.txt");
        io::write_matrix_table(f, to_covariance(*doc.target).sigma);
    }
    out << "sites: " << doc.hamiltonian.n_sites() << '\n'
        << "dark_mode_free: " << (sr.dark_mode_free ? "true" : "false") << '\n'
        << "min_overlap: " << io::format_double(sr.min_overlap) << '\n'
        << "chiral_paired: " << (cr.paired ? "true" : "false") << '\n'
        << "model: " << (cfg.output / "model.json").string() << '\n';
    if (!sr.dark_mode_free) {
        err << describe_dark_modes(sr, so.overlap_threshold);
        return kExitUnstable;
    }
    return kExitOk;
}

int cmd_steady(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    const ExperimentConfig cfg = load(opt);
    const io::ModelDocument doc = resolve_model(cfg);
    const DriftDiffusion dd = assemble(doc.hamiltonian, doc.bath, cfg.gamma);
    const CovarianceState s = steady_state(dd);

    {
        auto f = open_output(cfg.output / "covariance.txt");
        io::write_matrix_table(f, s.sigma);
    }
    io::json metrics{{"gamma", cfg.gamma}, {"purity", purity(s)}};
    out << "purity: " << io::format_double(purity(s)) << '\n';
    if (doc.target) {
        const double fid = overlap(s, to_covariance(*doc.target)).value;
        metrics["fidelity"] = fid;
        out << "fidelity: " << io::format_double(fid) << '\n';
    }
    if (doc.graph) {
        std::vector<Eigen::Index> sites(static_cast<std::size_t>(doc.graph->n_nodes()));
        for (std::size_t k = 0; k < sites.size(); ++k) sites[k] = static_cast<Eigen::Index>(k) + 1;
        const NullifierVariances nv = nullifier_variances(reduce_modes(s, sites), *doc.graph);
        metrics["var_x"] = std::vector<double>(nv.x.begin(), nv.x.end());
        metrics["var_y"] = std::vector<double>(nv.y.begin(), nv.y.end());
        out << "max_var_x: " << io::format_double(nv.x.maxCoeff()) << '\n';
    }
    if (opt.residual) {
        const double r = lyapunov_residual(dd, s);
        metrics["lyapunov_residual"] = r;
        out << "lyapunov_residual: " << io::format_double(r) << '\n';
    }
    io::write_json_file(cfg.output / "steady.json", metrics);
    return kExitOk;
}

int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    const ExperimentConfig cfg = load(opt);
    const io::ModelDocument doc = resolve_model(cfg);
    if (!doc.target) throw ValidationError("sweep: the model has no target state to compare against");

    const auto m = doc.hamiltonian.n_sites();
    SweepProblem problem{doc.hamiltonian, doc.bath, to_covariance(*doc.target), doc.graph};
    SweepConfig sc;
    if (cfg.gamma_total) {
        for (double g : *cfg.gamma_total) sc.gammas.push_back(g * doc.bath.kappa / static_cast<double>(m));
    } else {
        sc.gammas = default_gamma_grid(m, doc.bath.kappa);
    }
    sc.series = cfg.perturbations;
    sc.master_seed = cfg.seed;
    const auto records = gamma_sweep(problem, sc);

    io::TableHeader h{"sweep", cfg.seed, {}, opt.timestamp};
    h.fields.emplace_back("sites", std::to_string(m));
    for (const auto& s : sc.series) {
        h.fields.emplace_back("series", to_string(s.kind) + " epsilon=" + io::format_double(s.epsilon) +
                                            " realizations=" + std::to_string(s.realizations));
    }
    h.fields.emplace_back("tolerances", "stability margin 1e-10 * ||A||_F; bogoliubov 1e-9");
    auto f = open_output(cfg.output / "sweep.csv");
    io::write_header(f, h);
    io::write_sweep_csv(f, records);

    const auto unstable = std::count_if(records.begin(), records.end(),
                                        [](const SweepRecord& r) { return r.status == CaseStatus::unstable; });
    const auto unphysical = std::count_if(records.begin(), records.end(),
                                          [](const SweepRecord& r) { return r.status == CaseStatus::unphysical; });
    out << "records: " << records.size() << '\n'
        << "gammas: " << sc.gammas.size() << '\n'
        << "unstable: " << unstable << '\n'
        << "unphysical: " << unphysical << '\n'
        << "table: " << (cfg.output / "sweep.csv").string() << '\n';
    return kExitOk;
}

int cmd_optimize(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load(opt);
    if (!cfg.optimize) throw ValidationError("config .optimize: required for the optimize command");
    const OptimizeSpec& os = *cfg.optimize;
    const RVector init = os.initial.value_or(RVector::Constant(os.sites - 1, os.options.mean_coupling));
    const EqualizeResult r = equalize_overlaps(os.sites, init, os.options);

    io::write_json_file(cfg.output / "optimize.json",
                        {{"sites", os.sites},
                         {"couplings", std::vector<double>(r.couplings.begin(), r.couplings.end())},
                         {"overlaps", std::vector<double>(r.overlaps.begin(), r.overlaps.end())},
                         {"min_overlap", r.min_overlap},
                         {"objective", r.objective},
                         {"converged", r.converged},
                         {"restarts_used", r.restarts_used},
                         {"evaluations", r.evaluations}});
    auto f = open_output(cfg.output / "couplings.csv");
    io::TableHeader h{"optimize", std::nullopt, {}, opt.timestamp};
    h.fields.emplace_back("sites", std::to_string(os.sites));
    h.fields.emplace_back("mean_coupling", io::format_double(os.options.mean_coupling));
    h.fields.emplace_back("tolerances", "success min overlap >= (1 - " + io::format_double(os.options.success_tol) +
                                            ") / sqrt(M)");
    io::write_header(f, h);
    f << "j,coupling\n";
    for (Eigen::Index j = 0; j < r.couplings.size(); ++j) f << j + 1 << ',' << io::format_double(r.couplings(j)) << '\n';

    out << "min_overlap_times_sqrt_m: " << io::format_double(r.min_overlap * std::sqrt(static_cast<double>(os.sites)))
        << '\n'
        << "mean_coupling: " << io::format_double(r.couplings.mean()) << '\n'
        << "converged: " << (r.converged ? "true" : "false") << '\n';
    if (!r.converged) {
        err << "optimize: budget exhausted; best result written\n";
        return kExitConvergence;
    }
    return kExitOk;
}

int cmd_decompose(const CommandOptions& opt, std::ostream& out, std::ostream&) {
    if (!opt.input) throw ValidationError("decompose: an input document is required");
    const io::json j = io::read_json_file(*opt.input);
    BogoliubovTransform b;
    if (j.is_object() && j.value("format", std::string()) == "sqlattice-model") {
        const auto doc = io::model_from_json(j, opt.input->string());
        if (!doc.target) throw ValidationError(opt.input->string() + ": model document has no target");
        b = *doc.target;
    } else {
        b = io::bogoliubov_from_json(j, opt.input->string());
    }
    const BlochMessiahFactors f = bloch_messiah(b);
    const BogoliubovTransform back = f.reassemble();
    const double residual = std::max((back.X - b.X).norm(), (back.Y - b.Y).norm());

    const std::filesystem::path dir = opt.out.value_or("out");
    io::write_json_file(dir / "decompose.json", io::to_json(f, residual));
    out << "modes: " << b.n_modes() << '\n' << "Dz:";
    for (double z : f.Dz) out << ' ' << io::format_double(z);
    out << '\n' << "roundtrip_residual: " << io::format_double(residual) << '\n';
    return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (const char* env = std::getenv("SQLATTICE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }

    CLI::App app{"Dissipative preparation of Gaussian lattice states with a squeezed reservoir", "sqlattice"};
    app.require_subcommand(1);
    CommandOptions opt;
    std::string config, out_dir, input;
    std::uint64_t seed = 0;
    bool no_timestamp = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_flag("--no-timestamp", no_timestamp, "omit the timestamp from table headers");
    };
    auto* build = app.add_subcommand("build", "construct the Hamiltonian for a target and report stability");
    auto* steady = app.add_subcommand("steady", "solve the steady-state covariance");
    auto* sweep = app.add_subcommand("sweep", "noise sweep with random Hamiltonian perturbations");
    auto* optimize = app.add_subcommand("optimize", "equalize normal-mode overlaps of a chain");
    auto* decompose = app.add_subcommand("decompose", "Bloch-Messiah factors of a transform or model target");
    for (auto* s : {build, steady, sweep, optimize}) add_common(s);
    steady->add_flag("--residual", opt.residual, "print the Lyapunov residual");
    decompose->add_option("input", input, "Bogoliubov or model document")->required()->check(CLI::ExistingFile);
    decompose->add_option("--out", out_dir, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitValidation;
    }
    if (!config.empty()) opt.config = config;
    if (!out_dir.empty()) opt.out = out_dir;
    if (!input.empty()) opt.input = input;
    for (auto* s : {build, steady, sweep, optimize}) {
        if (s->parsed() && s->count("--seed")) opt.seed = seed;
    }
    opt.timestamp = !no_timestamp;

    try {
        if (build->parsed()) return cmd_build(opt, out, err);
        if (steady->parsed()) return cmd_steady(opt, out, err);
        if (sweep->parsed()) return cmd_sweep(opt, out, err);
        if (optimize->parsed()) return cmd_optimize(opt, out, err);
        return cmd_decompose(opt, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const UnstableError& e) {
        err << "unstable: " << e.what() << '\n';
        return kExitUnstable;
    } catch (const ConvergenceError& e) {
        err << "not converged: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace sqlat::cli
