#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pidlab/fixtures.hpp"
#include "pidlab/ising.hpp"
#include "pidlab/measures.hpp"
#include "pidlab/serialize.hpp"

namespace {

// Exit codes: 0 success, 2 usage/parse, 3 I/O, 4 cell-cap guard.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCellCap = 4;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "'");
    return pidlab::read_document(in);
}

struct LoadedSystem {
    pidlab::JointDistribution dist;
    pidlab::SystemSpec spec;
};

LoadedSystem load_system(const std::string& path, const std::string& sources_flag,
                         const std::string& target_flag) {
    const auto doc = load_document(path);
    auto dist = pidlab::distribution_from_document(doc);

    pidlab::SystemSpec spec;
    if (!sources_flag.empty() || !target_flag.empty()) {
        if (sources_flag.empty() || target_flag.empty()) {
            throw pidlab::ParseError("--sources and --target must be given together");
        }
        std::stringstream ss(sources_flag);
        std::string name;
        while (std::getline(ss, name, ',')) spec.sources.push_back(name);
        spec.target = target_flag;
    } else if (auto embedded = pidlab::spec_from_document(doc)) {
        spec = *embedded;
    } else {
        // Default: last variable is the target, the rest are sources.
        for (std::size_t i = 0; i + 1 < dist.variable_count(); ++i) {
            spec.sources.push_back(dist.variables()[i].name);
        }
        spec.target = dist.variables().back().name;
    }
    spec.validate(dist);
    return {std::move(dist), std::move(spec)};
}

std::vector<double> parse_temperatures(const std::string& text) {
    std::vector<double> temps;
    if (text.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        char c1 = 0, c2 = 0;
        std::stringstream ss(text);
        if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
            step <= 0) {
            throw pidlab::ParseError("expected start:step:end, got '" + text + "'");
        }
        for (double t = start; t <= stop + 1e-12; t += step) temps.push_back(t);
    } else {
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                temps.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw pidlab::ParseError("bad temperature '" + field + "'");
            }
        }
    }
    return temps;
}

int cmd_fixtures(const std::string& name, std::uint64_t seed, const std::string& out) {
    const auto id = pidlab::fixture_id_from_name(name);
    if (!id) throw pidlab::ParseError("unknown fixture '" + name + "'");
    const auto f = pidlab::make(*id, seed);
    const auto doc = pidlab::to_document(f.dist, &f.spec);
    if (out.empty() || out == "-") {
        pidlab::write_document(std::cout, doc);
    } else {
        std::ofstream os(out);
        if (!os) throw IoFailure("cannot write '" + out + "'");
        pidlab::write_document(os, doc);
    }
    return 0;
}

int cmd_pid2(const std::string& path, const std::string& sources,
             const std::string& target) {
    const auto sys = load_system(path, sources, target);
    if (sys.spec.sources.size() != 2) {
        throw pidlab::WrongArity("pid2 needs exactly two sources, got " +
                                 std::to_string(sys.spec.sources.size()) +
                                 " (use pidn for multivariate systems)");
    }
    const auto pid = pid2_full(sys.dist, sys.spec);

    const double r1 = std::abs(pid.red + pid.syn + pid.un[0] + pid.un[1] - pid.mi_joint);
    const double r2 = std::max(std::abs(pid.red + pid.un[0] - pid.mi_marginals[0]),
                               std::abs(pid.red + pid.un[1] - pid.mi_marginals[1]));
    const double r3 = std::max(std::abs(pid.syn + pid.un[0] - pid.cmi[0]),
                               std::abs(pid.syn + pid.un[1] - pid.cmi[1]));

    std::cout << std::fixed << std::setprecision(6);
    std::cout << "red  " << pid.red << "\n";
    std::cout << "un1  " << pid.un[0] << "  (" << sys.spec.sources[0] << ")\n";
    std::cout << "un2  " << pid.un[1] << "  (" << sys.spec.sources[1] << ")\n";
    std::cout << "syn  " << pid.syn << "\n";
    std::cout << "mi   " << pid.mi_joint << "\n";
    std::cout << std::scientific << std::setprecision(2);
    std::cout << "residual_eq1  " << r1 << "\n";
    std::cout << "residual_eq2  " << r2 << "\n";
    std::cout << "residual_eq3  " << r3 << "\n";
    return (r1 < 1e-8 && r2 < 1e-8 && r3 < 1e-8) ? 0 : 1;
}

int cmd_pidn(const std::string& path, const std::string& sources,
             const std::string& target, bool want_tse, int se_order, bool want_syn,
             int un_index) {
    const auto sys = load_system(path, sources, target);
    if (sys.spec.sources.size() < 2) {
        throw pidlab::WrongArity("pidn needs at least two sources");
    }
    const bool all = !want_tse && se_order < 0 && !want_syn && un_index < 0;

    std::cout << std::fixed << std::setprecision(6);
    if (un_index >= 0 || all) {
        if (all) {
            for (std::size_t i = 0; i < sys.spec.sources.size(); ++i) {
                std::cout << "un[" << sys.spec.sources[i] << "]  "
                          << unique_info(sys.dist, sys.spec, i) << "\n";
            }
        } else {
            const auto i = static_cast<std::size_t>(un_index - 1);
            if (un_index < 1 || i >= sys.spec.sources.size()) {
                throw pidlab::ParseError("--un index out of range");
            }
            std::cout << "un[" << sys.spec.sources[i] << "]  "
                      << unique_info(sys.dist, sys.spec, i) << "\n";
        }
    }
    if (want_syn || all) {
        std::cout << "syn  " << synergy_general(sys.dist, sys.spec) << "\n";
    }
    if (se_order >= 0) {
        std::cout << "se[" << se_order << "]  " << se_k(sys.dist, sys.spec, se_order)
                  << "\n";
    }
    if (want_tse || all) {
        const auto spectrum = tse(sys.dist, sys.spec);
        for (const auto& [k, v] : spectrum.se) {
            std::cout << "se[" << k << "]  " << v << "\n";
        }
        std::cout << "tse  " << spectrum.tse << "\n";
    }
    return 0;
}

int cmd_audit(const std::string& path, bool inconsistency_exhibit, const std::string& sources,
              const std::string& target) {
    if (inconsistency_exhibit) {
        const auto rep = pidlab::fixture_inconsistency_check();
        std::cout << to_text(rep);
        const auto triple = pidlab::make(pidlab::FixtureId::xor_triple_system2);
        const auto wesp = pidlab::wesp_audit(triple.dist, {"S1", "S2", "S3"});
        std::cout << "triple-xor synergy sum " << wesp.sum_syn << " vs joint entropy "
                  << wesp.joint_entropy
                  << (wesp.violated ? "  (whole < sum of parts)" : "") << "\n";
        return rep.premises.all_pass() && wesp.violated ? 0 : 1;
    }
    if (path.empty()) {
        throw pidlab::ParseError("audit needs an input file or --inconsistency");
    }
    const auto sys = load_system(path, sources, target);
    const auto rep = pidlab::axiom_audit(sys.dist, sys.spec);
    std::cout << to_text(rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_ising_run(int L, double J, const std::string& temps, int burnin, int sweeps,
                  int sites, std::uint64_t seed, bool cross, int threads,
                  const std::string& out) {
    pidlab::ising::IsingConfig cfg;
    cfg.L = L;
    cfg.J = J;
    cfg.temperatures = parse_temperatures(temps);
    cfg.burn_in = burnin;
    cfg.recorded = sweeps;
    cfg.n_sites = sites;
    cfg.master_seed = seed;
    cfg.cross_temporal = cross;
    cfg.validate();

    const auto records = pidlab::ising::run_experiment(cfg, threads);

    std::ofstream os(out);
    if (!os) throw IoFailure("cannot write '" + out + "'");
    pidlab::ising::write_csv(os, records);

    std::cout << std::setprecision(4);
    for (const auto& r : records) {
        std::cout << "T=" << r.temperature << "  |M|=" << r.mean_abs_m
                  << "  chi=" << r.chi << "  cv=" << r.cv << "  a_mi=" << r.task_a.mi
                  << "  a_red=" << r.task_a.red << "  a_syn=" << r.task_a.syn
                  << "  c_tse=" << r.task_c.tse << "\n";
    }
    std::cout << "wrote " << records.size() << " records to " << out << "\n";
    return 0;
}

pidlab::ising::CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "'");
    return pidlab::ising::read_csv(in);
}

int cmd_corr(const std::string& path, const std::string& col_x,
             const std::string& col_y) {
    const auto table = load_csv(path);
    const double r = pidlab::ising::pearson(table.column(col_x), table.column(col_y));
    std::cout << std::fixed << std::setprecision(3) << r << "\n";
    return 0;
}

int cmd_ising_analyze(const std::string& path) {
    const auto table = load_csv(path);
    const std::vector<std::string> observables{"mean_abs_m", "chi", "cv"};
    std::vector<std::string> metrics;
    for (const auto& c : table.columns) {
        if (c != "temperature" && c != "mean_abs_m" && c != "chi" && c != "cv") {
            metrics.push_back(c);
        }
    }

    std::cout << std::left << std::setw(12) << "";
    for (const auto& m : metrics) std::cout << std::setw(9) << m;
    std::cout << "\n" << std::fixed << std::setprecision(2);
    for (const auto& o : observables) {
        std::cout << std::left << std::setw(12) << o;
        for (const auto& m : metrics) {
            try {
                std::cout << std::setw(9)
                          << pidlab::ising::pearson(table.column(o), table.column(m));
            } catch (const pidlab::DegenerateSeries&) {
                std::cout << std::setw(9) << "n/a";
            }
        }
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "explicit partial information decomposition measures with a 2-D Ising testbed"};
    app.require_subcommand(1);

    auto* fix = app.add_subcommand("fixtures", "export a canonical system as a document");
    std::string fix_name;
    std::uint64_t fix_seed = 0;
    std::string fix_out;
    fix->add_option("name", fix_name, "fixture name")->required();
    fix->add_option("--seed", fix_seed, "seed for the random fixture");
    fix->add_option("-o,--out", fix_out, "output path (default stdout)");

    auto* pid2 = app.add_subcommand("pid2", "two-source decomposition of a document");
    std::string pid2_in, pid2_sources, pid2_target;
    pid2->add_option("input", pid2_in, "distribution document")->required();
    pid2->add_option("--sources", pid2_sources, "comma-separated source names");
    pid2->add_option("--target", pid2_target, "target name");

    auto* pidn = app.add_subcommand("pidn", "multivariate unique/synergy measures");
    std::string pidn_in, pidn_sources, pidn_target;
    bool pidn_tse = false, pidn_syn = false;
    int pidn_se = -1, pidn_un = -1;
    pidn->add_option("input", pidn_in, "distribution document")->required();
    pidn->add_option("--sources", pidn_sources, "comma-separated source names");
    pidn->add_option("--target", pidn_target, "target name");
    pidn->add_flag("--tse", pidn_tse, "total synergistic effect and its orders");
    pidn->add_flag("--syn", pidn_syn, "joint synergy");
    pidn->add_option("--se", pidn_se, "single synergistic-effect order K");
    pidn->add_option("--un", pidn_un, "unique information of source i (1-based)");

    auto* audit = app.add_subcommand("audit", "axiom audit of a document");
    std::string audit_in, audit_sources, audit_target;
    bool audit_exhibit = false;
    audit->add_option("input", audit_in, "distribution document");
    audit->add_option("--sources", audit_sources, "comma-separated source names");
    audit->add_option("--target", audit_target, "target name");
    audit->add_flag("--inconsistency", audit_exhibit,
                    "run the fixed-system inconsistency exhibit instead");

    auto* run = app.add_subcommand("ising-run", "simulate and analyze the lattice");
    int run_L = 128, run_burnin = 20000, run_sweeps = 80000, run_sites = 50,
        run_threads = 1;
    double run_J = 1.0;
    std::string run_temps = "2.0:0.0163265:2.8";
    std::uint64_t run_seed = 0;
    bool run_cross = false;
    std::string run_out = "ising.csv";
    run->add_option("--L", run_L, "grid side length");
    run->add_option("--J", run_J, "coupling constant");
    run->add_option("--temps", run_temps, "start:step:end or comma list");
    run->add_option("--burnin", run_burnin, "burn-in sweeps");
    run->add_option("--sweeps", run_sweeps, "recorded sweeps");
    run->add_option("--sites", run_sites, "sample sites");
    run->add_option("--seed", run_seed, "master seed");
    run->add_flag("--cross-temporal", run_cross,
                  "pair neighbors with the next-sweep center");
    run->add_option("--threads", run_threads, "parallel temperature workers");
    run->add_option("--out", run_out, "output CSV path");

    auto* analyze = app.add_subcommand("ising-analyze", "correlation table of a run CSV");
    std::string analyze_in;
    analyze->add_option("input", analyze_in, "CSV from ising-run")->required();

    auto* corr = app.add_subcommand("corr", "Pearson correlation of two CSV columns");
    std::string corr_in, corr_x, corr_y;
    corr->add_option("input", corr_in, "CSV from ising-run")->required();
    corr->add_option("col_x", corr_x, "first column")->required();
    corr->add_option("col_y", corr_y, "second column")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fix->parsed()) return cmd_fixtures(fix_name, fix_seed, fix_out);
        if (pid2->parsed()) return cmd_pid2(pid2_in, pid2_sources, pid2_target);
        if (pidn->parsed()) {
            return cmd_pidn(pidn_in, pidn_sources, pidn_target, pidn_tse, pidn_se,
                            pidn_syn, pidn_un);
        }
        if (audit->parsed()) {
            return cmd_audit(audit_in, audit_exhibit, audit_sources, audit_target);
        }
        if (run->parsed()) {
            return cmd_ising_run(run_L, run_J, run_temps, run_burnin, run_sweeps,
                                 run_sites, run_seed, run_cross, run_threads, run_out);
        }
        if (analyze->parsed()) return cmd_ising_analyze(analyze_in);
        if (corr->parsed()) return cmd_corr(corr_in, corr_x, corr_y);
    } catch (const pidlab::CellCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCellCap;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const pidlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
