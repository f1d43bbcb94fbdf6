// Experiment runner: every estimator behind one executable with seed
// control, JSON/CSV output, and reproducible defaulted seeds. Exit codes:
// 0 success, 2 usage error, 3 numerical or diagnostic failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectra/spectra.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    int n = 0;
    int ell = 3;
    std::uint64_t samples = 0;
    std::uint64_t pencils = 0;
    std::uint64_t trials = 0;
    std::uint64_t circles = 0;
    int grid = 1024;
    int restarts = 64;
    std::uint64_t closed_samples = 10000;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out;
    std::string format = "json";
    std::string histogram;
    std::string pencil_file;
    std::vector<int> dims;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
    if (given) return *given;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Flattens a JSON report into field,value,std_error,samples,ci_lo,ci_hi
// rows so the CSV carries the same resolved config and numbers.
void flatten_csv(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        if (j.contains("value") && j.contains("std_error") && j.contains("samples")) {
            os << prefix << ',' << j.at("value").dump() << ',' << j.at("std_error").dump() << ','
               << j.at("samples").dump();
            if (j.contains("ci95"))
                os << ',' << j.at("ci95")[0].dump() << ',' << j.at("ci95")[1].dump();
            else
                os << ",,";
            os << '\n';
            return;
        }
        for (const auto& [key, val] : j.items())
            flatten_csv(val, prefix.empty() ? key : prefix + "." + key, os);
        return;
    }
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_csv(j[i], prefix + "[" + std::to_string(i) + "]", os);
        return;
    }
    os << prefix << ',' << j.dump() << ",,,,\n";
}

void emit(const json& report, const CommonOpts& opts) {
    std::ostringstream body;
    if (opts.format == "csv") {
        body << "field,value,std_error,samples,ci_lo,ci_hi\n";
        flatten_csv(report, "", body);
    } else {
        body << report.dump(2) << '\n';
    }
    if (opts.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opts.out);
        if (!f) throw std::runtime_error("cannot open output file " + opts.out);
        f << body.str();
    }
}

void write_histogram_csv(const std::string& path, const std::vector<int>& rhos,
                         const std::vector<int>& sigmas) {
    int maxv = 0;
    for (int r : rhos) maxv = std::max(maxv, r);
    for (int s : sigmas) maxv = std::max(maxv, 2 * s);
    std::vector<std::uint64_t> count_rho(static_cast<std::size_t>(maxv) + 1, 0);
    std::vector<std::uint64_t> count_sigma2(static_cast<std::size_t>(maxv) + 1, 0);
    for (int r : rhos) ++count_rho[static_cast<std::size_t>(r)];
    for (int s : sigmas) ++count_sigma2[static_cast<std::size_t>(2 * s)];
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open histogram file " + path);
    f << "value,count_rho,count_sigma_doubled\n";
    for (int v = 0; v <= maxv; ++v)
        f << v << ',' << count_rho[static_cast<std::size_t>(v)] << ','
          << count_sigma2[static_cast<std::size_t>(v)] << '\n';
}

json config_json(const CommonOpts& o, const std::string& subcommand, std::uint64_t seed) {
    json c{{"subcommand", subcommand},
           {"seed", seed},
           {"workers", spectra::resolve_workers(o.workers)},
           {"format", o.format}};
    if (o.n > 0) c["n"] = o.n;
    if (o.ell > 0) c["ell"] = o.ell;
    if (o.samples > 0) c["samples"] = o.samples;
    if (o.pencils > 0) c["pencils"] = o.pencils;
    if (o.trials > 0) c["trials"] = o.trials;
    if (o.circles > 0) c["circles"] = o.circles;
    if (!o.out.empty()) c["out"] = o.out;
    if (!o.histogram.empty()) c["histogram"] = o.histogram;
    if (!o.pencil_file.empty()) c["pencil_file"] = o.pencil_file;
    return c;
}

json agreement_json(const spectra::Estimate& a, const spectra::Estimate& b) {
    const double se = spectra::combined_se(a, b);
    return json{{"difference", a.value - b.value},
                {"combined_se", se},
                {"within_3se", std::abs(a.value - b.value) <= 3.0 * se}};
}

int run_volume(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.samples == 0) o.samples = 100000;
    json report{{"config", config_json(o, "volume", seed)}};
    report["config"]["closed_samples"] = o.closed_samples;
    const int workers = o.workers;
    if (!o.pencil_file.empty()) {
        const spectra::Pencil p = spectra::load_pencil(o.pencil_file);
        report["config"]["n"] = p.n;
        report["config"]["ell"] = p.ell;
        report["volume_mc"] = spectra::estimate_to_json(
            spectra::volume_mc(p, o.samples, root.child(1), workers));
        emit(report, o);
        return 0;
    }
    if (o.n < 1 || o.ell < 1) throw std::invalid_argument("volume: --n and --ell are required");
    if (o.pencils == 0) o.pencils = 200;
    report["config"]["pencils"] = o.pencils;
    std::vector<double> per_pencil(o.pencils, 0.0);
    for (std::uint64_t i = 0; i < o.pencils; ++i) {
        const spectra::Pencil p = spectra::sample_pencil(o.n, o.ell, root.child(2 * i));
        per_pencil[i] = spectra::volume_mc(p, o.samples, root.child(2 * i + 1), workers).value;
    }
    const spectra::Estimate mc = spectra::mean_estimate(per_pencil, root);
    const spectra::Estimate closed =
        spectra::expected_volume_closed(o.n, o.ell, o.closed_samples, root.child(2 * o.pencils), workers);
    report["volume_mc"] = spectra::estimate_to_json(mc);
    report["expected_volume_closed"] = spectra::estimate_to_json(closed);
    report["agreement"] = agreement_json(mc, closed);
    report["asymptote"] = spectra::volume_asymptote();
    emit(report, o);
    return 0;
}

int run_boundary(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.circles == 0) o.circles = 2000;
    json report{{"config", config_json(o, "boundary", seed)}};
    report["config"]["grid"] = o.grid;
    report["config"]["closed_samples"] = o.closed_samples;
    const int workers = o.workers;
    if (!o.pencil_file.empty()) {
        const spectra::Pencil p = spectra::load_pencil(o.pencil_file);
        report["config"]["n"] = p.n;
        report["config"]["ell"] = p.ell;
        const spectra::CroftonEstimate ce =
            spectra::boundary_crofton(p, o.circles, o.grid, root.child(1), workers);
        json est = spectra::estimate_to_json(ce.estimate);
        est["discarded_circles"] = ce.discarded_circles;
        report["boundary_crofton"] = est;
        emit(report, o);
        return 0;
    }
    if (o.n < 1 || o.ell < 1) throw std::invalid_argument("boundary: --n and --ell are required");
    if (o.pencils == 0) o.pencils = 100;
    report["config"]["pencils"] = o.pencils;
    std::vector<double> per_pencil(o.pencils, 0.0);
    std::uint64_t discarded_total = 0;
    for (std::uint64_t i = 0; i < o.pencils; ++i) {
        const spectra::Pencil p = spectra::sample_pencil(o.n, o.ell, root.child(2 * i));
        const spectra::CroftonEstimate ce =
            spectra::boundary_crofton(p, o.circles, o.grid, root.child(2 * i + 1), workers);
        per_pencil[i] = ce.estimate.value;
        discarded_total += ce.discarded_circles;
    }
    const spectra::Estimate mc = spectra::mean_estimate(per_pencil, root);
    const spectra::Estimate closed = spectra::expected_boundary_closed(
        o.n, o.ell, o.closed_samples, root.child(2 * o.pencils), workers);
    const spectra::Estimate surface = spectra::expected_boundary_surface(
        o.n, o.ell, o.closed_samples, root.child(2 * o.pencils + 1), workers);
    json mc_json = spectra::estimate_to_json(mc);
    mc_json["discarded_circles"] = discarded_total;
    report["boundary_crofton"] = mc_json;
    report["expected_boundary_closed"] = spectra::estimate_to_json(closed);
    report["expected_boundary_surface"] = spectra::estimate_to_json(surface);
    report["agreement"] = agreement_json(mc, closed);
    report["agreement_surface"] = agreement_json(mc, surface);
    report["asymptote"] = spectra::boundary_asymptote(o.ell);
    emit(report, o);
    return 0;
}

// Shared by nodes and figure1: runs `trials` pencils at dimension n,
// returning per-trial reports plus the summary block, and optionally writes
// the histogram CSV. Inconclusive trials are excluded from the means;
// their fraction above 2% is a diagnostic failure.
json nodes_sweep(int n, std::uint64_t trials, const spectra::RngStream& root,
                 const spectra::NodeSearchConfig& cfg, const std::string& histogram_path,
                 bool keep_reports, bool& failed) {
    std::vector<int> rhos;
    std::vector<int> sigmas;
    json trial_reports = json::array();
    std::uint64_t inconclusive = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const spectra::Pencil p = spectra::sample_pencil(n, 3, root.child(i));
        const spectra::CountReport r = spectra::count_singular_points(p, cfg);
        if (keep_reports) {
            json jr = spectra::count_report_to_json(r);
            jr["diagnostic_flags"] = spectra::diagnostic_bounds(r, n);
            trial_reports.push_back(std::move(jr));
        }
        if (r.inconclusive) {
            ++inconclusive;
            continue;
        }
        rhos.push_back(r.rho);
        sigmas.push_back(r.sigma);
    }
    json out;
    out["n"] = n;
    out["trials"] = trials;
    out["inconclusive"] = inconclusive;
    if (!rhos.empty()) {
        std::vector<double> rho_d(rhos.begin(), rhos.end());
        std::vector<double> sigma_d(sigmas.begin(), sigmas.end());
        out["mean_rho"] = spectra::estimate_to_json(spectra::mean_estimate(rho_d, root));
        out["mean_sigma"] = spectra::estimate_to_json(spectra::mean_estimate(sigma_d, root));
        out["expected_rho"] = spectra::expected_rho(n);
    }
    if (keep_reports) out["reports"] = std::move(trial_reports);
    if (!histogram_path.empty()) {
        write_histogram_csv(histogram_path, rhos, sigmas);
        out["histogram"] = histogram_path;
    }
    if (inconclusive * 50 > trials) failed = true;  // more than 2%
    return out;
}

int run_nodes(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    spectra::NodeSearchConfig cfg;
    cfg.workers = o.workers;
    json report{{"config", config_json(o, "nodes", seed)}};
    report["config"]["node_search"] = spectra::node_config_to_json(cfg);
    if (!o.pencil_file.empty()) {
        const spectra::Pencil p = spectra::load_pencil(o.pencil_file);
        if (p.ell != 3) throw std::invalid_argument("nodes: pencil file must have ell = 3");
        const spectra::CountReport r = spectra::count_singular_points(p, cfg);
        json jr = spectra::count_report_to_json(r);
        jr["diagnostic_flags"] = spectra::diagnostic_bounds(r, p.n);
        report["report"] = std::move(jr);
        if (!o.histogram.empty()) {
            write_histogram_csv(o.histogram, {r.rho}, {r.sigma});
            report["histogram"] = o.histogram;
        }
        emit(report, o);
        return r.inconclusive ? 3 : 0;
    }
    if (o.n < 2) throw std::invalid_argument("nodes: --n >= 2 is required");
    if (o.trials == 0) o.trials = 1000;
    report["config"]["trials"] = o.trials;
    bool failed = false;
    report["result"] = nodes_sweep(o.n, o.trials, root, cfg, o.histogram, true, failed);
    emit(report, o);
    return failed ? 3 : 0;
}

int run_construction(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    if (o.n < 2) throw std::invalid_argument("construction: --n >= 2 is required");
    json report{{"config", config_json(o, "construction", seed)}};
    const spectra::DetConstruction c = spectra::det_construction(o.n, spectra::RngStream{seed, 0});
    const std::vector<spectra::SpherePoint> nodes = spectra::enumerate_construction_nodes(c);
    const long long expected = spectra::construction_node_count(o.n);
    json node_list = json::array();
    for (const auto& pt : nodes) node_list.push_back(pt.coords);
    json forms = json::array();
    for (const auto& f : c.forms) forms.push_back(f);
    report["forms"] = std::move(forms);
    report["expected_count"] = expected;
    report["count"] = nodes.size();
    report["nodes"] = std::move(node_list);
    report["verified"] = true;  // enumerate_construction_nodes throws otherwise
    emit(report, o);
    if (static_cast<long long>(nodes.size()) != expected)
        throw std::runtime_error("construction: node count does not match the formula");
    return 0;
}

int run_esigma(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.n == 0) o.n = 4;
    if (o.n < 2) throw std::invalid_argument("esigma: --n >= 2 is required");
    if (o.samples == 0) o.samples = 1000000;
    json report{{"config", config_json(o, "esigma", seed)}};
    report["config"]["samples"] = o.samples;
    const spectra::Estimate mc = spectra::expected_sigma_mc(o.n, o.samples, root.child(0), o.workers);
    report["expected_sigma_mc"] = spectra::estimate_to_json(mc);
    if (o.n == 4) {
        const double quad = spectra::quartic_sigma_quadrature();
        report["quartic_sigma_quadrature"] = quad;
        report["agreement"] = json{{"difference", mc.value - quad},
                                   {"within_3se", std::abs(mc.value - quad) <= 3.0 * mc.std_error}};
    }
    emit(report, o);
    return 0;
}

int run_figure1(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.trials == 0) o.trials = 1000;
    spectra::NodeSearchConfig cfg;
    cfg.workers = o.workers;
    json report{{"config", config_json(o, "figure1", seed)}};
    report["config"]["trials"] = o.trials;
    report["config"]["node_search"] = spectra::node_config_to_json(cfg);
    const std::string prefix = o.histogram.empty() ? "figure1" : o.histogram;
    bool failed = false;
    json results = json::array();
    for (int n : {4, 5, 6}) {
        const std::string path = prefix + "_n" + std::to_string(n) + ".csv";
        results.push_back(
            nodes_sweep(n, o.trials, root.child(static_cast<std::uint64_t>(n)), cfg, path, false, failed));
    }
    report["results"] = std::move(results);
    emit(report, o);
    return failed ? 3 : 0;
}

int run_concentration(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.samples == 0) o.samples = 2000;
    if (o.dims.empty()) o.dims = {8, 16, 32, 64, 128};
    json report{{"config", config_json(o, "concentration", seed)}};
    report["config"]["samples"] = o.samples;
    report["config"]["dims"] = o.dims;
    const auto rows = spectra::concentration_experiment(o.dims, o.samples, root, o.workers);
    json jrows = json::array();
    for (const auto& row : rows) {
        json jr = spectra::estimate_to_json(row.estimate);
        jr["n"] = row.n;
        jrows.push_back(std::move(jr));
    }
    report["rows"] = std::move(jrows);
    report["loglog_slope"] = spectra::loglog_slope(rows);
    emit(report, o);
    return 0;
}

int run_naive(CommonOpts& o) {
    const std::uint64_t seed = resolve_seed(o.seed);
    const spectra::RngStream root{seed, 0};
    if (o.n < 1 || o.ell < 1) throw std::invalid_argument("naive: --n and --ell are required");
    if (o.trials == 0) o.trials = 1000;
    json report{{"config", config_json(o, "naive", seed)}};
    report["config"]["trials"] = o.trials;
    report["config"]["restarts"] = o.restarts;
    const spectra::Estimate rate =
        spectra::naive_model_nonempty_rate(o.n, o.ell, o.trials, o.restarts, root, o.workers);
    report["nonempty_rate"] = spectra::estimate_to_json(rate);
    report["heuristic"] = true;
    report["bound_direction"] = "lower";  // ascent can miss the optimum, never invent one
    emit(report, o);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random spectrahedra: volume, boundary, and singular-point estimators"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* sub, bool needs_ell) {
        sub->add_option("--seed", o.seed, "master seed (default: fresh random value, echoed in output)");
        sub->add_option("--workers", o.workers, "worker threads (default: SPECTRA_WORKERS or hardware)");
        sub->add_option("--out", o.out, "output file (default: stdout)");
        sub->add_option("--format", o.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        if (needs_ell) sub->add_option("--ell", o.ell, "number of pencil matrices");
    };

    CLI::App* volume = app.add_subcommand("volume", "spectrahedron volume: Monte Carlo vs closed form");
    volume->add_option("--n", o.n, "matrix dimension");
    volume->add_option("--samples", o.samples, "sphere samples per pencil (default 100000)");
    volume->add_option("--pencils", o.pencils, "number of random pencils (default 200)");
    volume->add_option("--closed-samples", o.closed_samples, "GOE draws for the closed form (default 10000)");
    volume->add_option("--pencil-file", o.pencil_file, "run on a fixed pencil from a JSON file");
    add_common(volume, true);

    CLI::App* boundary = app.add_subcommand("boundary", "boundary volume: great-circle estimator vs closed form");
    boundary->add_option("--n", o.n, "matrix dimension");
    boundary->add_option("--circles", o.circles, "great circles per pencil (default 2000)");
    boundary->add_option("--grid", o.grid, "grid points per circle (default 1024, min 64)");
    boundary->add_option("--pencils", o.pencils, "number of random pencils (default 100)");
    boundary->add_option("--closed-samples", o.closed_samples, "GOE draws for the closed form (default 10000)");
    boundary->add_option("--pencil-file", o.pencil_file, "run on a fixed pencil from a JSON file");
    add_common(boundary, true);

    CLI::App* nodes = app.add_subcommand("nodes", "count symmetroid singular points over random pencils (ell = 3)");
    nodes->add_option("--n", o.n, "matrix dimension");
    nodes->add_option("--trials", o.trials, "number of random pencils (default 1000)");
    nodes->add_option("--histogram", o.histogram, "write rho / doubled-sigma histogram CSV here");
    nodes->add_option("--pencil-file", o.pencil_file, "count on a fixed pencil from a JSON file");
    add_common(nodes, false);

    CLI::App* construction = app.add_subcommand("construction", "deterministic pencil with the maximal node count");
    construction->add_option("--n", o.n, "matrix dimension");
    add_common(construction, false);

    CLI::App* esigma = app.add_subcommand("esigma", "expected boundary singular-point count");
    esigma->add_option("--n", o.n, "matrix dimension (default 4)");
    esigma->add_option("--samples", o.samples, "Monte Carlo samples (default 1000000)");
    add_common(esigma, false);

    CLI::App* figure1 = app.add_subcommand("figure1", "full n in {4,5,6} singular-point sweep with histograms");
    figure1->add_option("--trials", o.trials, "pencils per dimension (default 1000)");
    figure1->add_option("--histogram", o.histogram, "histogram CSV path prefix (default figure1)");
    add_common(figure1, false);

    CLI::App* concentration = app.add_subcommand("concentration", "decay of |scaled minimal eigenvalue + 1| with n");
    concentration->add_option("--samples", o.samples, "GOE draws per dimension (default 2000)");
    concentration->add_option("--dims", o.dims, "dimensions to test (default 8 16 32 64 128)");
    add_common(concentration, false);

    CLI::App* naive = app.add_subcommand("naive", "span-model (no identity) nonemptiness rate");
    naive->add_option("--n", o.n, "matrix dimension");
    naive->add_option("--trials", o.trials, "random span draws (default 1000)");
    naive->add_option("--restarts", o.restarts, "ascent restarts per trial (default 64)");
    add_common(naive, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (volume->parsed()) return run_volume(o);
        if (boundary->parsed()) return run_boundary(o);
        if (nodes->parsed()) return run_nodes(o);
        if (construction->parsed()) return run_construction(o);
        if (esigma->parsed()) return run_esigma(o);
        if (figure1->parsed()) return run_figure1(o);
        if (concentration->parsed()) return run_concentration(o);
        if (naive->parsed()) return run_naive(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
