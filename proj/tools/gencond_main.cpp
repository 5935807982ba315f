// Command-line front end: charts, genericity verdicts, geodesic scans,
// fiber-map verification and Monte Carlo censuses with reproducible seeds.
//
// Exit codes: 0 success (verdicts are data, not failures), 1 verification
// mismatch, 2 usage or input error.

#include <cctype>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gencond/chart.hpp"
#include "gencond/errors.hpp"
#include "gencond/experiments.hpp"
#include "gencond/fibercheck.hpp"
#include "gencond/genericity.hpp"
#include "gencond/geometry.hpp"
#include "gencond/tensor.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_csv_numbers(const std::string& text, const std::string& flag,
                                      int expected) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument("trailing characters");
            out.push_back(v);
        } catch (const std::exception&) {
            throw gencond::DomainError(flag + ": malformed number '" + item + "'");
        }
    }
    if (expected >= 0 && static_cast<int>(out.size()) != expected)
        throw gencond::DomainError(flag + ": expected " + std::to_string(expected) +
                                   " comma-separated numbers, got " +
                                   std::to_string(out.size()));
    return out;
}

gencond::expr::Chart resolve_chart(const std::string& catalog_id, const std::string& chart_file) {
    if (!catalog_id.empty() && !chart_file.empty())
        throw gencond::DomainError("give either --catalog or --chart, not both");
    if (!chart_file.empty()) return gencond::expr::load_chart_file(chart_file);
    if (!catalog_id.empty()) return gencond::experiments::catalog_chart(catalog_id);
    throw gencond::DomainError("a chart is required: --catalog <id> or --chart <file>");
}

struct PerturbOption {
    bool given = false;
    gencond::experiments::PerturbationSpec spec;
};

PerturbOption parse_perturb(const std::string& text) {
    PerturbOption p;
    if (text.empty()) return p;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
        throw gencond::DomainError("--perturb: expected amplitude:degree:seed, got '" + text + "'");
    try {
        p.spec.amplitude = std::stod(parts[0]);
        p.spec.degree = std::stoi(parts[1]);
        p.spec.seed = std::stoull(parts[2]);
    } catch (const std::exception&) {
        throw gencond::DomainError("--perturb: expected amplitude:degree:seed, got '" + text + "'");
    }
    p.given = true;
    return p;
}

std::uint64_t ensure_seed(bool seed_given, std::uint64_t seed, const PerturbOption& perturb) {
    if (seed_given) return seed;
    if (perturb.given) {
        std::cout << "seed " << perturb.spec.seed << " (from --perturb; pass --seed to override)\n";
        return perturb.spec.seed;
    }
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cout << "seed " << s << " (generated; pass --seed to reproduce)\n";
    return s;
}

void emit(const json& j, const std::string& format, const std::string& output_path) {
    if (format != "json") return;
    if (output_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(output_path);
        if (!out) throw gencond::Error("cannot open output file '" + output_path + "'");
        out << j.dump(2) << "\n";
    }
}

json verdict_to_json(const gencond::genericity::GenericityVerdict& v, const std::string& chart_id,
                     const std::vector<double>& point) {
    return json{{"schema", "gencond.verdict.v1"},
                {"chart", chart_id},
                {"point", point},
                {"vector", v.vector_components},
                {"causal_character", gencond::geometry::causal_class_name(v.causal_class)},
                {"magnitudes", v.magnitudes},
                {"generic", v.generic},
                {"r_nongeneric", v.r_nongeneric},
                {"r", v.r},
                {"tol", v.tol}};
}

int cmd_check_vector(const std::string& catalog_id, const std::string& chart_file,
                     const std::string& point_text, const std::string& vector_text, int r,
                     double tol, const std::string& format, const std::string& output_path) {
    gencond::expr::Chart chart = resolve_chart(catalog_id, chart_file);
    std::vector<double> p = parse_csv_numbers(point_text, "--point", chart.dim());
    std::vector<double> xc = parse_csv_numbers(vector_text, "--vector", chart.dim());
    chart.require_in_region(p);
    gencond::geometry::MetricJet mj = gencond::geometry::metric_jet(chart, p, r + 2);
    gencond::geometry::TangentVector X =
        gencond::geometry::TangentVector::classify(p, xc, mj.base_value());
    gencond::genericity::GenericityVerdict v = gencond::genericity::is_r_nongeneric(X, mj, r, tol);

    if (format == "json") {
        emit(verdict_to_json(v, chart.name(), p), format, output_path);
        return 0;
    }
    std::cout << "chart " << chart.name() << "\n";
    std::cout << "causal character: " << gencond::geometry::causal_class_name(v.causal_class)
              << "\n";
    std::cout << "magnitudes:";
    for (double m : v.magnitudes) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.12g", m);
        std::cout << buf;
    }
    std::cout << "\n";
    std::cout << "generic: " << (v.generic ? "yes" : "no") << "\n";
    std::cout << r << "-nongeneric: " << (v.r_nongeneric ? "yes" : "no") << " (tol " << v.tol
              << ")\n";
    return 0;
}

int cmd_scan_geodesic(const std::string& catalog_id, const std::string& chart_file,
                      const std::string& perturb_text, const std::string& point_text,
                      const std::string& velocity_text, double t_end, double step, int r,
                      double tol, const std::string& format, const std::string& output_path,
                      const std::string& trace_csv) {
    PerturbOption perturb = parse_perturb(perturb_text);
    gencond::expr::Chart chart = (catalog_id.empty() && chart_file.empty() && perturb.given)
                                     ? gencond::experiments::catalog_chart("minkowski4")
                                     : resolve_chart(catalog_id, chart_file);
    if (perturb.given) chart = gencond::experiments::perturb_metric(chart, perturb.spec);
    std::vector<double> p = parse_csv_numbers(point_text, "--point", chart.dim());
    std::vector<double> xc = parse_csv_numbers(velocity_text, "--velocity", chart.dim());
    chart.require_in_region(p);
    gencond::geometry::TangentVector X0 = gencond::geometry::TangentVector::classify(
        p, xc, gencond::tensor::Sym2::from_row_major(chart.dim(), chart.metric_value(p)));
    gencond::genericity::ScanResult res =
        gencond::genericity::scan_geodesic(chart, X0, t_end, step, r, tol);

    if (!trace_csv.empty()) {
        std::ofstream out(trace_csv);
        if (!out) throw gencond::Error("cannot open trace file '" + trace_csv + "'");
        gencond::geometry::write_trace_csv(out, res.trace, chart.coordinates());
    }

    const gencond::genericity::ScanReport& rep = res.report;
    if (format == "json") {
        json runs = json::array();
        for (const auto& run : rep.runs)
            runs.push_back(
                {{"begin", run.begin}, {"length", run.length}, {"plateau", run.plateau}});
        json j{{"schema", "gencond.scan.v1"},
               {"chart", chart.name()},
               {"t_end", t_end},
               {"step", step},
               {"sample_count", rep.sample_count},
               {"generic_found", rep.any_generic},
               {"generic_count", rep.generic_count},
               {"dip_count", rep.dip_count},
               {"plateau_count", rep.plateau_count},
               {"runs", runs},
               {"r", rep.r},
               {"r_nongeneric_count", rep.r_nongeneric_count},
               {"tol", rep.tol},
               {"truncated", res.trace.truncated},
               {"steps_taken", res.trace.steps_taken},
               {"max_norm_drift", res.trace.max_norm_drift},
               {"window_note", rep.window_note}};
        emit(j, format, output_path);
        return 0;
    }
    std::cout << "chart " << chart.name() << "\n";
    std::cout << "samples " << rep.sample_count << " (t in [0, " << t_end << "], step " << step
              << ")\n";
    std::cout << "generic point found: " << (rep.any_generic ? "yes" : "no") << "; "
              << rep.plateau_count << " plateau" << (rep.plateau_count == 1 ? "" : "s");
    if (!rep.any_generic && rep.plateau_count == 1 && !rep.runs.empty() &&
        rep.runs.front().length == rep.sample_count)
        std::cout << " (plateau over full window)";
    std::cout << "\n";
    std::cout << "generic samples " << rep.generic_count << " / " << rep.sample_count << ", dips "
              << rep.dip_count << "\n";
    if (rep.r >= 1)
        std::cout << rep.r << "-nongeneric samples " << rep.r_nongeneric_count << " / "
                  << rep.sample_count << "\n";
    std::cout << "truncated: " << (res.trace.truncated ? "yes" : "no") << "\n";
    std::cout << "note: " << rep.window_note << "\n";
    return 0;
}

json fiber_report_to_json(const gencond::fibercheck::FiberMapReport& rep) {
    return json{{"causal_class", gencond::fibercheck::fiber_class_name(rep.causal_class)},
                {"rows", rep.rows},
                {"cols", rep.cols},
                {"rank", rep.rank},
                {"expected_rank", rep.expected_rank},
                {"codim_computed", rep.codim_computed},
                {"codim_expected", rep.codim_expected},
                {"pass", rep.pass}};
}

void print_fiber_report(const gencond::fibercheck::FiberMapReport& rep) {
    std::cout << "  " << gencond::fibercheck::fiber_class_name(rep.causal_class) << ": rank "
              << rep.rank << " (expected " << rep.expected_rank << "), codim "
              << rep.codim_computed << " (expected " << rep.codim_expected << ") -> "
              << (rep.pass ? "pass" : "FAIL") << "\n";
}

int cmd_verify(int n, int r, const std::string& format, const std::string& output_path) {
    if (n < 2 || n > 6) throw gencond::DomainError("--n must be in [2, 6]");
    if (r < 1 || r > 6) throw gencond::DomainError("--r must be in [1, 6]");

    gencond::fibercheck::SurjectivityReport surj =
        gencond::fibercheck::verify_surjectivity(n, r, 25, 1);
    std::vector<gencond::fibercheck::FiberMapReport> fibers =
        gencond::fibercheck::verify_codim(n, r, 5, 1);

    bool pass = surj.pass;
    for (const auto& rep : fibers) pass = pass && rep.pass;

    bool have_threshold = n >= 3;
    int threshold = 0;
    json dim_json;
    if (have_threshold) {
        threshold = gencond::fibercheck::r_threshold(n);
        gencond::fibercheck::DimCheckReport dim = gencond::fibercheck::dim_check(n, r);
        pass = pass && dim.pass;
        dim_json = json{{"tangent_dim", dim.tangent_dim},
                        {"codim_non_null", dim.codim_non_null},
                        {"codim_null", dim.codim_null},
                        {"pass_non_null", dim.pass_non_null},
                        {"pass_null", dim.pass_null},
                        {"pass", dim.pass}};
        if (format != "json") {
            std::cout << "fiber map rank " << surj.rank << " / " << surj.expected_rank
                      << ", right-inverse residual " << surj.max_right_inverse_residual << " -> "
                      << (surj.pass ? "pass" : "FAIL") << "\n";
            for (const auto& rep : fibers) print_fiber_report(rep);
            std::cout << "codims (" << dim.codim_non_null << ", " << dim.codim_null
                      << "), threshold " << threshold << ", tangent dim " << dim.tangent_dim
                      << (dim.pass ? " < both"
                                   : (dim.pass_non_null ? " >= null codim" : " >= both"))
                      << " -> " << (dim.pass ? "pass" : "FAIL") << "\n";
        }
    } else if (format != "json") {
        std::cout << "fiber map rank " << surj.rank << " / " << surj.expected_rank
                  << ", right-inverse residual " << surj.max_right_inverse_residual << " -> "
                  << (surj.pass ? "pass" : "FAIL") << "\n";
        for (const auto& rep : fibers) print_fiber_report(rep);
        std::cout << "threshold undefined for n = 2 (codimension never exceeds the tangent "
                     "dimension)\n";
    }

    if (format == "json") {
        json fj = json::array();
        for (const auto& rep : fibers) fj.push_back(fiber_report_to_json(rep));
        json j{{"schema", "gencond.verify.v1"},
               {"n", n},
               {"r", r},
               {"surjectivity",
                json{{"rows", surj.rows},
                     {"cols", surj.cols},
                     {"rank", surj.rank},
                     {"expected_rank", surj.expected_rank},
                     {"trials", surj.trials},
                     {"max_right_inverse_residual", surj.max_right_inverse_residual},
                     {"pass", surj.pass}}},
               {"fiber_maps", fj},
               {"pass", pass}};
        if (have_threshold) {
            j["r_threshold"] = threshold;
            j["dim_check"] = dim_json;
        }
        emit(j, format, output_path);
    } else {
        std::cout << (pass ? "verify: pass" : "verify: FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

int cmd_verify_surjectivity(int n, int r, int trials, std::uint64_t seed,
                            const std::string& format, const std::string& output_path) {
    gencond::fibercheck::SurjectivityReport rep =
        gencond::fibercheck::verify_surjectivity(n, r, trials, seed);
    if (format == "json") {
        json j{{"schema", "gencond.surjectivity.v1"},
               {"n", rep.n},
               {"r", rep.r},
               {"rows", rep.rows},
               {"cols", rep.cols},
               {"rank", rep.rank},
               {"expected_rank", rep.expected_rank},
               {"trials", rep.trials},
               {"max_right_inverse_residual", rep.max_right_inverse_residual},
               {"pass", rep.pass}};
        emit(j, format, output_path);
    } else {
        std::cout << "n " << rep.n << ", r " << rep.r << ": matrix " << rep.rows << "x" << rep.cols
                  << ", rank " << rep.rank << " (expected " << rep.expected_rank << ")\n";
        std::cout << "right-inverse residual over " << rep.trials << " trials: "
                  << rep.max_right_inverse_residual << "\n";
        std::cout << (rep.pass ? "pass" : "FAIL") << "\n";
    }
    return rep.pass ? 0 : 1;
}

int cmd_verify_codim(int n, int r, int trials, std::uint64_t seed, const std::string& format,
                     const std::string& output_path) {
    std::vector<gencond::fibercheck::FiberMapReport> reps =
        gencond::fibercheck::verify_codim(n, r, trials, seed);
    bool pass = true;
    for (const auto& rep : reps) pass = pass && rep.pass;
    if (format == "json") {
        json fj = json::array();
        for (const auto& rep : reps) fj.push_back(fiber_report_to_json(rep));
        json j{{"schema", "gencond.codim.v1"},
               {"n", n},
               {"r", r},
               {"trials", trials},
               {"seed", seed},
               {"fiber_maps", fj},
               {"pass", pass}};
        emit(j, format, output_path);
    } else {
        std::cout << "n " << n << ", r " << r << ", " << trials << " trials per class:\n";
        for (const auto& rep : reps) print_fiber_report(rep);
        std::cout << (pass ? "pass" : "FAIL") << "\n";
    }
    return pass ? 0 : 1;
}

json census_to_json(const gencond::experiments::CensusReport& rep) {
    auto tally = [](const gencond::experiments::ClassTally& t) {
        return json{{"samples", t.samples}, {"generic", t.generic}, {"r_nongeneric", t.r_nongeneric}};
    };
    return json{{"schema", "gencond.census.v1"},
                {"chart", rep.chart_id},
                {"n_points", rep.n_points},
                {"r", rep.r},
                {"tol", rep.tol},
                {"seed", rep.seed},
                {"timelike", tally(rep.timelike)},
                {"null", tally(rep.null_class)},
                {"spacelike", tally(rep.spacelike)},
                {"total_samples", rep.total_samples()},
                {"generic_fraction", rep.generic_fraction()},
                {"r_nongeneric_count", rep.r_nongeneric_count()}};
}

int cmd_census(const std::string& catalog_id, const std::string& chart_file,
               const std::string& perturb_text, int n_samples, int r, double tol, bool seed_given,
               std::uint64_t seed, const std::string& format, const std::string& output_path,
               const std::string& samples_csv) {
    PerturbOption perturb = parse_perturb(perturb_text);
    gencond::expr::Chart chart = (catalog_id.empty() && chart_file.empty())
                                     ? gencond::experiments::catalog_chart("minkowski4")
                                     : resolve_chart(catalog_id, chart_file);
    if (perturb.given) chart = gencond::experiments::perturb_metric(chart, perturb.spec);
    std::uint64_t s = ensure_seed(seed_given, seed, perturb);

    std::vector<gencond::experiments::CensusSample> samples;
    gencond::experiments::CensusReport rep = gencond::experiments::genericity_census(
        chart, n_samples, r, s, tol, samples_csv.empty() ? nullptr : &samples);

    if (!samples_csv.empty()) {
        std::ofstream out(samples_csv);
        if (!out) throw gencond::Error("cannot open samples file '" + samples_csv + "'");
        gencond::experiments::write_census_csv(out, chart, samples);
    }

    if (format == "json") {
        emit(census_to_json(rep), format, output_path);
        return 0;
    }
    auto line = [&](const char* label, const gencond::experiments::ClassTally& t) {
        std::cout << "  " << label << ": " << t.samples << " samples, " << t.generic
                  << " generic, " << t.r_nongeneric << " " << rep.r << "-nongeneric\n";
    };
    std::cout << "chart " << rep.chart_id << "\n";
    std::cout << "points " << rep.n_points << ", vectors " << rep.total_samples() << ", r "
              << rep.r << ", tol " << rep.tol << ", seed " << rep.seed << "\n";
    line("timelike", rep.timelike);
    line("null", rep.null_class);
    line("spacelike", rep.spacelike);
    std::cout << "generic fraction " << rep.generic_fraction() << "\n";
    std::cout << rep.r << "-nongeneric count " << rep.r_nongeneric_count() << "\n";
    return 0;
}

int cmd_catalog(const std::string& id, const std::string& format,
                const std::string& output_path) {
    const std::vector<gencond::experiments::CatalogEntry>& entries =
        gencond::experiments::catalog();
    if (!id.empty()) {
        for (const auto& e : entries)
            if (e.chart.name() == id) {
                if (format == "json") {
                    json j{{"schema", "gencond.catalog.v1"},
                           {"charts",
                            json::array({json{{"name", e.chart.name()},
                                              {"dimension", e.chart.dim()},
                                              {"coordinates", e.chart.coordinates()},
                                              {"text", e.chart.to_text()},
                                              {"note", e.note}}})}};
                    emit(j, format, output_path);
                } else {
                    std::cout << e.chart.to_text();
                    std::cout << "# " << e.note << "\n";
                }
                return 0;
            }
        throw gencond::DomainError("unknown catalog chart '" + id + "'");
    }
    if (format == "json") {
        json charts = json::array();
        for (const auto& e : entries)
            charts.push_back(json{{"name", e.chart.name()},
                                  {"dimension", e.chart.dim()},
                                  {"coordinates", e.chart.coordinates()},
                                  {"text", e.chart.to_text()},
                                  {"note", e.note}});
        emit(json{{"schema", "gencond.catalog.v1"}, {"charts", charts}}, format, output_path);
        return 0;
    }
    for (const auto& e : entries) {
        std::cout << e.chart.name() << " (n = " << e.chart.dim() << "; coordinates";
        for (const auto& c : e.chart.coordinates()) std::cout << " " << c;
        std::cout << ")\n    " << e.note << "\n";
    }
    return 0;
}

int cmd_threshold(int n, const std::string& format, const std::string& output_path) {
    std::vector<int> ns;
    if (n > 0) {
        if (n < 3) throw gencond::DomainError("--n must be >= 3 for the threshold");
        ns.push_back(n);
    } else {
        ns = {3, 4, 5, 6};
    }
    json rows = json::array();
    for (int nn : ns) {
        int thr = gencond::fibercheck::r_threshold(nn);
        gencond::fibercheck::DimCheckReport dim = gencond::fibercheck::dim_check(nn, thr);
        rows.push_back(json{{"n", nn},
                            {"r_threshold", thr},
                            {"tangent_dim", dim.tangent_dim},
                            {"codim_non_null", dim.codim_non_null},
                            {"codim_null", dim.codim_null},
                            {"pass", dim.pass}});
        if (format != "json")
            std::cout << "n " << nn << ": smallest sufficient r = " << thr << "; at that r codims ("
                      << dim.codim_non_null << ", " << dim.codim_null << ") both exceed 2n = "
                      << dim.tangent_dim << (dim.pass ? "" : "  [FAIL]") << "\n";
    }
    emit(json{{"schema", "gencond.threshold.v1"}, {"rows", rows}}, format, output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generic-condition laboratory: curvature from metric jets, genericity "
                 "verdicts, fiber-map verification, Monte Carlo censuses"};
    app.require_subcommand(1);
    argv = app.ensure_utf8(argv);

    std::string catalog_id, chart_file, point_text, vector_text, velocity_text;
    std::string format = "human", output_path, trace_csv, samples_csv, perturb_text, show_id;
    int r = 0, n = 0, trials = 0, n_samples = 100;
    double tol = 1e-10, t_end = 1.0, step = 0.01;
    std::uint64_t seed = 1;
    bool seed_given = false;

    auto add_chart_opts = [&](CLI::App* sub) {
        sub->add_option("--catalog", catalog_id, "built-in chart id (see the catalog subcommand)");
        sub->add_option("--chart", chart_file, "chart file path");
    };
    auto add_format_opts = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"human", "json"}));
        sub->add_option("--output", output_path, "write json output to this file");
    };

    CLI::App* check = app.add_subcommand(
        "check-vector", "genericity verdict for one tangent vector at one point");
    add_chart_opts(check);
    check->add_option("--point", point_text, "comma-separated point coordinates")->required();
    check->add_option("--vector", vector_text, "comma-separated vector components")->required();
    check->add_option("--r", r, "test r-nongenericity for this r (default 0: generic test only)");
    check->add_option("--tol", tol, "vanishing tolerance")->check(CLI::PositiveNumber);
    add_format_opts(check);

    CLI::App* scan = app.add_subcommand(
        "scan-geodesic", "integrate a geodesic and scan the genericity magnitude along it");
    add_chart_opts(scan);
    scan->add_option("--perturb", perturb_text,
                     "perturb the base chart: amplitude:degree:seed (base defaults to minkowski4)");
    scan->add_option("--point", point_text, "comma-separated start point")->required();
    scan->add_option("--velocity", velocity_text, "comma-separated initial velocity")->required();
    scan->add_option("--t-end", t_end, "integration window end (default 1)")
        ->check(CLI::PositiveNumber);
    scan->add_option("--step", step, "integration step (default 0.01)")
        ->check(CLI::PositiveNumber);
    scan->add_option("--r", r, "also count r-nongeneric samples for this r");
    scan->add_option("--tol", tol, "vanishing tolerance")->check(CLI::PositiveNumber);
    scan->add_option("--trace-csv", trace_csv, "write the annotated trace to this CSV file");
    add_format_opts(scan);

    CLI::App* verify = app.add_subcommand(
        "verify", "full fiber-map verification: surjectivity, codimensions, dimension check");
    verify->add_option("--n", n, "manifold dimension (2..6)")->required();
    verify->add_option("--r", r, "derivative count (1..4)")->required();
    add_format_opts(verify);

    CLI::App* vsurj = app.add_subcommand(
        "verify-surjectivity", "rank of the fiber map and right-inverse residual");
    vsurj->add_option("--n", n, "manifold dimension")->required()->check(CLI::Range(2, 6));
    vsurj->add_option("--r", r, "derivative count")->required()->check(CLI::Range(1, 6));
    vsurj->add_option("--trials", trials, "random right-inverse trials (default 100)");
    vsurj->add_option("--seed", seed, "RNG seed");
    add_format_opts(vsurj);

    CLI::App* vcodim = app.add_subcommand(
        "verify-codim", "rank of the restricted curvature map over random metrics and vectors");
    vcodim->add_option("--n", n, "manifold dimension")->required()->check(CLI::Range(3, 6));
    vcodim->add_option("--r", r, "derivative count")->required()->check(CLI::Range(1, 6));
    vcodim->add_option("--trials", trials, "random (g, X) draws per causal class (default 20)");
    vcodim->add_option("--seed", seed, "RNG seed");
    add_format_opts(vcodim);

    CLI::App* census = app.add_subcommand(
        "census", "sample points and causal vectors, tally genericity verdicts");
    add_chart_opts(census);
    census->add_option("--perturb", perturb_text,
                       "perturb the base chart: amplitude:degree:seed (base defaults to "
                       "minkowski4)");
    census->add_option("--n-samples", n_samples, "number of sample points (default 100)")
        ->check(CLI::PositiveNumber);
    census->add_option("--r", r, "r-nongenericity order (default 1)");
    census->add_option("--tol", tol, "vanishing tolerance")->check(CLI::PositiveNumber);
    CLI::Option* census_seed = census->add_option("--seed", seed, "census seed");
    census->add_option("--samples-csv", samples_csv, "write the per-sample dump to this CSV file");
    add_format_opts(census);

    CLI::App* cat = app.add_subcommand("catalog", "list the built-in charts");
    cat->add_option("--id", show_id, "print one chart's file text instead of the list");
    add_format_opts(cat);

    CLI::App* thr = app.add_subcommand(
        "threshold", "smallest derivative count whose codimensions exceed the tangent dimension");
    thr->add_option("--n", n, "single dimension (default: table for n = 3..6)");
    add_format_opts(thr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return cmd_check_vector(catalog_id, chart_file, point_text, vector_text, r, tol,
                                    format, output_path);
        if (scan->parsed())
            return cmd_scan_geodesic(catalog_id, chart_file, perturb_text, point_text,
                                     velocity_text, t_end, step, r, tol, format, output_path,
                                     trace_csv);
        if (verify->parsed()) return cmd_verify(n, r, format, output_path);
        if (vsurj->parsed())
            return cmd_verify_surjectivity(n, r, trials > 0 ? trials : 100, seed, format,
                                           output_path);
        if (vcodim->parsed())
            return cmd_verify_codim(n, r, trials > 0 ? trials : 20, seed, format, output_path);
        if (census->parsed()) {
            seed_given = census_seed->count() > 0;
            if (r == 0 && census->get_option("--r")->count() == 0) r = 1;
            return cmd_census(catalog_id, chart_file, perturb_text, n_samples, r, tol, seed_given,
                              seed, format, output_path, samples_csv);
        }
        if (cat->parsed()) return cmd_catalog(show_id, format, output_path);
        if (thr->parsed()) return cmd_threshold(n, format, output_path);
    } catch (const gencond::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
