// pcsmooth: point-cloud smoothing pipeline.
//
// Subcommands cover the full workflow: generate a synthetic surface, corrupt
// it with seeded Gaussian noise, smooth it (projection onto local polynomial
// fits, optionally across a worker pool), run the locally optimal projection,
// measure deviation against a reference, and benchmark worker scaling.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numerical
// failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pcs/bench.hpp"
#include "pcs/io.hpp"
#include "pcs/lop.hpp"
#include "pcs/metrics.hpp"
#include "pcs/mls.hpp"
#include "pcs/noise.hpp"
#include "pcs/parallel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void print_param(std::ostream& out, const std::string& key, const std::string& value) {
    out << "  " << key << " = " << value << "\n";
}

std::string summary_line(const pcs::SmoothingSummary& s) {
    std::string line = "full=" + std::to_string(s.full) +
                       " degraded=" + std::to_string(s.degraded_degree) +
                       " plane_only=" + std::to_string(s.plane_only) +
                       " skipped=" + std::to_string(s.skipped) +
                       " plane_no_convergence=" + std::to_string(s.plane_no_convergence);
    if (s.coverage_fallbacks > 0)
        line += " coverage_fallbacks=" + std::to_string(s.coverage_fallbacks);
    return line;
}

// Optional override of extension-based format inference, applied to every
// cloud file of the subcommand. The two flags are mutually exclusive.
struct FormatOverride {
    bool xyz = false;
    bool ply = false;

    pcs::PointCloud read(const std::string& path) const {
        if (xyz) return pcs::read_cloud(path, pcs::CloudFormat::Xyz);
        if (ply) return pcs::read_cloud(path, pcs::CloudFormat::PlyAscii);
        return pcs::read_cloud(path);
    }

    void write(const pcs::PointCloud& cloud, const std::string& path) const {
        if (xyz) pcs::write_cloud(cloud, path, pcs::CloudFormat::Xyz);
        else if (ply) pcs::write_cloud(cloud, path, pcs::CloudFormat::PlyAscii);
        else pcs::write_cloud(cloud, path);
    }

    const char* name() const { return xyz ? "xyz" : (ply ? "ply" : "by extension"); }
};

void add_format_flags(CLI::App* cmd, FormatOverride& fmt) {
    auto* xyz = cmd->add_flag("--xyz", fmt.xyz, "Treat all cloud files as XYZ");
    auto* ply = cmd->add_flag("--ply", fmt.ply, "Treat all cloud files as ASCII PLY");
    xyz->excludes(ply);
    ply->excludes(xyz);
}

struct GenerateArgs {
    std::string kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string output;
    FormatOverride format;
};

struct NoiseArgs {
    FormatOverride format;
    std::string input;
    std::string output;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SmoothArgs {
    FormatOverride format;
    std::string input;
    std::string output;
    double radius = 0.0;
    int degree = 2;
    std::size_t workers = 1;
    double cutoff = 3.0;
    double plane_tol = 1e-10;
    int max_iter = 50;
};

struct LopArgs {
    FormatOverride format;
    std::string data;
    std::string init;
    std::string output;
    double radius = 0.0;
    double mu = 0.4;
    int iterations = 30;
};

struct MetricsArgs {
    FormatOverride format;
    std::string input;
    std::string reference;
    bool mesh = false;
    std::string out;
};

struct BenchArgs {
    FormatOverride format;
    std::string input;
    std::vector<std::size_t> workers;
    int reps = 5;
    double radius = 0.0;
    int degree = 2;
    double cutoff = 3.0;
    std::string csv;
};

int run_generate(const GenerateArgs& args) {
    pcs::SyntheticSurface surface;
    if (args.kind == "plane") surface.kind = pcs::SurfaceKind::Plane;
    else if (args.kind == "sphere") surface.kind = pcs::SurfaceKind::Sphere;
    else if (args.kind == "torus") surface.kind = pcs::SurfaceKind::Torus;
    else surface.kind = pcs::SurfaceKind::GaussianBump;
    surface.n = args.n;
    surface.seed = args.seed;

    std::cerr << "generate:\n";
    print_param(std::cerr, "kind", args.kind);
    print_param(std::cerr, "n", std::to_string(args.n));
    print_param(std::cerr, "seed", std::to_string(args.seed));
    print_param(std::cerr, "output", args.output);
    print_param(std::cerr, "format", args.format.name());

    args.format.write(pcs::generate_surface(surface), args.output);
    return kExitOk;
}

int run_noise(const NoiseArgs& args) {
    std::cerr << "noise:\n";
    print_param(std::cerr, "input", args.input);
    print_param(std::cerr, "output", args.output);
    print_param(std::cerr, "sigma", pcs::format_double(args.sigma));
    print_param(std::cerr, "seed", std::to_string(args.seed));

    const pcs::PointCloud cloud = args.format.read(args.input);
    args.format.write(pcs::add_noise(cloud, pcs::NoiseParams{args.sigma, args.seed}),
                      args.output);
    return kExitOk;
}

int run_smooth(const SmoothArgs& args) {
    pcs::MlsParams params;
    params.kernel.h = args.radius;
    params.kernel.cutoff_multiple = args.cutoff;
    params.degree = args.degree;
    params.plane_tol = args.plane_tol;
    params.plane_max_iter = args.max_iter;
    params.validate();

    std::cerr << "smooth:\n";
    print_param(std::cerr, "input", args.input);
    print_param(std::cerr, "output", args.output);
    print_param(std::cerr, "radius (kernel bandwidth h)", pcs::format_double(args.radius));
    print_param(std::cerr, "cutoff (support = radius * cutoff)", pcs::format_double(args.cutoff));
    print_param(std::cerr, "degree", std::to_string(args.degree));
    print_param(std::cerr, "workers", std::to_string(args.workers));
    print_param(std::cerr, "plane-tol", pcs::format_double(args.plane_tol));
    print_param(std::cerr, "max-iter", std::to_string(args.max_iter));

    const pcs::PointCloud cloud = args.format.read(args.input);
    const auto [smoothed, summary] = pcs::parallel_smooth(cloud, params, args.workers);
    std::cerr << "summary: " << summary_line(summary) << "\n";
    if (!cloud.empty() && summary.total() == summary.skipped)
        throw pcs::NumericalFailure("no point could be projected; check --radius against "
                                    "the cloud's sampling density");
    args.format.write(smoothed, args.output);
    return kExitOk;
}

int run_lop(const LopArgs& args) {
    pcs::LopParams params;
    params.kernel.h = args.radius;
    params.mu = args.mu;
    params.iterations = args.iterations;
    params.validate();

    std::cerr << "lop:\n";
    print_param(std::cerr, "data", args.data);
    print_param(std::cerr, "init", args.init);
    print_param(std::cerr, "output", args.output);
    print_param(std::cerr, "radius (kernel bandwidth h)", pcs::format_double(args.radius));
    print_param(std::cerr, "mu", pcs::format_double(args.mu));
    print_param(std::cerr, "iterations", std::to_string(args.iterations));

    const pcs::PointCloud data = args.format.read(args.data);
    const pcs::PointCloud init = args.format.read(args.init);
    const auto [projected, summary] = pcs::lop_project(data, init, params);
    std::cerr << "summary: iterations=" << summary.iterations_run
              << " converged=" << (summary.converged ? "yes" : "no")
              << " isolated=" << summary.isolated_events
              << " coincident=" << summary.coincident_pairs << "\n";
    if (!init.empty() && summary.isolated_indices.size() == init.size())
        throw pcs::NumericalFailure("every point is isolated; --radius is too small for "
                                    "the data spacing");
    args.format.write(projected, args.output);
    return kExitOk;
}

int run_metrics(const MetricsArgs& args) {
    std::cerr << "metrics:\n";
    print_param(std::cerr, "input", args.input);
    print_param(std::cerr, "reference", args.reference);
    print_param(std::cerr, "mesh", args.mesh ? "true" : "false");
    print_param(std::cerr, "out", args.out);

    const pcs::PointCloud cloud = args.format.read(args.input);
    pcs::DeviationReport report;
    if (args.mesh) {
        report = pcs::deviation_to_mesh(cloud, pcs::read_mesh(args.reference));
    } else {
        report = pcs::deviation(cloud, args.format.read(args.reference));
    }

    std::ofstream out(args.out, std::ios::binary);
    if (!out)
        throw pcs::IoError("cannot open '" + args.out + "' for writing");
    out << "{\"n\":" << report.n
        << ",\"mean_distance\":" << pcs::format_double(report.mean_distance)
        << ",\"std_deviation\":" << pcs::format_double(report.std_deviation)
        << ",\"max_distance\":" << pcs::format_double(report.max_distance) << "}\n";
    if (!out.flush())
        throw pcs::IoError("write to '" + args.out + "' failed");
    return kExitOk;
}

int run_bench(const BenchArgs& args) {
    pcs::MlsParams params;
    params.kernel.h = args.radius;
    params.kernel.cutoff_multiple = args.cutoff;
    params.degree = args.degree;
    params.validate();

    std::cerr << "bench:\n";
    print_param(std::cerr, "input", args.input);
    {
        std::string w;
        for (std::size_t p : args.workers)
            w += (w.empty() ? "" : ",") + std::to_string(p);
        print_param(std::cerr, "workers", w);
    }
    print_param(std::cerr, "reps", std::to_string(args.reps));
    print_param(std::cerr, "radius (kernel bandwidth h)", pcs::format_double(args.radius));
    print_param(std::cerr, "degree", std::to_string(args.degree));
    print_param(std::cerr, "csv", args.csv);

    const pcs::PointCloud cloud = args.format.read(args.input);
    const pcs::TimingReport report = pcs::run_benchmark(cloud, params, args.workers, args.reps);

    std::ofstream out(args.csv, std::ios::binary);
    if (!out)
        throw pcs::IoError("cannot open '" + args.csv + "' for writing");
    pcs::write_timing_csv(report, out);
    if (!out.flush())
        throw pcs::IoError("write to '" + args.csv + "' failed");

    std::cerr << "serial reference: " << report.serial_reference_ns << " ns\n";
    for (const pcs::TimingRow& row : report.rows)
        std::cerr << "p=" << row.workers << " t=" << row.t_ns_median
                  << " ns speedup=" << pcs::format_double(row.speedup)
                  << " efficiency=" << pcs::format_double(row.efficiency_pct) << "%\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-cloud smoothing: local polynomial projection (MLS), locally "
                 "optimal projection (LOP), deviation metrics, worker-pool scaling"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "Sample a synthetic analytic surface");
    gen->add_option("--kind", gen_args.kind, "Surface kind")
        ->required()
        ->check(CLI::IsMember({"sphere", "plane", "torus", "bump"}));
    gen->add_option("--n", gen_args.n, "Number of points")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "RNG seed")->required();
    gen->add_option("-o,--output", gen_args.output, "Output cloud (.xyz or .ply)")->required();
    add_format_flags(gen, gen_args.format);

    NoiseArgs noise_args;
    auto* noise = app.add_subcommand("noise", "Add seeded per-coordinate Gaussian noise");
    noise->add_option("-i,--input", noise_args.input, "Input cloud")->required();
    noise->add_option("-o,--output", noise_args.output, "Output cloud")->required();
    noise->add_option("--sigma", noise_args.sigma, "Noise standard deviation (per coordinate)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    noise->add_option("--seed", noise_args.seed, "RNG seed")->required();
    add_format_flags(noise, noise_args.format);

    SmoothArgs smooth_args;
    auto* smooth = app.add_subcommand("smooth", "Smooth a cloud by local polynomial projection");
    smooth->add_option("-i,--input", smooth_args.input, "Input cloud")->required();
    smooth->add_option("-o,--output", smooth_args.output, "Output cloud")->required();
    smooth->add_option("--radius", smooth_args.radius,
                       "Kernel bandwidth h; weights are exp(-d^2/h^2) and vanish beyond "
                       "h * cutoff")
        ->required()
        ->check(CLI::PositiveNumber);
    smooth->add_option("--degree", smooth_args.degree, "Polynomial degree")
        ->default_val(2)
        ->check(CLI::Range(1, 4));
    smooth->add_option("--workers", smooth_args.workers, "Worker count")
        ->default_val(1)
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));
    smooth->add_option("--cutoff", smooth_args.cutoff, "Support radius in bandwidths")
        ->default_val(3.0)
        ->check(CLI::PositiveNumber);
    smooth->add_option("--plane-tol", smooth_args.plane_tol, "Plane-fit convergence tolerance")
        ->default_val(1e-10)
        ->check(CLI::PositiveNumber);
    smooth->add_option("--max-iter", smooth_args.max_iter, "Plane-fit iteration limit")
        ->default_val(50)
        ->check(CLI::PositiveNumber);
    add_format_flags(smooth, smooth_args.format);

    LopArgs lop_args;
    auto* lop = app.add_subcommand("lop", "Project a point set onto a data cloud (LOP)");
    lop->add_option("--data", lop_args.data, "Data cloud to approximate")->required();
    lop->add_option("--init", lop_args.init, "Initial projected set")->required();
    lop->add_option("-o,--output", lop_args.output, "Output cloud")->required();
    lop->add_option("--radius", lop_args.radius,
                    "Kernel bandwidth h; weights vanish beyond h * cutoff")
        ->required()
        ->check(CLI::PositiveNumber);
    lop->add_option("--mu", lop_args.mu, "Repulsion balance in [0, 0.5)")
        ->default_val(0.4)
        ->check(CLI::Range(0.0, 0.4999999));
    lop->add_option("--iterations", lop_args.iterations, "Sweep limit")
        ->default_val(30)
        ->check(CLI::PositiveNumber);
    add_format_flags(lop, lop_args.format);

    MetricsArgs metrics_args;
    auto* metrics = app.add_subcommand("metrics", "Deviation of a cloud from a reference");
    metrics->add_option("--input", metrics_args.input, "Cloud to measure")->required();
    metrics->add_option("--reference", metrics_args.reference,
                        "Reference cloud, or PLY mesh with --mesh")
        ->required();
    metrics->add_flag("--mesh", metrics_args.mesh,
                      "Treat the reference as a triangle mesh (exact point-to-triangle)");
    metrics->add_option("--out", metrics_args.out, "Output JSON report")->required();
    add_format_flags(metrics, metrics_args.format);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time the smoother across worker counts");
    bench->add_option("-i,--input", bench_args.input, "Input cloud")->required();
    bench->add_option("--workers", bench_args.workers, "Comma-separated worker counts (must include 1)")
        ->required()
        ->delimiter(',');
    bench->add_option("--reps", bench_args.reps, "Repetitions per worker count")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    bench->add_option("--radius", bench_args.radius, "Kernel bandwidth h")
        ->required()
        ->check(CLI::PositiveNumber);
    bench->add_option("--degree", bench_args.degree, "Polynomial degree")
        ->default_val(2)
        ->check(CLI::Range(1, 4));
    bench->add_option("--cutoff", bench_args.cutoff, "Support radius in bandwidths")
        ->default_val(3.0)
        ->check(CLI::PositiveNumber);
    bench->add_option("--csv", bench_args.csv, "Output CSV path")->required();
    add_format_flags(bench, bench_args.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return run_generate(gen_args);
        if (noise->parsed()) return run_noise(noise_args);
        if (smooth->parsed()) return run_smooth(smooth_args);
        if (lop->parsed()) return run_lop(lop_args);
        if (metrics->parsed()) return run_metrics(metrics_args);
        if (bench->parsed()) return run_bench(bench_args);
    } catch (const pcs::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const pcs::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitData;
    } catch (const pcs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitData;
    } catch (const pcs::EmptyCloud& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const pcs::EmptyMesh& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const pcs::InvalidParam& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pcs::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
