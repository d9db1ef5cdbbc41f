#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgplate/assembly.hpp"
#include "fgplate/config_io.hpp"
#include "fgplate/errors.hpp"
#include "fgplate/fem.hpp"
#include "fgplate/parallel.hpp"

namespace {

using namespace fgplate;

// ---------------------------------------------------------------------------
// bundled benchmark: stepped circular plate, one step, three edge supports
// ---------------------------------------------------------------------------

const char* kBenchmarkConfigJson = R"json({
  "plate": "circular",
  "material": {
    "E_m": 70.0e9,
    "E_c": 380.0e9,
    "rho_m": 2700.0,
    "rho_c": 3800.0,
    "nu": 0.3,
    "g": 1.0,
    "kappa_sq": 0.8333333333333334
  },
  "segments": [
    { "outer_radius": 1.0, "thickness": 0.2 },
    { "outer_radius": 2.0, "thickness": 0.1 }
  ],
  "outer_bc": "free"
})json";

struct BenchmarkMode {
    int m, n;
    double hz;
};
struct BenchmarkCase {
    const char* name;
    BoundaryCondition bc;
    std::vector<BenchmarkMode> modes;
};

const std::vector<BenchmarkCase>& benchmark_cases() {
    static const std::vector<BenchmarkCase> cases = {
        {"free",
         BoundaryCondition::free_edge,
         {{2, 1, 83.543},
          {0, 1, 128.289},
          {3, 1, 146.398},
          {4, 1, 227.583},
          {1, 1, 230.416},
          {5, 1, 331.664},
          {2, 2, 395.639},
          {6, 1, 457.797},
          {0, 2, 477.222},
          {7, 1, 604.337}}},
        {"soft_ss",
         BoundaryCondition::soft_simply_supported,
         {{0, 1, 58.084},
          {1, 1, 144.063},
          {2, 1, 297.991},
          {0, 2, 382.925},
          {3, 1, 468.489},
          {1, 2, 606.805},
          {4, 1, 628.476},
          {5, 1, 790.895},
          {2, 2, 796.988},
          {0, 3, 867.957}}},
        {"clamped",
         BoundaryCondition::clamped,
         {{0, 1, 110.629},
          {1, 1, 223.279},
          {2, 1, 392.735},
          {0, 2, 493.537},
          {3, 1, 594.290},
          {1, 2, 767.116},
          {4, 1, 782.061},
          {5, 1, 958.938},
          {2, 2, 978.960},
          {0, 3, 1044.083}}}};
    return cases;
}

PlateConfig benchmark_config(BoundaryCondition bc) {
    PlateConfig cfg = parse_config(kBenchmarkConfigJson, "<benchmark>");
    cfg.outer_bc = bc;
    return cfg;
}

// ---------------------------------------------------------------------------
// output helpers (snprintf keeps the decimal separator locale-independent)
// ---------------------------------------------------------------------------

std::string format_mode_row(int rank, const ModeResult& mode) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%5d  (%d,%d)  %12.3f  %12.4f", rank, mode.m, mode.n,
                  mode.frequency_hz, mode.beta);
    return buf;
}

std::string mode_table_csv(const ModeTable& table) {
    std::ostringstream out;
    out << "rank,m,n,frequency_hz,beta\n";
    int rank = 1;
    for (const auto& mode : table.entries) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.4f\n", rank++, mode.m, mode.n,
                      mode.frequency_hz, mode.beta);
        out << buf;
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int run_freqs(const std::string& config_path, int p_max, int modes,
              const std::optional<std::string>& csv_path, double beta_max, int threads) {
    const PlateConfig cfg = load_config(config_path);
    SearchOptions options;
    options.beta_max = beta_max;
    const ModeTable table = mode_table(cfg, p_max, modes, options, modes, threads);
    std::printf(" rank  (m,n)        f (Hz)          beta\n");
    int rank = 1;
    for (const auto& mode : table.entries)
        std::printf("%s\n", format_mode_row(rank++, mode).c_str());
    for (const auto& d : table.diagnostics) std::fprintf(stderr, "note: %s\n", d.c_str());
    if (static_cast<int>(table.entries.size()) < modes)
        std::fprintf(stderr, "note: only %zu modes found in beta <= %g\n", table.entries.size(),
                     beta_max);
    if (csv_path) write_file(*csv_path, mode_table_csv(table));
    return 0;
}

struct SweepPoint {
    double value;
    bool valid = false;
    std::string warning;
    std::vector<double> betas;
};

int run_sweep(const std::string& config_path, const std::string& param, double start, double stop,
              double step, const std::optional<std::string>& csv_path, int p_max, double beta_max,
              int threads) {
    const PlateConfig base = load_config(config_path);
    if (param != "step_location" && param != "thickness_ratio" && param != "power_index")
        throw ConfigError("sweep --param: expected step_location|thickness_ratio|power_index");
    if ((param == "step_location" || param == "thickness_ratio") && base.segment_count() != 2)
        throw ConfigError("sweep " + param + ": config must have exactly 2 segments");
    if (!(step > 0.0) || !(stop > start))
        throw ConfigError("sweep range: expected start < stop and step > 0");

    std::vector<double> values;
    const int npts = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < npts; ++i) values.push_back(start + i * step);

    std::vector<SweepPoint> points(values.size());
    parallel_for(
        static_cast<int>(values.size()),
        [&](int i) {
            SweepPoint& pt = points[static_cast<size_t>(i)];
            pt.value = values[static_cast<size_t>(i)];
            PlateConfig cfg = base;
            if (param == "step_location") {
                const double r2 = cfg.segments[1].outer_radius;
                if (!(pt.value > 0.0 && pt.value < 1.0)) {
                    pt.warning = "step location must lie in (0, 1)";
                    return;
                }
                cfg.segments[0].outer_radius = pt.value * r2;
            } else if (param == "thickness_ratio") {
                if (pt.value < 1.0) {
                    pt.warning = "thickness ratio below 1 makes segment 1 thinner than the rim";
                    return;
                }
                cfg.segments[0].thickness = pt.value * cfg.segments[1].thickness;
            } else if (param == "power_index") {
                if (pt.value < 0.0) {
                    pt.warning = "power index must be non-negative";
                    return;
                }
                cfg.material.power_index = pt.value;
            }
            cfg.finalize();
            SearchOptions options;
            options.beta_max = beta_max;
            const ModeTable table = mode_table(cfg, p_max, 3, options, 3, 1);
            if (table.entries.size() < 3) {
                pt.warning = "fewer than three modes below the sweep frequency cap";
                return;
            }
            for (int k = 0; k < 3; ++k)
                pt.betas.push_back(table.entries[static_cast<size_t>(k)].beta);
            pt.valid = true;
        },
        threads);

    std::ostringstream csv;
    csv << "value,beta_1,beta_2,beta_3\n";
    for (const auto& pt : points) {
        if (!pt.valid) {
            std::fprintf(stderr, "warning: %s=%g skipped: %s\n", param.c_str(), pt.value,
                         pt.warning.c_str());
            continue;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.6g,%.4f,%.4f,%.4f\n", pt.value, pt.betas[0],
                      pt.betas[1], pt.betas[2]);
        csv << buf;
    }
    if (csv_path)
        write_file(*csv_path, csv.str());
    else
        std::fputs(csv.str().c_str(), stdout);
    return 0;
}

int run_validate(const std::string& config_path, int modes, int elements, int p_max,
                 double beta_max, int threads) {
    const PlateConfig cfg = load_config(config_path);
    SearchOptions options;
    options.beta_max = beta_max;
    const ModeTable analytical = mode_table(cfg, p_max, modes, options, modes, threads);
    const auto fem = fem_mode_table(cfg, p_max, modes, elements, 0, threads);

    std::printf(" rank  (m,n)   analytical (Hz)     fem (Hz)    rel diff\n");
    double max_diff = 0.0;
    int rank = 1;
    int compared = 0;
    for (const auto& mode : analytical.entries) {
        double fem_hz = -1.0;
        for (const auto& fm : fem)
            if (fm.m == mode.m && fm.n == mode.n) fem_hz = fm.frequency_hz;
        if (fem_hz < 0.0) {
            std::printf("%5d  (%d,%d)  %15.3f   <no fem mode>\n", rank++, mode.m, mode.n,
                        mode.frequency_hz);
            max_diff = std::max(max_diff, 1.0);
            continue;
        }
        const double diff = std::abs(fem_hz - mode.frequency_hz) / mode.frequency_hz;
        max_diff = std::max(max_diff, diff);
        ++compared;
        std::printf("%5d  (%d,%d)  %15.3f  %12.3f  %9.5f%%\n", rank++, mode.m, mode.n,
                    mode.frequency_hz, fem_hz, 100.0 * diff);
    }
    std::printf("max relative difference over %d modes: %.5f%%\n", compared, 100.0 * max_diff);
    return max_diff > 0.01 ? 1 : 0;
}

int run_benchmark_table(double tolerance, int threads) {
    bool all_ok = true;
    for (const auto& bcase : benchmark_cases()) {
        const PlateConfig cfg = benchmark_config(bcase.bc);
        const ModeTable table = mode_table(cfg, 7, 5, SearchOptions{}, 10, threads);
        std::printf("%s:\n", bcase.name);
        std::printf("  rank  (m,n)     computed     reference     rel diff\n");
        for (size_t i = 0; i < bcase.modes.size(); ++i) {
            const auto& ref = bcase.modes[i];
            bool ok = false;
            double got = -1.0;
            bool label_ok = false;
            if (i < table.entries.size()) {
                const auto& mode = table.entries[i];
                got = mode.frequency_hz;
                label_ok = mode.m == ref.m && mode.n == ref.n;
                ok = label_ok && std::abs(got - ref.hz) / ref.hz <= tolerance;
            }
            all_ok = all_ok && ok;
            std::printf("  %4zu  (%d,%d)  %11.3f  %12.3f  %10.5f%%  %s\n", i + 1, ref.m, ref.n,
                        got, ref.hz, got > 0 ? 100.0 * std::abs(got - ref.hz) / ref.hz : -1.0,
                        ok ? "ok" : (label_ok ? "OUT OF TOLERANCE" : "LABEL MISMATCH"));
        }
    }
    std::printf(all_ok ? "benchmark table reproduced\n" : "benchmark table FAILED\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-vibration solver for stepped circular/annular functionally graded "
                 "Mindlin plates (analytical Bessel-basis solution with a radial FEM "
                 "cross-check)"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    std::string config_path;
    int p_max = 7;
    int modes = 10;
    double beta_max = 120.0;
    std::optional<std::string> csv_path;

    auto* freqs = app.add_subcommand("freqs", "natural frequency table of one configuration");
    freqs->fallthrough();
    freqs->add_option("--config", config_path, "plate config JSON")->required();
    freqs->add_option("--p-max", p_max, "largest circumferential wave number");
    freqs->add_option("--modes", modes, "number of modes");
    freqs->add_option("--beta-max", beta_max, "sweep cap on the frequency parameter");
    std::string csv_arg;
    freqs->add_option("--csv", csv_arg, "write the table as CSV");

    auto* sweep = app.add_subcommand("sweep", "frequency parameters along a geometry sweep");
    sweep->fallthrough();
    std::string param, range_arg;
    sweep->add_option("--config", config_path, "plate config JSON")->required();
    sweep->add_option("--param", param, "step_location | thickness_ratio | power_index")
        ->required();
    sweep->add_option("--range", range_arg, "start:stop:step")->required();
    sweep->add_option("--csv", csv_arg, "write rows to a CSV file (default stdout)");
    int sweep_pmax = 4;
    double sweep_beta_max = 60.0;
    sweep->add_option("--p-max", sweep_pmax, "largest wave number scanned");
    sweep->add_option("--beta-max", sweep_beta_max, "sweep cap on the frequency parameter");

    auto* validate = app.add_subcommand("validate", "analytical vs finite-element comparison");
    validate->fallthrough();
    validate->add_option("--config", config_path, "plate config JSON")->required();
    int val_modes = 10, elements = 200, val_pmax = 7;
    validate->add_option("--modes", val_modes, "number of modes compared");
    validate->add_option("--elements", elements, "radial elements in the reference model");
    validate->add_option("--p-max", val_pmax, "largest wave number");
    double val_beta_max = 120.0;
    validate->add_option("--beta-max", val_beta_max, "sweep cap on the frequency parameter");

    auto* bench = app.add_subcommand("table1", "reproduce the bundled benchmark table");
    bench->fallthrough();
    double tolerance = 1e-3;
    bench->add_option("--tolerance", tolerance, "relative tolerance per mode");

    CLI11_PARSE(app, argc, argv);

    try {
        if (freqs->parsed()) {
            if (!csv_arg.empty()) csv_path = csv_arg;
            return run_freqs(config_path, p_max, modes, csv_path, beta_max, threads);
        }
        if (sweep->parsed()) {
            if (!csv_arg.empty()) csv_path = csv_arg;
            double start = 0, stop = 0, step = 0;
            char c1 = 0, c2 = 0;
            std::istringstream in(range_arg);
            in >> start >> c1 >> stop >> c2 >> step;
            if (!in || c1 != ':' || c2 != ':')
                throw ConfigError("--range: expected start:stop:step");
            return run_sweep(config_path, param, start, stop, step, csv_path, sweep_pmax,
                             sweep_beta_max, threads);
        }
        if (validate->parsed())
            return run_validate(config_path, val_modes, elements, val_pmax, val_beta_max,
                                threads);
        if (bench->parsed()) return run_benchmark_table(tolerance, threads);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const UnsupportedRegimeError& e) {
        std::fprintf(stderr, "unsupported regime at beta=%.6g: %s\n", e.beta(), e.what());
        return 3;
    } catch (const BranchTransitionError& e) {
        std::fprintf(stderr, "branch transition at beta=%.6g: %s\n", e.beta(), e.what());
        return 3;
    } catch (const OracleError& e) {
        std::fprintf(stderr, "reference solver failure: %s\n", e.what());
        return 4;
    }
    return 0;
}
