// Command-line front end: kernel construction, moduli-grid export,
// verification suite, and Wigner-function evaluation.
//
// Exit codes: 0 success, 1 verification/validation failure, 2 usage error.

#include "swkernel/swkernel.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using swk::Json;
using swk::Matrix;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed) {
    if (cli_seed) return *cli_seed;
    if (const char* env = std::getenv("SWKERNEL_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("SWKERNEL_SEED is not an integer: " +
                                        std::string(env));
        }
    }
    return 42;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path);
        if (!out) throw std::runtime_error("cannot write file: " + output_path);
        out << text;
    }
}

// ---------------------------------------------------------------------------
// Kernel specification shared by `kernel` and `wigner`
// ---------------------------------------------------------------------------

struct KernelSpec {
    int dim = 0;
    std::string family;
    std::optional<double> nu, nu1, nu2;
    std::vector<double> angles;
};

swk::FamilyId parse_family(int dim, const std::string& name) {
    using swk::FamilyId;
    if (dim == 2 && (name == "qubit" || name.empty())) return FamilyId::Qubit;
    if (dim == 3) {
        if (name == "qutrit") return FamilyId::Qutrit;
        if (name == "golden" || name == "103") return FamilyId::QutritGolden;
    }
    if (dim == 4) {
        if (name == "regular") return FamilyId::QuatritRegular;
        if (name == "1|234") return FamilyId::Quatrit1_234;
        if (name == "12|34") return FamilyId::Quatrit12_34;
        if (name == "123|4") return FamilyId::Quatrit123_4;
        if (name == "1|2|34") return FamilyId::Quatrit1_2_34;
        if (name == "12|3|4") return FamilyId::Quatrit12_3_4;
        if (name == "1|23|4") return FamilyId::Quatrit1_23_4;
        if (name == "1204") return FamilyId::Quatrit1204;
        if (name == "1034") return FamilyId::Quatrit1034;
        if (name == "1004") return FamilyId::Quatrit1004;
    }
    throw CLI::ValidationError("--family", "unknown family '" + name + "' for dim " +
                                               std::to_string(dim));
}

bool family_needs_nu(swk::FamilyId id) {
    using swk::FamilyId;
    return id == FamilyId::Qutrit || id == FamilyId::Quatrit1_234 ||
           id == FamilyId::Quatrit12_34 || id == FamilyId::Quatrit123_4 ||
           id == FamilyId::Quatrit1204 || id == FamilyId::Quatrit1034;
}

// Returns the kernel plus the JSON-facing description of how it was built.
std::pair<swk::SWKernel, Json> make_kernel(const KernelSpec& spec) {
    Json desc;
    desc["dim"] = spec.dim;
    if (!spec.angles.empty() || (spec.family.empty() && spec.dim == 2)) {
        if (!spec.angles.empty()) {
            const swk::ModuliPoint p = swk::make_moduli_point(spec.dim, spec.angles);
            desc["family"] = nullptr;
            desc["parameters"] = Json::object();
            return {swk::build_kernel(p, Matrix::Identity(spec.dim, spec.dim)), desc};
        }
        // dim 2 without flags: the moduli space is a single point
        desc["family"] = "qubit";
        desc["parameters"] = Json::object();
        return {swk::kernel_from_family({swk::FamilyId::Qubit}), desc};
    }
    if (spec.family.empty())
        throw CLI::ValidationError("--family",
                                   "dim > 2 requires --family or --angles");
    const swk::FamilyId id = parse_family(spec.dim, spec.family);
    swk::KernelFamily fam{id};
    Json params = Json::object();
    if (family_needs_nu(id)) {
        if (!spec.nu)
            throw CLI::ValidationError("--nu", "family '" + spec.family +
                                                   "' requires --nu");
        fam.nu1 = *spec.nu;
        params["nu"] = *spec.nu;
    } else if (id == swk::FamilyId::QuatritRegular) {
        if (!spec.nu1 || !spec.nu2)
            throw CLI::ValidationError("--nu1",
                                       "family 'regular' requires --nu1 and --nu2");
        fam.nu1 = *spec.nu1;
        fam.nu2 = *spec.nu2;
        params["nu1"] = *spec.nu1;
        params["nu2"] = *spec.nu2;
    }
    desc["family"] = swk::family_name(id);
    desc["parameters"] = params;
    return {swk::kernel_from_family(fam), desc};
}

void add_kernel_spec_options(CLI::App* cmd, KernelSpec& spec, bool need_dim) {
    auto* dim_opt = cmd->add_option("--dim", spec.dim, "system dimension N >= 2");
    if (need_dim) dim_opt->required();
    auto* family_opt = cmd->add_option(
        "--family", spec.family,
        "kernel family: qubit | qutrit | golden | regular | 1|234 | "
        "12|34 | 123|4 | 1|2|34 | 12|3|4 | 1|23|4 | 1204 | 1034 | 1004");
    const auto opt_double = [](std::optional<double>& slot) {
        return [&slot](const std::vector<std::string>& v) {
            try {
                slot = std::stod(v.back());
            } catch (const std::exception&) {
                return false;
            }
            return true;
        };
    };
    cmd->add_option("--nu", opt_double(spec.nu), "family parameter nu");
    cmd->add_option("--nu1", opt_double(spec.nu1), "regular-family parameter nu1");
    cmd->add_option("--nu2", opt_double(spec.nu2), "regular-family parameter nu2");
    cmd->add_option("--angles", spec.angles,
                    "moduli angles psi_1 .. psi_{N-2} (alternative to --family)")
        ->excludes(family_opt);
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

Json kernel_json(const swk::SWKernel& kernel, Json desc) {
    const swk::Stratum stratum = swk::classify_stratum(kernel);
    const swk::MasterReport master = swk::verify_master(kernel.matrix);

    desc["angles"] = kernel.moduli ? Json(kernel.moduli->angles) : Json(nullptr);
    desc["mu"] = kernel.moduli ? Json(kernel.moduli->mu) : Json(nullptr);
    desc["spectrum"] = kernel.spectrum.values();
    desc["stratum"] = {{"pattern", stratum.pattern},
                       {"orbit_dim", stratum.orbit_dim},
                       {"isotropy_dim", stratum.isotropy_dim}};
    desc["master"] = {{"trace_residual", master.trace_residual},
                      {"trace_sq_residual", master.trace_sq_residual},
                      {"pass", master.pass}};
    desc["matrix"] = swk::matrix_to_json(kernel.matrix);
    return desc;
}

int run_kernel(const KernelSpec& spec, const std::string& output) {
    auto [kernel, desc] = make_kernel(spec);
    emit(kernel_json(kernel, std::move(desc)).dump(2) + "\n", output);
    return 0;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

int run_grid(int dim, int resolution, const std::string& spacing,
             const std::string& format, const std::string& output) {
    const auto points = swk::sample_moduli_grid(
        dim, resolution,
        spacing == "area" ? swk::GridSpacing::EqualArea : swk::GridSpacing::EqualAngle);
    const swk::GellMannBasis basis(dim);

    if (format == "json") {
        Json rows = Json::array();
        for (const auto& p : points) {
            const swk::SWKernel kernel =
                swk::build_kernel(p, Matrix::Identity(dim, dim), basis);
            const swk::Stratum stratum = swk::classify_stratum(kernel);
            double det = 1.0;
            for (double v : kernel.spectrum.values()) det *= v;
            Json row;
            row["angles"] = p.angles;
            row["mu"] = p.mu;
            row["spectrum"] = kernel.spectrum.values();
            row["stratum"] = stratum.pattern;
            row["det"] = det;
            rows.push_back(std::move(row));
        }
        Json out;
        out["dim"] = dim;
        out["resolution"] = resolution;
        out["points"] = std::move(rows);
        emit(out.dump(2) + "\n", output);
        return 0;
    }

    // CSV
    std::ostringstream csv;
    for (int a = 1; a <= dim - 2; ++a) csv << "psi_" << a << ",";
    for (int s = 2; s <= dim; ++s) csv << "mu_" << s * s - 1 << ",";
    for (int i = 1; i <= dim; ++i) csv << "pi_" << i << ",";
    csv << "stratum,det\n";
    for (const auto& p : points) {
        const swk::SWKernel kernel =
            swk::build_kernel(p, Matrix::Identity(dim, dim), basis);
        const swk::Stratum stratum = swk::classify_stratum(kernel);
        double det = 1.0;
        for (double v : kernel.spectrum.values()) det *= v;
        for (double a : p.angles) csv << swk::format_number(a) << ",";
        for (double m : p.mu) csv << swk::format_number(m) << ",";
        for (double v : kernel.spectrum.values()) csv << swk::format_number(v) << ",";
        csv << stratum.pattern << "," << swk::format_number(det) << "\n";
    }
    emit(csv.str(), output);
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double residual;
    double tolerance;
    bool pass;
};

void append_check(std::vector<CheckRow>& rows, const std::string& name,
                  double residual, double tolerance) {
    rows.push_back({name, residual, tolerance, residual < tolerance});
}

swk::ModuliPoint interior_point(int dim) {
    switch (dim) {
        case 2: return swk::make_moduli_point(2, {});
        case 3: return swk::make_moduli_point(3, {std::numbers::pi / 6.0});
        case 4: return swk::make_moduli_point(4, {0.9, std::numbers::pi / 6.0});
        default: {
            std::vector<double> angles(static_cast<std::size_t>(dim - 2), 0.8);
            angles.back() = std::numbers::pi / 6.0;
            return swk::make_moduli_point(dim, angles);
        }
    }
}

int run_verify(std::vector<int> dims, int samples, std::uint64_t seed,
               const std::string& kernel_path, const std::string& output) {
    if (dims.empty()) dims = {2, 3, 4};
    std::vector<CheckRow> checks;

    for (int n : dims) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
        const swk::GellMannBasis basis(n);

        // master equations over random (moduli point, Haar unitary) pairs
        double master_res = 0.0;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> angles(static_cast<std::size_t>(n - 2));
            for (std::size_t a = 0; a + 1 < angles.size(); ++a)
                angles[a] = unit(rng) * std::numbers::pi;
            if (!angles.empty())
                angles.back() = unit(rng) * 2.0 * std::numbers::pi * 0.999;
            const auto p = swk::make_moduli_point(n, angles);
            const Matrix u = swk::sample_haar_unitary(n, rng);
            const auto k = swk::build_kernel(p, u, basis);
            const auto rep = swk::verify_master(k.matrix);
            master_res = std::max({master_res, rep.trace_residual, rep.trace_sq_residual});
        }
        append_check(checks, "master_random_kernels_N" + std::to_string(n), master_res,
                     1e-10);

        // Stratonovich-Weyl postulates at an interior moduli point
        const auto post = swk::check_sw_postulates(interior_point(n), samples, seed);
        append_check(checks, "postulate_hermiticity_N" + std::to_string(n),
                     post.hermiticity.residual, post.hermiticity.tolerance);
        append_check(checks, "postulate_covariance_N" + std::to_string(n),
                     post.covariance.residual, post.covariance.tolerance);
        append_check(checks, "postulate_normalization_N" + std::to_string(n),
                     post.normalization.residual, post.normalization.tolerance);
        append_check(checks, "postulate_reconstruction_N" + std::to_string(n),
                     post.reconstruction.residual, post.reconstruction.tolerance);

        // Weingarten fourth moments (full tuple sweep is N <= 3 only)
        if (n <= 3) {
            const double dev = swk::weingarten_check(n, samples, seed);
            append_check(checks, "weingarten_N" + std::to_string(n), dev,
                         6.0 / std::sqrt(static_cast<double>(samples)));
        }

        // Gram rank vs degeneracy partition for the named families
        std::vector<swk::KernelFamily> families;
        if (n == 2) families.push_back({swk::FamilyId::Qubit});
        if (n == 3) {
            families.push_back({swk::FamilyId::Qutrit, -0.6});
            families.push_back({swk::FamilyId::Qutrit, -1.0});
            families.push_back({swk::FamilyId::QutritGolden});
        }
        if (n == 4) {
            families.push_back({swk::FamilyId::QuatritRegular, -0.1, -1.0});
            families.push_back({swk::FamilyId::Quatrit1_234, 0.0});
            families.push_back({swk::FamilyId::Quatrit12_34, 0.3});
            families.push_back({swk::FamilyId::Quatrit123_4, -0.6});
            families.push_back({swk::FamilyId::Quatrit1_2_34});
            families.push_back({swk::FamilyId::Quatrit12_3_4});
            families.push_back({swk::FamilyId::Quatrit1_23_4});
            families.push_back({swk::FamilyId::Quatrit1004});
        }
        if (!families.empty()) {
            double gram_fail = 0.0;
            for (const auto& fam : families) {
                try {
                    const auto u = swk::sample_haar_unitary(n, rng);
                    swk::classify_stratum(swk::kernel_from_family(fam, u));
                } catch (const std::exception&) {
                    gram_fail = 1.0;
                }
            }
            append_check(checks, "gram_rank_consistency_N" + std::to_string(n),
                         gram_fail, 0.5);
        }
    }

    if (!kernel_path.empty()) {
        const Matrix m = swk::load_matrix(kernel_path);
        const auto rep = swk::verify_master(m);
        append_check(checks, "kernel_file_master_equations",
                     std::max(rep.trace_residual, rep.trace_sq_residual),
                     swk::kMasterPassTol);
    }

    Json out;
    out["seed"] = seed;
    out["samples"] = samples;
    out["dims"] = dims;
    Json rows = Json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        rows.push_back({{"name", c.name},
                        {"residual", c.residual},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
        all_pass = all_pass && c.pass;
    }
    out["checks"] = std::move(rows);
    out["pass"] = all_pass;
    emit(out.dump(2) + "\n", output);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// wigner
// ---------------------------------------------------------------------------

int run_wigner(const std::string& state_path, KernelSpec spec,
               std::optional<std::uint64_t> phase_seed, int sweep_samples,
               std::uint64_t seed, const std::string& format,
               const std::string& output) {
    Matrix state_matrix = swk::load_matrix(state_path);
    std::optional<swk::DensityMatrix> rho;
    try {
        rho.emplace(state_matrix);
    } catch (const std::exception& e) {
        const double tr_res = std::abs(state_matrix.trace().real() - 1.0);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(
            0.5 * (state_matrix + state_matrix.adjoint().eval()),
            Eigen::EigenvaluesOnly);
        std::cerr << "error: invalid density matrix (" << e.what()
                  << "); trace residual " << tr_res << ", min eigenvalue "
                  << solver.eigenvalues().minCoeff() << ", hermiticity residual "
                  << swk::hermiticity_residual(state_matrix) << "\n";
        return 1;
    }
    if (spec.dim == 0) spec.dim = rho->dim();
    if (spec.dim != rho->dim())
        throw std::invalid_argument("--dim disagrees with the state file dimension");

    auto [kernel, desc] = make_kernel(spec);

    if (sweep_samples > 0) {
        std::mt19937_64 rng(seed);
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(sweep_samples));
        Matrix u(spec.dim, spec.dim);
        for (int j = 0; j < sweep_samples; ++j) {
            swk::detail::haar_unitary_inplace(u, rng);
            values.push_back(swk::wigner_value(*rho, kernel, u).value);
        }
        if (format == "json") {
            Json out;
            out["dim"] = spec.dim;
            out["samples"] = sweep_samples;
            out["seed"] = seed;
            out["wigner"] = values;
            emit(out.dump(2) + "\n", output);
        } else {
            std::ostringstream csv;
            csv << "index,wigner\n";
            for (std::size_t j = 0; j < values.size(); ++j)
                csv << j << "," << swk::format_number(values[j]) << "\n";
            emit(csv.str(), output);
        }
        return 0;
    }

    const Matrix u = phase_seed
                         ? swk::sample_haar_unitary(spec.dim, *phase_seed)
                         : Matrix(Matrix::Identity(spec.dim, spec.dim));
    const swk::WignerValue w = swk::wigner_value(*rho, kernel, u);
    Json out = std::move(desc);
    out["phase_seed"] = phase_seed ? Json(*phase_seed) : Json(nullptr);
    out["spectrum"] = kernel.spectrum.values();
    out["wigner_value"] = w.value;
    emit(out.dump(2) + "\n", output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stratonovich-Weyl kernel toolbox"};
    app.require_subcommand(1);

    std::string output, format = "json", spacing = "angle", state_path, kernel_path;
    std::optional<std::uint64_t> cli_seed, phase_seed;
    int resolution = 100, samples = 10000, sweep_samples = 0;
    std::vector<int> dims;
    KernelSpec spec;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--output", output, "write output to a file instead of stdout");
        cmd->add_option("--seed", [&cli_seed](const std::vector<std::string>& v) {
               try {
                   cli_seed = std::stoull(v.back());
               } catch (const std::exception&) {
                   return false;
               }
               return true;
           },
           "RNG seed (fallback: SWKERNEL_SEED env var, then 42)");
    };

    auto* kernel_cmd = app.add_subcommand("kernel", "construct a kernel and print it");
    add_kernel_spec_options(kernel_cmd, spec, true);
    add_common(kernel_cmd);

    auto* grid_cmd = app.add_subcommand("grid", "enumerate the admissible moduli region");
    grid_cmd->add_option("--dim", spec.dim, "system dimension")->required();
    grid_cmd->add_option("--resolution", resolution, "grid points per angle (>= 2)");
    grid_cmd->add_option("--spacing", spacing, "angle (default) or area")
        ->check(CLI::IsMember({"angle", "area"}));
    grid_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    add_common(grid_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->add_option("--dims,--dim", dims, "dimensions to verify (default 2 3 4)");
    verify_cmd->add_option("--samples", samples, "Monte-Carlo sample count");
    verify_cmd->add_option("--kernel", kernel_path,
                           "also check a kernel matrix file against the master equations");
    add_common(verify_cmd);

    auto* wigner_cmd = app.add_subcommand("wigner", "evaluate the Wigner function");
    wigner_cmd->add_option("--state", state_path, "density matrix JSON file")->required();
    add_kernel_spec_options(wigner_cmd, spec, false);
    wigner_cmd->add_option("--phase-seed", [&phase_seed](const std::vector<std::string>& v) {
                   try {
                       phase_seed = std::stoull(v.back());
                   } catch (const std::exception&) {
                       return false;
                   }
                   return true;
               },
               "Haar seed for a single phase point (default: identity)");
    wigner_cmd->add_option("--samples", sweep_samples,
                           "sweep this many Haar phase points (CSV output)");
    wigner_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    add_common(wigner_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const std::uint64_t seed = resolve_seed(cli_seed);
        if (kernel_cmd->parsed()) return run_kernel(spec, output);
        if (grid_cmd->parsed())
            return run_grid(spec.dim, resolution, spacing, format, output);
        if (verify_cmd->parsed())
            return run_verify(dims, samples, seed, kernel_path, output);
        if (wigner_cmd->parsed())
            return run_wigner(state_path, spec, phase_seed, sweep_samples, seed, format,
                              output);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
