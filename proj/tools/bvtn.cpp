// bvtn: bidiagonal-decomposition toolkit for Bernstein collocation matrices.
//
// Subcommands: bd, expand, solve, eig, svd, qr, lsq, repro.
// Node files hold whitespace-separated decimal or p/q literals; rationals
// are parsed exactly and rounded to nearest for the double pipeline.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bvtn/bvtn.hpp"

namespace {

using namespace bvtn;

enum class Format { text, csv, json };

Format parse_format(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw io::ParseError("unknown format: " + s);
}

std::string sep(Format f) { return f == Format::csv ? "," : " "; }

void print_matrix(const Matrix<double>& m, Format f, const std::string& name) {
    if (f == Format::json) {
        nlohmann::json j = io::to_json(m);
        if (!name.empty()) j["name"] = name;
        std::cout << j.dump() << "\n";
        return;
    }
    std::cout.precision(17);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j)
            std::cout << (j ? sep(f) : "") << m(i, j);
        std::cout << "\n";
    }
}

void print_vector(const std::vector<double>& v, Format f, const std::string& name) {
    if (f == Format::json) {
        std::cout << nlohmann::json{{"name", name}, {"values", v}}.dump() << "\n";
        return;
    }
    std::cout.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i)
        std::cout << (i ? sep(f) : "") << v[i];
    std::cout << "\n";
}

struct NodeInput {
    NodeSet<Rational> exact;
    NodeSet<double> rounded;
};

NodeInput load_nodes(const std::string& path) {
    auto parsed = io::parse_number_file(path);
    return {validate_nodes<Rational>(parsed.exact), validate_nodes<double>(parsed.rounded)};
}

PrecisionPolicy policy_from(int start_bits, int max_bits, double rtol) {
    PrecisionPolicy p;
    if (start_bits > 0) p.start_bits = start_bits;
    if (max_bits > 0) p.max_bits = max_bits;
    if (const char* env = std::getenv("BVTN_MAX_BITS")) p.max_bits = std::atoi(env);
    if (rtol > 0) p.stabilization_rtol = rtol;
    return p;
}

void print_spectrum(const Spectrum& s, Format f, const char* what) {
    if (f == Format::json) {
        std::cout << nlohmann::json{{"kind", what},
                                    {"values", s.values},
                                    {"achieved_bits", s.achieved_bits},
                                    {"stabilized", s.stabilized}}
                         .dump()
                  << "\n";
        return;
    }
    std::cout.precision(17);
    if (f == Format::csv) std::cout << "value\n";
    for (double v : s.values) std::cout << v << "\n";
    std::cout << "# achieved_bits=" << s.achieved_bits << " stabilized=" << (s.stabilized ? 1 : 0)
              << "\n";
}

std::string two_digits(double v) {
    std::ostringstream os;
    os.precision(1);
    os << std::scientific << v;
    return os.str();
}

// --- repro harness -------------------------------------------------------

NodeSet<Rational> experiment_nodes() {
    static const std::pair<int, int> pq[] = {
        {1, 22}, {1, 20},  {1, 18},  {1, 16},  {1, 14},  {1, 12},  {1, 10},
        {1, 8},  {1, 6},   {1, 4},   {1, 2},   {23, 42}, {21, 38}, {19, 34},
        {17, 30}, {15, 26}, {13, 22}, {11, 18}, {9, 14},  {7, 10},  {5, 6}};
    std::vector<Rational> v;
    for (auto [p, q] : pq) v.emplace_back(Rational(p, q));
    return validate_nodes<Rational>(std::move(v));
}

BdMatrix<double> rounded_bd(const BdMatrix<Rational>& exact) {
    Matrix<double> packed(exact.rows(), exact.cols());
    for (int i = 0; i < exact.rows(); ++i)
        for (int j = 0; j < exact.cols(); ++j) packed(i, j) = io::to_double(exact.entry(i, j));
    return BdMatrix<double>(std::move(packed));
}

int run_repro(const std::string& which, Format format, const PrecisionPolicy& policy) {
    const bool eig_case = which == "example5.1";
    if (!eig_case && which != "example5.2") {
        std::cerr << "unknown experiment: " << which << " (expected example5.1 or example5.2)\n";
        return 2;
    }
    auto nodes = experiment_nodes();
    const int degree = eig_case ? 20 : 15;

    auto exact_bd = compute_bd(nodes, degree);
    auto bd = rounded_bd(exact_bd);
    auto dense = expand(bd);

    Spectrum mm = eig_case ? eigenvalues(bd, policy) : singular_values(bd, policy);
    Spectrum base = eig_case ? baseline_eigenvalues(dense) : baseline_singular_values(dense);
    auto kind = eig_case ? oracle::SpectrumKind::eigen : oracle::SpectrumKind::singular;
    auto ref = oracle::reference_spectrum(nodes, degree, kind, 50);
    auto mm_err = oracle::relative_errors(ref, mm);
    auto base_err = oracle::relative_errors(ref, base);

    auto sing_ref = eig_case ? oracle::reference_spectrum(nodes, degree,
                                                          oracle::SpectrumKind::singular, 50)
                             : ref;
    double kappa2;
    {
        PrecisionScope scope(sing_ref.bits);
        kappa2 = BigFloat(sing_ref.values.front() / sing_ref.values.back()).convert_to<double>();
    }

    const char* ref_col = eig_case ? "lambda_ref" : "sigma_ref";
    if (format == Format::json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < mm_err.rows.size(); ++i)
            rows.push_back({{ref_col, mm_err.rows[i].reference},
                            {"mm_rel_err", mm_err.rows[i].rel_error},
                            {"baseline_rel_err", base_err.rows[i].rel_error}});
        std::cout << nlohmann::json{{"experiment", which},
                                    {"kappa2", kappa2},
                                    {"achieved_bits", mm.achieved_bits},
                                    {"rows", rows}}
                         .dump()
                  << "\n";
        return 0;
    }
    if (format == Format::csv) {
        std::cout.precision(17);
        std::cout << ref_col << ",mm_rel_err,baseline_rel_err\n";
        for (std::size_t i = 0; i < mm_err.rows.size(); ++i)
            std::cout << mm_err.rows[i].reference << "," << mm_err.rows[i].rel_error << ","
                      << base_err.rows[i].rel_error << "\n";
        std::cout << "# kappa2=" << kappa2 << " achieved_bits=" << mm.achieved_bits << "\n";
        return 0;
    }
    std::cout << (eig_case ? "Eigenvalues" : "Singular values") << " (" << which
              << "), kappa2 = " << two_digits(kappa2) << "\n";
    std::cout << ref_col << "\tmm\tbaseline\n";
    for (std::size_t i = 0; i < mm_err.rows.size(); ++i)
        std::cout << two_digits(mm_err.rows[i].reference) << "\t"
                  << two_digits(mm_err.rows[i].rel_error) << "\t"
                  << two_digits(base_err.rows[i].rel_error) << "\n";
    std::cout << "achieved_bits=" << mm.achieved_bits << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"accurate linear algebra with Bernstein collocation matrices"};
    app.require_subcommand(1);

    std::string nodes_path, rhs_inline, rhs_path, bd_path, format_str = "text", experiment;
    int degree = -1;
    int start_bits = 0, max_bits = 0;
    double rtol = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_nodes) {
        if (needs_nodes) cmd->add_option("--nodes", nodes_path, "node file")->required();
        cmd->add_option("--degree", degree, "Bernstein basis degree n (default: node count - 1)");
        cmd->add_option("--format", format_str, "text|csv|json");
        cmd->add_option("--start-bits", start_bits, "adaptive precision start");
        cmd->add_option("--max-bits", max_bits, "adaptive precision cap");
        cmd->add_option("--rtol", rtol, "stabilization tolerance");
    };

    auto* c_bd = app.add_subcommand("bd", "print the bidiagonal decomposition matrix M");
    add_common(c_bd, true);
    auto* c_expand = app.add_subcommand("expand", "print the dense matrix A");
    add_common(c_expand, false);
    c_expand->add_option("--nodes", nodes_path, "node file");
    c_expand->add_option("--bd", bd_path, "decomposition in json form (as printed by bd --format json)");
    auto* c_solve = app.add_subcommand("solve", "solve the square system A x = b");
    add_common(c_solve, true);
    c_solve->add_option("--rhs", rhs_inline, "right-hand side values, inline");
    c_solve->add_option("--rhs-file", rhs_path, "right-hand side file");
    auto* c_eig = app.add_subcommand("eig", "eigenvalues (square case)");
    add_common(c_eig, true);
    auto* c_svd = app.add_subcommand("svd", "singular values");
    add_common(c_svd, true);
    auto* c_qr = app.add_subcommand("qr", "QR factorization A = Q [R; 0]");
    add_common(c_qr, true);
    auto* c_lsq = app.add_subcommand("lsq", "least squares min ||A c - f||_2");
    add_common(c_lsq, true);
    c_lsq->add_option("--rhs", rhs_inline, "data vector f, inline");
    c_lsq->add_option("--rhs-file", rhs_path, "data vector file");
    auto* c_repro = app.add_subcommand("repro", "regenerate the accuracy experiments");
    c_repro->add_option("experiment", experiment, "example5.1 | example5.2")->required();
    c_repro->add_option("--format", format_str, "text|csv|json");
    c_repro->add_option("--start-bits", start_bits, "adaptive precision start");
    c_repro->add_option("--max-bits", max_bits, "adaptive precision cap");
    c_repro->add_option("--rtol", rtol, "stabilization tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Format format = parse_format(format_str);
        PrecisionPolicy policy = policy_from(start_bits, max_bits, rtol);

        auto rhs_values = [&]() -> std::vector<double> {
            if (!rhs_path.empty()) return io::parse_number_file(rhs_path).rounded;
            if (!rhs_inline.empty()) return io::parse_numbers(rhs_inline).rounded;
            throw io::ParseError("missing right-hand side (--rhs or --rhs-file)");
        };
        auto bd_from_nodes = [&]() {
            auto in = load_nodes(nodes_path);
            int n = degree >= 0 ? degree : in.rounded.l();
            return compute_bd(in.rounded, n);
        };

        if (*c_bd) {
            print_matrix(bd_from_nodes().packed(), format, "bd");
        } else if (*c_expand) {
            BdMatrix<double> bd = !bd_path.empty()
                                      ? io::bd_from_json(nlohmann::json::parse(std::ifstream(bd_path)))
                                      : bd_from_nodes();
            if (bd_path.empty() && nodes_path.empty())
                throw io::ParseError("expand needs --bd or --nodes");
            print_matrix(expand(bd), format, "dense");
        } else if (*c_solve) {
            print_vector(solve_system(bd_from_nodes(), rhs_values()), format, "solution");
        } else if (*c_eig) {
            print_spectrum(eigenvalues(bd_from_nodes(), policy), format, "eigenvalues");
        } else if (*c_svd) {
            print_spectrum(singular_values(bd_from_nodes(), policy), format, "singular_values");
        } else if (*c_qr) {
            auto res = bvtn::qr(bd_from_nodes(), policy);
            print_matrix(res.q, format, "Q");
            if (format != Format::json) std::cout << "\n";
            print_matrix(res.r, format, "R");
        } else if (*c_lsq) {
            auto sol = least_squares(bd_from_nodes(), rhs_values(), policy);
            print_vector(sol.coefficients, format, "coefficients");
            print_vector(sol.residual, format, "residual");
            if (format != Format::json) {
                std::cout.precision(17);
                std::cout << "residual_norm " << sol.residual_norm << "\n";
            } else {
                std::cout << nlohmann::json{{"name", "residual_norm"}, {"value", sol.residual_norm}}
                                 .dump()
                          << "\n";
            }
        } else if (*c_repro) {
            return run_repro(experiment, format, policy);
        }
        return 0;
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
