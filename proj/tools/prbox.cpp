// Command-line front end: builds boxes, solves and sweeps local parts,
// verifies the library's printed decompositions and game bounds, and
// re-checks certificates. Batch in, files out; all numeric output is exact
// rational text, decimal approximations appear only in labeled columns.
//
// Exit codes: 0 success, 1 claim failure, 2 usage, 3 not certified.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prbox/game.hpp"
#include "prbox/io.hpp"

using namespace prbox;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotCertified = 3;

// Stderr log, one line per event; stdout stays machine-friendly.
void log_line(const std::string& msg) { std::cerr << "log: " << msg << "\n"; }

void log_group(int n) {
    log_line("symmetry group: per-round masks (a,b,c) acting as u^=a, v^=b, "
             "x^=(b&u)^c, y^=(a&v)^c^(a&b); " + std::to_string(depol_group_size(n)) +
             " elements at n=" + std::to_string(n));
}

std::string approx_text(const Rational& r) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", r.approx());
    return buf;
}

std::string value_text(const Rational& r) { return r.str() + " (~" + approx_text(r) + ")"; }

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    return Json::parse(in);
}

struct FamilyArgs {
    std::string family = "isotropic";
    int n = 1;
    std::string eps, delta;
    bool symbolic = false;
    bool force = false;

    void add_to(CLI::App* cmd, bool with_symbolic = true) {
        cmd->add_option("--family", family, "box family: isotropic or biased")
            ->check(CLI::IsMember({"isotropic", "biased"}))
            ->capture_default_str();
        cmd->add_option("--n", n, "number of rounds")->required();
        cmd->add_option("--eps", eps, "isotropic noise parameter, exact rational p/q");
        cmd->add_option("--delta", delta, "biased noise parameter, exact rational p/q");
        if (with_symbolic)
            cmd->add_flag("--symbolic", symbolic, "leave the parameter symbolic");
        cmd->add_flag("--force", force, "allow parameters outside the default range");
    }

    BoxFamily parsed_family() const {
        return family == "biased" ? BoxFamily::biased : BoxFamily::isotropic;
    }

    Scalar parameter() const {
        const BoxFamily f = parsed_family();
        const bool iso = f == BoxFamily::isotropic;
        if (!eps.empty() && !delta.empty())
            throw std::invalid_argument("give either --eps or --delta, not both");
        if (iso && !delta.empty())
            throw std::invalid_argument("the isotropic family takes --eps");
        if (!iso && !eps.empty())
            throw std::invalid_argument("the biased family takes --delta");
        const std::string& text = iso ? eps : delta;
        if (symbolic) {
            if (!text.empty())
                throw std::invalid_argument("--symbolic excludes an explicit parameter");
            return Scalar(Poly::variable(family_var(f)));
        }
        if (text.empty())
            throw std::invalid_argument(std::string("missing --") + (iso ? "eps" : "delta"));
        return Scalar(Rational::parse(text));
    }

    Box build() const {
        Scalar p = parameter();
        if (force && !symbolic && p.rational() > family_param_max(parsed_family()))
            log_line("parameter " + p.str() + " is outside the default range, forced");
        return make_family(parsed_family(), n, p, force);
    }
};

// Detailed box checks with printed culprits; returns pass/fail.
bool print_box_checks(const Box& b) {
    bool ok = true;

    const bool norm = is_normalized(b);
    std::printf("%s: every conditional distribution sums to the mass %s\n",
                norm ? "PASS" : "FAIL", b.mass().str().c_str());
    if (!norm) {
        bool reported = false;
        for (int u = 0; u < b.inputs_a() && !reported; ++u)
            for (int v = 0; v < b.inputs_b() && !reported; ++v) {
                Scalar sum(0);
                for (int x = 0; x < b.outputs_a(); ++x)
                    for (int y = 0; y < b.outputs_b(); ++y) sum += b.at(x, y, u, v);
                if (sum != b.mass()) {
                    std::printf("  input pair u=%d v=%d sums to %s\n", u, v, sum.str().c_str());
                    reported = true;
                }
            }
        ok = false;
    }

    bool nosig = is_nonsignalling(b);
    std::printf("%s: marginals are independent of the far input\n", nosig ? "PASS" : "FAIL");
    if (!nosig) {
        for (int x = 0; x < b.outputs_a(); ++x)
            for (int u = 0; u < b.inputs_a(); ++u) {
                std::optional<Scalar> ref;
                int ref_v = 0;
                for (int v = 0; v < b.inputs_b(); ++v) {
                    Scalar s(0);
                    for (int y = 0; y < b.outputs_b(); ++y) s += b.at(x, y, u, v);
                    if (!ref) {
                        ref = s;
                        ref_v = v;
                    } else if (*ref != s) {
                        std::printf("  Alice marginal of x=%d at u=%d: %s at v=%d vs %s at v=%d\n",
                                    x, u, ref->str().c_str(), ref_v, s.str().c_str(), v);
                        goto bob;
                    }
                }
            }
    bob:
        for (int y = 0; y < b.outputs_b(); ++y)
            for (int v = 0; v < b.inputs_b(); ++v) {
                std::optional<Scalar> ref;
                int ref_u = 0;
                for (int u = 0; u < b.inputs_a(); ++u) {
                    Scalar s(0);
                    for (int x = 0; x < b.outputs_a(); ++x) s += b.at(x, y, u, v);
                    if (!ref) {
                        ref = s;
                        ref_u = u;
                    } else if (*ref != s) {
                        std::printf("  Bob marginal of y=%d at v=%d: %s at u=%d vs %s at u=%d\n",
                                    y, v, ref->str().c_str(), ref_u, s.str().c_str(), u);
                        goto done;
                    }
                }
            }
    done:
        ok = false;
    }

    auto bad = first_negative_cell(b);
    std::printf("%s: entries are nonnegative at the probe points\n", bad ? "FAIL" : "PASS");
    if (bad) {
        std::printf("  first negative cell %s\n", bad->str().c_str());
        ok = false;
    }
    return ok;
}

int solve_mode_budget_guard(int n, const std::string& mode) {
    if (mode == "full" && n > 2)
        throw std::domain_error("full enumeration beyond two rounds exceeds the column budget; "
                                "use --mode colgen");
    return 0;
}

struct VerifyPrinter {
    int failures = 0;

    void claim(bool pass, const std::string& text) {
        std::printf("%s: %s\n", pass ? "PASS" : "FAIL", text.c_str());
        if (!pass) ++failures;
    }
};

void verify_identity(VerifyPrinter& p, Identity id, const std::string& text) {
    Decomposition d = known_decomposition(id);
    auto why = check_decomposition(d, identity_target(id));
    p.claim(!why, text + (why ? " [" + *why + "]" : ""));
}

void verify_word_split(VerifyPrinter& p) {
    SnkReport s21 = snk(2, 1);
    p.claim(s21.local.certificate.certified && s21.local.fraction == Rational(1, 2),
            "the mixed two-round word is certified exactly half local");
    Decomposition split = decomposition_from(s21.box, s21.local);
    p.claim(split.remainder_weight == Scalar(1) && verify_decomposition(split, s21.box) &&
                is_nonsignalling(split.remainder) &&
                !first_negative_cell(split.remainder, {Rational(0)}),
            "its non-local rest has unit mass, is nonnegative and non-signalling");

    std::set<uint64_t> products;
    std::vector<LocalDetStrategy> singles;
    enumerate(1, StrategyIterator::Side::both)
        .for_each([&](const LocalDetStrategy& s) { singles.push_back(s); });
    for (const auto& a : singles)
        for (const auto& b : singles) products.insert(product(a, b).encode());
    const Decomposition d = known_decomposition(Identity::snk_pair_local);
    bool none_product = d.terms.size() == 64;
    for (const auto& [w, s] : d.terms) {
        (void)w;
        if (products.count(s.encode()) || is_product(s, 1)) none_product = false;
    }
    p.claim(none_product, "none of the 64 supporting strategies factors into a product");

    for (int n = 1; n <= 2; ++n) {
        p.claim(snk(n, 0).local.weight.is_zero(),
                "the all-perfect word at n=" + std::to_string(n) + " has no local part");
        p.claim(snk(n, n).local.fraction == Rational(1),
                "the all-noise word at n=" + std::to_string(n) + " is fully local");
    }

    const Scalar eps{Poly::variable(Var::eps)};
    p.claim(snk_expansion_check(1, eps) && snk_expansion_check(2, eps),
            "the word expansion reproduces the noisy power symbolically up to n=2");
    p.claim(snk_expansion_check(3, Scalar(Rational(1, 10))),
            "the word expansion reproduces the noisy power at n=3, eps=1/10");
}

void verify_games(VerifyPrinter& p, int n, uint64_t samples, uint64_t seed) {
    if (n <= 2) {
        LossScan scan = worst_case_exhaustive(n);
        p.claim(scan.violations == 0,
                "all " + std::to_string(scan.checked) + " strategy pairs lose at least " +
                    std::to_string(scan.bound) + " round(s) at some input");
        p.claim(scan.min_worst == scan.bound,
                "a pair meeting the floor exists: " + scan.min_witness.str() +
                    " never loses more than " + std::to_string(scan.min_worst));
        return;
    }
    if (n == 3) {
        LossScan scan = worst_case_quotient_n3();
        p.claim(scan.violations == 0,
                "all " + std::to_string(scan.checked) +
                    " output-flip classes lose at least 2 rounds at some input");
    }
    LossScan scan = worst_case_sampled(n, samples, seed);
    p.claim(scan.violations == 0,
            std::to_string(scan.checked) + " sampled pairs at n=" + std::to_string(n) +
                " (seed " + std::to_string(seed) + ") all lose at least " +
                std::to_string(scan.bound) + " round(s); sampled minimum " +
                std::to_string(scan.min_worst));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact local parts of noisy correlation boxes"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads for pricing and sweeps; 0 = all cores")
        ->envname("PRBOX_THREADS");

    // box ------------------------------------------------------------------
    CLI::App* box = app.add_subcommand("box", "construct and inspect boxes");
    box->require_subcommand(1);

    FamilyArgs make_args;
    std::string make_out = "box.json";
    CLI::App* box_make = box->add_subcommand("make", "build a family box and self-check it");
    make_args.add_to(box_make);
    box_make->add_option("--out", make_out, "output JSON path")->capture_default_str();

    std::string check_path;
    CLI::App* box_check = box->add_subcommand("check", "validate a box file");
    box_check->add_option("file", check_path, "box JSON")->required();

    std::vector<std::string> tensor_paths;
    std::string tensor_out = "tensor.json";
    CLI::App* box_tensor = box->add_subcommand("tensor", "tensor two box files");
    box_tensor->add_option("files", tensor_paths, "two box JSON paths")->expected(2);
    box_tensor->add_option("--out", tensor_out, "output JSON path")->capture_default_str();

    std::string export_path, export_out;
    CLI::App* box_export = box->add_subcommand("export", "dump a box as a cell CSV");
    box_export->add_option("file", export_path, "box JSON")->required();
    box_export->add_option("--out", export_out, "CSV path; stdout when omitted");

    // localpart ------------------------------------------------------------
    CLI::App* lpart = app.add_subcommand("localpart", "solve, bound, and sweep local parts");
    lpart->require_subcommand(1);

    FamilyArgs solve_args;
    std::string solve_box_path, solve_mode = "auto", solve_cert = "certificate.json";
    CLI::App* lp_solve = lpart->add_subcommand("solve", "certified local part of one box");
    solve_args.add_to(lp_solve, false);
    lp_solve->get_option("--n")->required(false);
    lp_solve->add_option("--box", solve_box_path, "solve a box file instead of a family member");
    lp_solve->add_option("--mode", solve_mode, "full, colgen, or auto")
        ->check(CLI::IsMember({"auto", "full", "colgen"}))
        ->capture_default_str();
    lp_solve->add_option("--cert", solve_cert, "certificate output path")->capture_default_str();

    int bounds_n = 1;
    std::string bounds_eps;
    bool bounds_symbolic = false;
    CLI::App* lp_bounds = lpart->add_subcommand("bounds", "isotropic envelope at one point");
    lp_bounds->add_option("--n", bounds_n, "number of rounds")->required();
    lp_bounds->add_option("--eps", bounds_eps, "noise parameter, exact rational p/q");
    lp_bounds->add_flag("--symbolic", bounds_symbolic, "print coefficient lists instead");

    FamilyArgs sweep_args;
    std::string sweep_grid = "1/64", sweep_from = "0", sweep_to, sweep_csv_path = "sweep.csv";
    std::string sweep_report, sweep_cert_dir, sweep_mode = "colgen";
    int sweep_refine = 0;
    CLI::App* lp_sweep = lpart->add_subcommand("sweep", "grid sweep with piecewise fit");
    sweep_args.add_to(lp_sweep, false);
    lp_sweep->add_option("--grid", sweep_grid, "grid step, exact rational")->capture_default_str();
    lp_sweep->add_option("--from", sweep_from, "grid start")->capture_default_str();
    lp_sweep->add_option("--to", sweep_to, "grid end; family maximum when omitted");
    lp_sweep->add_option("--refine", sweep_refine, "refinement passes around breaks")
        ->capture_default_str();
    lp_sweep->add_option("--mode", sweep_mode, "full or colgen")
        ->check(CLI::IsMember({"full", "colgen"}))
        ->capture_default_str();
    lp_sweep->add_option("--csv", sweep_csv_path, "CSV output path")->capture_default_str();
    lp_sweep->add_option("--report", sweep_report, "JSON report path");
    lp_sweep->add_option("--cert-dir", sweep_cert_dir,
                         "certificate directory; <csv>.certs when omitted");

    // verify ----------------------------------------------------------------
    CLI::App* verify = app.add_subcommand("verify", "re-check the library's claims");
    verify->require_subcommand(1);
    CLI::App* v_iso1 = verify->add_subcommand(
        "iso-single", "single-round isotropic decomposition, symbolically");
    CLI::App* v_biased1 = verify->add_subcommand(
        "biased-single", "single-round biased decomposition, symbolically");
    CLI::App* v_iso2 = verify->add_subcommand(
        "iso-pair", "two-round 128-strategy decomposition, symbolically");
    CLI::App* v_word = verify->add_subcommand(
        "word-split", "mixed-word local/non-local split and expansion");
    int games_n = 2;
    uint64_t games_samples = 1000000, games_seed = 1;
    CLI::App* v_games = verify->add_subcommand("games", "round-loss floors over strategies");
    v_games->add_option("--n", games_n, "number of rounds, 1 to 5")->required();
    v_games->add_option("--samples", games_samples, "sample count for n >= 3")
        ->capture_default_str();
    v_games->add_option("--seed", games_seed, "sampling seed")->capture_default_str();
    std::string vc_box, vc_cert;
    CLI::App* v_cert = verify->add_subcommand("certificate", "re-verify a certificate file");
    v_cert->add_option("--box", vc_box, "box JSON")->required();
    v_cert->add_option("--cert", vc_cert, "certificate JSON")->required();
    CLI::App* v_all = verify->add_subcommand("all", "every quick suite");

    // snk --------------------------------------------------------------------
    int snk_n = 2, snk_k = 1;
    std::string snk_mode = "auto", snk_report_path, snk_cert;
    std::string snk_expansion_eps;
    CLI::App* snk_cmd = app.add_subcommand("snk", "tensor-word sums and their local fractions");
    snk_cmd->add_option("--n", snk_n, "number of rounds, at most 3")->required();
    snk_cmd->add_option("--k", snk_k, "number of fully noisy factors")->required();
    snk_cmd->add_option("--mode", snk_mode, "full, colgen, or auto")
        ->check(CLI::IsMember({"auto", "full", "colgen"}))
        ->capture_default_str();
    snk_cmd->add_option("--report", snk_report_path, "JSON report path");
    snk_cmd->add_option("--cert", snk_cert, "certificate output path; s<n><k>.cert.json default");
    snk_cmd->add_option("--expansion", snk_expansion_eps,
                        "also check the word expansion; symbolic for n <= 2, at this "
                        "rational eps for n = 3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        // box ----------------------------------------------------------------
        if (box_make->parsed()) {
            Box b = make_args.build();
            write_file(make_out, box_to_json(b).dump(2) + "\n");
            log_line("wrote " + make_out);
            return print_box_checks(b) ? kExitOk : kExitClaimFailed;
        }
        if (box_check->parsed()) {
            Box b = box_from_json(read_json(check_path));
            return print_box_checks(b) ? kExitOk : kExitClaimFailed;
        }
        if (box_tensor->parsed()) {
            Box a = box_from_json(read_json(tensor_paths[0]));
            Box b = box_from_json(read_json(tensor_paths[1]));
            Box t = tensor(a, b);
            write_file(tensor_out, box_to_json(t).dump(2) + "\n");
            std::printf("mass %s, %zu cells\n", t.mass().str().c_str(), t.size());
            return kExitOk;
        }
        if (box_export->parsed()) {
            Box b = box_from_json(read_json(export_path));
            std::string csv = "x,y,u,v,value,value_approx\n";
            for (size_t c = 0; c < b.size(); ++c) {
                const CellRef r = b.cell(c);
                const Scalar& e = b[c];
                csv += std::to_string(r.x) + ',' + std::to_string(r.y) + ',' +
                       std::to_string(r.u) + ',' + std::to_string(r.v) + ',' + e.str() + ',';
                if (e.is_rational()) csv += approx_text(e.rational());
                csv += '\n';
            }
            if (export_out.empty())
                std::fputs(csv.c_str(), stdout);
            else
                write_file(export_out, csv);
            return kExitOk;
        }

        // localpart ------------------------------------------------------------
        if (lp_solve->parsed()) {
            Box b;
            ColGenOptions opt;
            opt.threads = threads;
            if (!solve_box_path.empty()) {
                b = box_from_json(read_json(solve_box_path));
            } else {
                b = solve_args.build();
                opt.warm_start = warm_start(solve_args.parsed_family(), solve_args.n);
            }
            if (b.var() != Var::none)
                throw std::invalid_argument("solving needs a rational box; fix the parameter");
            const int n = b.rounds();
            log_group(n);
            solve_mode_budget_guard(n, solve_mode);
            SolveMode mode = solve_mode == "full" || (solve_mode == "auto" && n <= 2)
                                 ? SolveMode::full
                                 : SolveMode::colgen;

            LocalPart lp = local_part(b, mode, opt);
            write_file(solve_cert, certificate_to_json(lp.certificate, lp.columns).dump(2) + "\n");
            log_line("wrote " + solve_cert);

            std::printf("local part: %s\n", value_text(lp.weight).c_str());
            if (lp.fraction != lp.weight)
                std::printf("fraction of mass %s: %s\n", b.mass().str().c_str(),
                            value_text(lp.fraction).c_str());
            std::printf("certified: %s (%s pricing)\n", lp.certificate.certified ? "yes" : "NO",
                        gap_mode_name(lp.certificate.gap_mode));
            if (!lp.certificate.certified) {
                std::printf("bracket: %s <= optimum <= %s\n", lp.weight.str().c_str(),
                            lp.upper_bound.str().c_str());
                return kExitNotCertified;
            }
            return kExitOk;
        }
        if (lp_bounds->parsed()) {
            if (bounds_symbolic) {
                const Scalar eps{Poly::variable(Var::eps)};
                std::printf("counting upper bound: %s\n",
                            upper_bound_isotropic(bounds_n, eps).str().c_str());
                std::printf("small-noise lower bound: %s\n",
                            lower_bound_isotropic(bounds_n, eps).str().c_str());
                std::printf("pairing lower bound: %s\n",
                            pairing_lower_bound(bounds_n, eps).str().c_str());
                return kExitOk;
            }
            if (bounds_eps.empty()) throw std::invalid_argument("give --eps or --symbolic");
            const Scalar eps{Rational::parse(bounds_eps)};
            std::printf("counting upper bound: %s\n",
                        value_text(upper_bound_isotropic(bounds_n, eps).rational()).c_str());
            std::printf("small-noise lower bound: %s\n",
                        value_text(lower_bound_isotropic(bounds_n, eps).rational()).c_str());
            std::printf("pairing lower bound: %s\n",
                        value_text(pairing_lower_bound(bounds_n, eps).rational()).c_str());
            return kExitOk;
        }
        if (lp_sweep->parsed()) {
            const BoxFamily family = sweep_args.parsed_family();
            const Rational lo = Rational::parse(sweep_from);
            const Rational hi =
                sweep_to.empty() ? family_param_max(family) : Rational::parse(sweep_to);
            std::vector<Rational> grid = uniform_grid(lo, hi, Rational::parse(sweep_grid));
            log_group(sweep_args.n);

            SweepOptions opt;
            opt.mode = sweep_mode == "full" ? SolveMode::full : SolveMode::colgen;
            solve_mode_budget_guard(sweep_args.n, sweep_mode);
            opt.refine = sweep_refine;
            opt.colgen.threads = threads;
            SweepResult r = sweep(family, sweep_args.n, grid, opt);

            const std::string cert_dir =
                sweep_cert_dir.empty() ? sweep_csv_path + ".certs" : sweep_cert_dir;
            std::vector<std::string> cert_files;
            bool all_certified = true;
            for (const auto& s : r.samples) {
                std::string name = s.param.str();
                for (auto& ch : name)
                    if (ch == '/') ch = '_';
                name = cert_dir + "/" + name + ".cert.json";
                write_file(name,
                           certificate_to_json(s.result.certificate, s.result.columns).dump(2) +
                               "\n");
                cert_files.push_back(name);
                all_certified = all_certified && s.result.certificate.certified;
            }
            write_file(sweep_csv_path, sweep_csv(r, cert_files));
            log_line("wrote " + sweep_csv_path + " and " + std::to_string(cert_files.size()) +
                     " certificates under " + cert_dir);
            if (!sweep_report.empty()) {
                write_file(sweep_report, sweep_to_json(r, cert_files).dump(2) + "\n");
                log_line("wrote " + sweep_report);
            }

            std::printf("samples: %zu, pieces: %zu\n", r.samples.size(), r.pieces.size());
            for (size_t i = 0; i < r.pieces.size(); ++i) {
                const auto& p = r.pieces[i];
                std::printf("piece %zu: [%s, %s] poly %s\n", i,
                            r.samples[p.first].param.str().c_str(),
                            r.samples[p.last].param.str().c_str(), p.poly.str().c_str());
            }
            for (const auto& bdy : r.boundaries)
                std::printf("boundary in [%s, %s]: %s\n", bdy.lo.str().c_str(),
                            bdy.hi.str().c_str(),
                            bdy.continuous ? "continuous" : "possible jump, refine further");
            return all_certified ? kExitOk : kExitNotCertified;
        }

        // verify -----------------------------------------------------------------
        VerifyPrinter printer;
        if (v_iso1->parsed() || v_all->parsed())
            verify_identity(printer, Identity::iso_single,
                            "single-round isotropic box splits into 8 strategies at eps/2 "
                            "plus (1-4eps) times the perfect box");
        if (v_biased1->parsed() || v_all->parsed())
            verify_identity(printer, Identity::biased_single,
                            "single-round biased box splits into 3 strategies at delta "
                            "plus (1-3delta) times the perfect box");
        if (v_iso2->parsed() || v_all->parsed())
            verify_identity(printer, Identity::iso_pair,
                            "two-round isotropic box splits into 128 orbit strategies "
                            "plus (1-4eps) times the noiseless pair");
        if (v_word->parsed() || v_all->parsed()) verify_word_split(printer);
        if (v_games->parsed()) {
            if (games_n < 1 || games_n > 5)
                throw std::invalid_argument("games: --n must be between 1 and 5");
            verify_games(printer, games_n, games_samples, games_seed);
        } else if (v_all->parsed()) {
            verify_games(printer, 1, games_samples, games_seed);
            verify_games(printer, 2, games_samples, games_seed);
        }
        if (v_cert->parsed()) {
            Box b = box_from_json(read_json(vc_box));
            auto [cert, cols] = certificate_from_json(read_json(vc_cert));
            auto why = reverify_certificate(b, cert, cols, threads);
            printer.claim(!why, "certificate re-verifies against a fresh master and "
                                "an independent pricing pass" +
                                    (why ? " [" + *why + "]" : ""));
            if (!why && !cert.certified) {
                std::printf("note: the file does not claim optimality\n");
                return kExitNotCertified;
            }
        }
        if (verify->parsed()) return printer.failures == 0 ? kExitOk : kExitClaimFailed;

        // snk ----------------------------------------------------------------------
        if (snk_cmd->parsed()) {
            SolveMode mode = snk_mode == "full" || (snk_mode == "auto" && snk_n <= 2)
                                 ? SolveMode::full
                                 : SolveMode::colgen;
            solve_mode_budget_guard(snk_n, snk_mode);
            ColGenOptions opt;
            opt.threads = threads;
            log_group(snk_n);
            SnkReport r = snk(snk_n, snk_k, mode, opt);

            const std::string cert_path =
                snk_cert.empty()
                    ? "s" + std::to_string(snk_n) + std::to_string(snk_k) + ".cert.json"
                    : snk_cert;
            write_file(cert_path,
                       certificate_to_json(r.local.certificate, r.local.columns).dump(2) + "\n");
            log_line("wrote " + cert_path);
            if (!snk_report_path.empty()) {
                write_file(snk_report_path, snk_to_json(r, cert_path).dump(2) + "\n");
                log_line("wrote " + snk_report_path);
            }

            std::printf("word sum: n=%d k=%d, mass %s\n", r.n, r.k, r.mass.str().c_str());
            std::printf("local weight: %s\n", value_text(r.local.weight).c_str());
            std::printf("local fraction: %s\n", value_text(r.local.fraction).c_str());
            std::printf("certified: %s (%s pricing)\n",
                        r.local.certificate.certified ? "yes" : "NO",
                        gap_mode_name(r.local.certificate.gap_mode));

            bool expansion_ok = true;
            if (!snk_expansion_eps.empty()) {
                const Scalar at = snk_n <= 2 ? Scalar(Poly::variable(Var::eps))
                                             : Scalar(Rational::parse(snk_expansion_eps));
                expansion_ok = snk_expansion_check(snk_n, at);
                std::printf("%s: expansion over the words reproduces the noisy power (%s)\n",
                            expansion_ok ? "PASS" : "FAIL",
                            snk_n <= 2 ? "symbolic" : at.str().c_str());
            }
            if (!expansion_ok) return kExitClaimFailed;
            return r.local.certificate.certified ? kExitOk : kExitNotCertified;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClaimFailed;
    }
    return kExitUsage;
}
