/*
 * orbitmatch — command-line front end.
 *
 *   grade    grade a cocharacter and report the parabolic family
 *   orbits   enumerate both orbit pictures
 *   match    run the matching map (verification without the polynomials)
 *   kl       dump a symmetric-group Kazhdan–Lusztig table
 *   klv      dump a clan block (geometric side tables)
 *   verify   full comparison; exits 0 iff every check passes
 *   sweep    verify across all lambda classes up to --max-n
 *
 * Exit codes: 0 success, 1 failed checks or internal error, 2 malformed
 * input, 3 invalid lambda (non-integral or non-dominant pairings).
 */

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "om/error.hpp"
#include "om/pipeline.hpp"

namespace {

using om::Error;
using om::ErrorKind;
using om::Rat;
namespace pl = om::pipeline;

om::rootdata::CartanType parse_type(const std::string& s) {
    using om::rootdata::CartanType;
    if (s == "gl" || s == "GL") return CartanType::GL;
    if (s == "a" || s == "A") return CartanType::A;
    if (s == "b" || s == "B") return CartanType::B;
    if (s == "c" || s == "C") return CartanType::C;
    if (s == "d" || s == "D") return CartanType::D;
    if (s == "e6" || s == "E6") return CartanType::E6;
    if (s == "e7" || s == "E7") return CartanType::E7;
    if (s == "e8" || s == "E8") return CartanType::E8;
    if (s == "f4" || s == "F4") return CartanType::F4;
    if (s == "g2" || s == "G2") return CartanType::G2;
    throw Error(ErrorKind::ParseError, "unknown type '" + s + "'");
}

long long parse_int(const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

Rat parse_rat(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(parse_int(s));
        return Rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad rational '" + s + "'");
    }
}

/* "2,1,0,0" or "0,2,0,0-halved" (trailing -halved divides every entry by 2). */
std::vector<Rat> parse_lambda(std::string s) {
    bool halved = false;
    const std::string suffix = "-halved";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        halved = true;
        s.erase(s.size() - suffix.size());
    }
    std::vector<Rat> lambda;
    std::string piece;
    std::istringstream is(s);
    while (std::getline(is, piece, ',')) {
        if (piece.empty()) throw Error(ErrorKind::ParseError, "empty lambda entry");
        lambda.push_back(parse_rat(piece));
    }
    if (lambda.empty()) throw Error(ErrorKind::ParseError, "empty lambda");
    if (halved)
        for (Rat& r : lambda) r /= Rat(2);
    return lambda;
}

void emit(const pl::json& report, bool as_json, const std::string& out_path) {
    const std::string body = as_json ? report.dump(2) + "\n" : pl::render_text(report);
    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw Error(ErrorKind::ParseError, "cannot open --out file " + out_path);
        os << body;
    }
}

int exit_code_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidType:
        case ErrorKind::UnsupportedType:
            return 2;
        case ErrorKind::NonIntegralLambda:
        case ErrorKind::NonDominantLambda:
            return 3;
        default:
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbit matching and polynomial verification for graded GL families"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    bool as_json = false;
    std::string cache_dir;
    std::uint64_t seed = 0;
    app.add_flag("--json", as_json, "emit the JSON report instead of text");
    app.add_option("--cache-dir", cache_dir, "directory for persistent engine tables");
    app.add_option("--seed", seed, "seed for the random-representative checks");

    std::string type_s = "gl", lambda_s, ordering = "default", mode_s = "K", out_path;
    int rank = 0, kl_n = 0, klv_p = 0, klv_q = 0, max_n = 4, jobs = 1;
    bool two_step = false;
    double budget = 0.0;

    auto add_grading_opts = [&](CLI::App* c, bool needs_lambda = true) {
        c->add_option("--type", type_s, "cartan type: gl a b c d e6 e7 e8 f4 g2")
            ->capture_default_str();
        c->add_option("--rank", rank, "matrix size n for gl, Lie rank otherwise")->required();
        auto* lo = c->add_option("--lambda", lambda_s,
                                 "comma-separated rationals; append -halved to divide by 2");
        if (needs_lambda) lo->required();
    };
    auto add_map_opts = [&](CLI::App* c) {
        c->add_option("--ordering", ordering,
                      "family member ordering: default | all | comma-separated 0-based permutation")
            ->capture_default_str();
        c->add_option("--mode", mode_s, "K (K-orbits on G/P) or P (P-orbits)")
            ->capture_default_str();
        c->add_flag("--two-step", two_step, "single-exponential construction");
    };

    CLI::App* grade = app.add_subcommand("grade", "grade a cocharacter");
    add_grading_opts(grade);
    CLI::App* orbits = app.add_subcommand("orbits", "enumerate both orbit pictures");
    add_grading_opts(orbits);
    CLI::App* match = app.add_subcommand("match", "run the matching map");
    add_grading_opts(match);
    add_map_opts(match);
    CLI::App* kl = app.add_subcommand("kl", "dump a symmetric-group KL table");
    kl->add_option("--n", kl_n, "symmetric group size")->required();
    CLI::App* klv = app.add_subcommand("klv", "dump a clan block");
    klv->add_option("--p", klv_p, "signature part p")->required();
    klv->add_option("--q", klv_q, "signature part q")->required();
    CLI::App* verify = app.add_subcommand("verify", "full polynomial comparison");
    add_grading_opts(verify);
    add_map_opts(verify);
    verify->add_option("--out", out_path, "write the report to a file");
    CLI::App* sweep = app.add_subcommand("sweep", "verify all lambda classes up to --max-n");
    sweep->add_option("--max-n", max_n, "largest matrix size")->capture_default_str();
    sweep->add_option("--budget-seconds", budget, "wall-clock budget; 0 = unlimited")
        ->capture_default_str();
    sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    add_map_opts(sweep);
    sweep->add_option("--out", out_path, "write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        om::cache::Cache cache(cache_dir);
        pl::Options opt;
        opt.type = parse_type(type_s);
        opt.rank = rank;
        if (!lambda_s.empty()) opt.lambda = parse_lambda(lambda_s);
        opt.ordering = ordering;
        if (mode_s != "K" && mode_s != "P")
            throw Error(ErrorKind::ParseError, "--mode must be K or P");
        opt.mode = mode_s[0];
        opt.two_step = two_step;
        opt.seed = seed;
        opt.jobs = jobs;

        if (grade->parsed()) {
            emit(pl::run_grade(opt), as_json, out_path);
        } else if (orbits->parsed()) {
            emit(pl::run_orbits(opt), as_json, out_path);
        } else if (match->parsed()) {
            emit(pl::run_match(opt, cache), as_json, out_path);
        } else if (kl->parsed()) {
            emit(pl::run_kl(kl_n, cache), as_json, out_path);
        } else if (klv->parsed()) {
            emit(pl::run_klv(klv_p, klv_q, cache), as_json, out_path);
        } else if (verify->parsed()) {
            pl::VerifyOutcome out = pl::run_verify(opt, cache);
            emit(out.report, as_json, out_path);
            return out.ok ? 0 : 1;
        } else if (sweep->parsed()) {
            pl::VerifyOutcome out = pl::run_sweep(max_n, budget, opt, cache);
            emit(out.report, as_json, out_path);
            return out.ok ? 0 : 1;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_of(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
