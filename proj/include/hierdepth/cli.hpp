#pragma once

// Command-line front end. Reports go to `out` as JSON (or flattened text),
// diagnostics to `err`. Exit status: 0 on success (including NoFiltration and
// infeasible distance answers), 1 on malformed input, 2 on other domain errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hierdepth/agcode.hpp"
#include "hierdepth/bundle.hpp"
#include "hierdepth/depth.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/hecke.hpp"
#include "hierdepth/notation.hpp"
#include "hierdepth/picard.hpp"

namespace hierdepth::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct RunConfig {
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
};

namespace detail {

inline Json rational(const Rational& q) { return to_string(q); }

inline Json depth_json(const depth::DepthResult& r) {
    return r.has_value() ? Json(r.value()) : Json(nullptr);
}

inline void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    } else {
        os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

inline void emit(const Json& report, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "text") {
        flatten(report, "", out);
    } else {
        out << report.dump(2) << '\n';
    }
}

inline Json depth_report(const std::string& lattice_text, bool curve, const std::string& degrees_text,
                         const std::string& bundle_text, const std::string& lambda0_text) {
    const auto L = curve ? picard::Lattice::curve() : notation::parse_lattice(lattice_text);
    if (degrees_text.empty() == bundle_text.empty()) {
        throw Error(Errc::ParseError, "--degrees/--bundle: give exactly one");
    }
    const auto b = !degrees_text.empty()
                       ? [&] {
                             std::vector<picard::DivisorClass> s;
                             for (auto d : notation::parse_int_list(degrees_text, "--degrees"))
                                 s.push_back(picard::DivisorClass::generator(L, 0, d));
                             if (s.empty()) throw Error(Errc::ParseError, "--degrees: empty list");
                             return bundle::SplitBundle(std::move(s));
                         }()
                       : notation::parse_bundle(bundle_text, L);
    const bool numeric = lambda0_text.find_first_not_of(" +-0123456789") == std::string::npos;
    const auto lambda0 = numeric ? picard::DivisorClass::generator(L, 0, notation::parse_int(lambda0_text, "--lambda0"))
                                 : notation::parse_class(lambda0_text, L);
    const auto det = bundle::det(b);
    const auto delta = det - lambda0;

    Json j;
    j["command"] = "depth";
    j["lattice"] = L.name();
    j["det"] = notation::format_class(det);
    j["lambda0"] = notation::format_class(lambda0);
    j["bound"] = delta.total();
    depth::DepthResult lower = depth::DepthResult::no_filtration();
    depth::DepthResult upper = depth::DepthResult::no_filtration();
    if (L.kind() == picard::LatticeKind::Curve) {
        lower = upper = depth::curve_split_depth(b.degrees(), lambda0[0]);
    } else {
        const auto s = depth::surface_split_depth(b, lambda0);
        lower = s.lower;
        upper = s.upper;
    }
    j["lower"] = depth_json(lower);
    j["upper"] = depth_json(upper);
    j["value"] = lower == upper ? depth_json(lower) : Json(nullptr);
    j["status"] = lower.has_value() ? "ok" : "no_filtration";
    return j;
}

inline Json code_summary(const std::string& command, const notation::CodeConfig& cfg, const agcode::LinearCode& c) {
    Json j;
    j["command"] = command;
    j["p"] = cfg.p;
    j["space"] = agcode::to_string(cfg.space);
    j["r"] = c.r();
    j["N"] = c.point_count();
    j["n"] = c.length();
    j["k"] = c.k();
    j["message_dim"] = c.message_dim();
    return j;
}

inline gf::PrimeField field_arg(std::uint64_t p) {
    if (p < 2 || p > gf::PrimeField::kMaxModulus || !gf::is_prime(p)) {
        throw Error(Errc::ParseError, "--field: " + std::to_string(p) + " is not a supported prime");
    }
    return gf::PrimeField(static_cast<std::uint32_t>(p));
}

inline notation::CodeConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "--config: cannot open '" + path + "'");
    return notation::parse_code_config(in);
}

}  // namespace detail

/// Parses argv-style arguments (argv[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical depth of split bundles and evaluation codes over prime fields", "hierdepth"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", cfg.seed, "Seed for randomized routines");

    std::string lattice = "curve", degrees, bundle_text, lambda0 = "0";
    bool curve = false;
    auto* depth_cmd = app.add_subcommand("depth", "Depth of a split bundle");
    depth_cmd->add_flag("--curve", curve, "Bundle on a curve (same as --lattice curve)");
    depth_cmd->add_option("--lattice", lattice, "curve | P2 | P1xP1");
    depth_cmd->add_option("--degrees", degrees, "Comma-separated summand degrees");
    depth_cmd->add_option("--bundle", bundle_text, "Bundle notation, e.g. O(3)+O(1)");
    depth_cmd->add_option("--lambda0", lambda0, "Normalization class or degree");

    std::int64_t hmin = 0;
    std::string alpha, beta;
    auto* mmp_depth_cmd = app.add_subcommand("mmp-depth", "Depth on a blowup from minimal-model data");
    mmp_depth_cmd->add_option("--hmin", hmin, "Depth on the minimal model")->required();
    mmp_depth_cmd->add_option("--alpha", alpha, "Exceptional coefficients of det(E)")->required();
    mmp_depth_cmd->add_option("--beta", beta, "Exceptional coefficients of the normalization")->required();

    std::uint64_t field = 5;
    std::string points, covectors;
    auto* hecke_cmd = app.add_subcommand("hecke-verify", "Check that two elementary transforms commute");
    hecke_cmd->add_option("--field", field, "Prime p");
    hecke_cmd->add_option("--degrees", degrees, "Summand degrees on P^1")->required();
    hecke_cmd->add_option("--points", points, "Two points of P^1 (integers or inf)")->required();
    hecke_cmd->add_option("--covectors", covectors, "Two covectors 'a,b;c,d' (default e_1 and e_r)");

    std::int64_t lambda0_degree = 0;
    auto* filt_cmd = app.add_subcommand("filtration", "Build the explicit filtration on P^1");
    filt_cmd->add_option("--field", field, "Prime p");
    filt_cmd->add_option("--degrees", degrees, "Summand degrees")->required();
    filt_cmd->add_option("--lambda0", lambda0_degree, "Normalization degree");

    std::string config_path, export_path;
    std::uint64_t budget = 0;
    auto* build_cmd = app.add_subcommand("code-build", "Build an evaluation code from a config file");
    build_cmd->add_option("--config", config_path, "Config file")->required();
    build_cmd->add_option("--export", export_path, "Write generator rows here ('-' for stdout)");
    auto* analyze_cmd = app.add_subcommand("code-analyze", "Exact parameters and contraction report");
    analyze_cmd->add_option("--config", config_path, "Config file")->required();
    analyze_cmd->add_option("--budget", budget, "Codeword-class budget (overrides config)");
    auto* compare_cmd = app.add_subcommand("mmp-compare", "Compare normalized distance before/after contraction");
    compare_cmd->add_option("--config", config_path, "Config file")->required();
    compare_cmd->add_option("--budget", budget, "Codeword-class budget (overrides config)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        Json report;
        if (depth_cmd->parsed()) {
            report = detail::depth_report(lattice, curve, degrees, bundle_text, lambda0);
        } else if (mmp_depth_cmd->parsed()) {
            const auto a = notation::parse_int_list(alpha, "--alpha");
            const auto b = notation::parse_int_list(beta, "--beta");
            report["command"] = "mmp-depth";
            report["h_min"] = hmin;
            report["alpha"] = a;
            report["beta"] = b;
            report["value"] = depth::mmp_exact_depth(hmin, a, b);
            report["status"] = "ok";
        } else if (hecke_cmd->parsed()) {
            const auto f = detail::field_arg(field);
            const auto d = notation::parse_int_list(degrees, "--degrees");
            if (d.empty()) throw Error(Errc::ParseError, "--degrees: empty list");
            const auto pts = notation::split(points, ',');
            if (pts.size() != 2) throw Error(Errc::ParseError, "--points: expected exactly two points");
            const auto q1 = notation::parse_p1_point(pts[0], f);
            const auto q2 = notation::parse_p1_point(pts[1], f);
            std::vector<std::vector<std::uint32_t>> cov;
            if (covectors.empty()) {
                cov.assign(2, std::vector<std::uint32_t>(d.size(), 0));
                cov[0].front() = 1;
                cov[1].back() = 1;
            } else {
                for (const auto& part : notation::split(covectors, ';')) {
                    std::vector<std::uint32_t> w;
                    for (auto v : notation::parse_int_list(part, "--covectors")) w.push_back(f.reduce(v));
                    if (w.size() != d.size()) throw Error(Errc::ParseError, "--covectors: each needs rank-many entries");
                    cov.push_back(std::move(w));
                }
                if (cov.size() != 2) throw Error(Errc::ParseError, "--covectors: expected two covectors");
            }
            std::int64_t abs_total = 0;
            for (auto x : d) abs_total += x < 0 ? -x : x;
            const auto m = hecke::full_sections(d, abs_total + 3, f);
            const hecke::PointFunctional phi1(q1, cov[0]);
            const hecke::PointFunctional phi2(q2, cov[1]);
            const bool overlap = q1 == q2;
            const auto rep = overlap ? hecke::probe_overlap(m, phi1, phi2) : hecke::commute_check(m, phi1, phi2);
            auto opt = [](const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); };
            report["command"] = "hecke-verify";
            report["field"] = f.p();
            report["degrees"] = d;
            report["points"] = {q1.str(), q2.str()};
            report["covectors"] = cov;
            report["overlap"] = overlap;
            report["dim"] = rep.dim_before;
            report["routes"] = {{"dim_v12", opt(rep.dim_v12())}, {"dim_v21", opt(rep.dim_v21())}, {"dim_joint", rep.dim_joint()}};
            report["equal"] = rep.equal();
        } else if (filt_cmd->parsed()) {
            const auto f = detail::field_arg(field);
            const auto d = notation::parse_int_list(degrees, "--degrees");
            if (d.empty()) throw Error(Errc::ParseError, "--degrees: empty list");
            report["command"] = "filtration";
            report["field"] = f.p();
            report["degrees"] = d;
            report["lambda0"] = lambda0_degree;
            const auto expected = depth::curve_split_depth(d, lambda0_degree);
            if (expected.is_no_filtration()) {
                report["length"] = nullptr;
                report["status"] = "no_filtration";
            } else {
                const auto built = hecke::build_curve_filtration(d, lambda0_degree, f);
                Json pts = Json::array(), cov = Json::array(), dims = Json::array(), dets = Json::array();
                for (const auto& phi : built.transforms) {
                    pts.push_back(phi.point().str());
                    cov.push_back(phi.covector());
                }
                for (const auto& m : built.chain) {
                    dims.push_back(m.dimension());
                    dets.push_back(m.det_degree());
                }
                // listed top-down like dims and det_degrees
                Json slopes = Json::array();
                const auto seq = depth::slope_sequence(built.filtration, picard::DivisorClass::points(1));
                for (auto it = seq.rbegin(); it != seq.rend(); ++it) slopes.push_back(detail::rational(*it));
                report["length"] = built.filtration.length();
                report["status"] = "ok";
                report["twist"] = built.chain.front().twist();
                report["points"] = pts;
                report["covectors"] = cov;
                report["dims"] = dims;
                report["det_degrees"] = dets;
                report["slopes"] = slopes;
                report["verified"] = depth::verify_filtration(built.filtration, bundle::SplitBundle::on_curve(d));
            }
        } else if (build_cmd->parsed()) {
            const auto code_cfg = detail::load_config(config_path);
            const auto code = notation::build_code(code_cfg);
            report = detail::code_summary("code-build", code_cfg, code);
            report["zero_blocks"] = agcode::zero_blocks(code);
            if (export_path == "-") {
                agcode::export_generator(out, code);
                return 0;
            }
            if (!export_path.empty()) {
                std::ofstream os(export_path);
                if (!os) throw Error(Errc::ParseError, "--export: cannot write '" + export_path + "'");
                agcode::export_generator(os, code);
                report["export"] = export_path;
            }
        } else if (analyze_cmd->parsed() || compare_cmd->parsed()) {
            const auto code_cfg = detail::load_config(config_path);
            const auto limit = budget ? budget : code_cfg.budget;
            const auto code = notation::build_code(code_cfg);
            const auto zeros = agcode::zero_blocks(code);
            const auto contraction = agcode::zero_block_contract(code);
            if (compare_cmd->parsed() && contraction.report.empty_code) {
                throw Error(Errc::EmptyMessageSpace, "every evaluation block is zero");
            }
            std::optional<agcode::ComparisonReport> cmp;
            if (!contraction.report.empty_code) cmp = agcode::mmp_compare(code, limit);

            if (analyze_cmd->parsed()) {
                report = detail::code_summary("code-analyze", code_cfg, code);
                report["d_min"] = cmp ? Json(cmp->d_min) : contraction.report.empty_code ? Json(nullptr) : Json("infeasible");
                report["delta"] = cmp ? detail::rational(cmp->delta_before) : Json(nullptr);
                report["zero_blocks"] = zeros;
                report["mmp"] = {{"N_after", contraction.report.n_after},
                                 {"delta_after", cmp ? detail::rational(cmp->delta_after) : Json(nullptr)},
                                 {"ratio", cmp ? detail::rational(cmp->ratio) : Json(nullptr)}};
            } else {
                report["command"] = "mmp-compare";
                report["N"] = code.point_count();
                report["N_after"] = contraction.report.n_after;
                report["N_zero"] = zeros.size();
                report["k"] = code.k();
                report["k_after"] = contraction.report.k_after;
                if (cmp) {
                    report["d_min"] = cmp->d_min;
                    report["delta_before"] = detail::rational(cmp->delta_before);
                    report["delta_after"] = detail::rational(cmp->delta_after);
                    report["ratio"] = detail::rational(cmp->ratio);
                    report["expected_ratio"] = detail::rational(cmp->expected_ratio);
                    report["ratio_matches"] = cmp->ratio_matches;
                    report["strict_improvement"] = cmp->strict_improvement;
                    report["status"] = "ok";
                } else {
                    report["d_min"] = "infeasible";
                    report["status"] = "infeasible";
                }
            }
        }
        detail::emit(report, cfg, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::ParseError ? 1 : 2;
    }
}

}  // namespace hierdepth::cli
