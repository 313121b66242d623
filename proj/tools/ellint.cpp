#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ellint/cli.hpp"

namespace {

using ellint::cli::Command;
using ellint::cli::RunConfig;

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& tau_text, std::string& gamma_text,
                std::string& eps_text) {
    sub->add_option("--tau", tau_text, "complex tau, e.g. 0.2+1.1i or i");
    sub->add_option("--gamma", gamma_text, "SL(2,Z) entries A,B,C,D");
    sub->add_option("--eps-schedule", eps_text, "decreasing eps list, e.g. 1e-2,1e-3,1e-4");
    sub->add_option("--L", cfg.quadrature.L, "upper Schwinger cutoff");
    sub->add_option("--grid", cfg.quadrature.grid_per_dim, "grid per dimension at the first eps");
    sub->add_option("--excision", cfg.quadrature.excision_radius, "excision radius (units of the shorter period)");
    sub->add_option("--tol", cfg.quadrature.sums.tol, "series tolerance");
    sub->add_option("--output", cfg.output, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feynman graph integrals on elliptic curves"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string tau_text = "i", gamma_text, eps_text, method_text, im_range = "0.8:2.0:25",
                ns_text;

    auto* eval = app.add_subcommand("eval", "evaluate a graph integral W(tau)");
    eval->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
    eval->add_option("--method", method_text, "regulated or excised");
    add_common(eval, cfg, tau_text, gamma_text, eps_text);

    auto* polys = app.add_subcommand("polys", "graph polynomial report at fixed Schwinger times");
    polys->add_option("--graph", cfg.graph_path)->required();
    std::string t_text;
    polys->add_option("--t", t_text, "comma-separated Schwinger times (default all 1)");
    polys->add_option("--base", cfg.base_vertex, "base vertex name (default: last)");
    polys->add_option("--side1", cfg.side1, "cut seed vertex");
    polys->add_option("--side2", cfg.side2, "cut seed vertex");
    add_common(polys, cfg, tau_text, gamma_text, eps_text);

    auto* selfloop = app.add_subcommand("selfloop", "closed self-loop value");
    selfloop->add_option("--n", cfg.selfloop_n, "decoration")->required();
    add_common(selfloop, cfg, tau_text, gamma_text, eps_text);

    auto* aconst = app.add_subcommand("a-const", "exact collapse constant A(n0; ns)");
    aconst->add_option("--n0", cfg.n0)->required();
    aconst->add_option("--ns", ns_text, "comma-separated list (may be empty)");
    add_common(aconst, cfg, tau_text, gamma_text, eps_text);

    auto* modularity = app.add_subcommand("check-modularity", "weight-residual under gamma");
    modularity->add_option("--graph", cfg.graph_path)->required();
    add_common(modularity, cfg, tau_text, gamma_text, eps_text);

    auto* anomaly = app.add_subcommand("check-anomaly", "deletion-contraction recursion residual");
    anomaly->add_option("--graph", cfg.graph_path)->required();
    anomaly->add_option("--h", cfg.h, "Wirtinger step");
    add_common(anomaly, cfg, tau_text, gamma_text, eps_text);

    auto* scan = app.add_subcommand("scan", "W along a vertical tau segment");
    scan->add_option("--graph", cfg.graph_path)->required();
    scan->add_option("--re", cfg.scan_re, "fixed Re tau");
    scan->add_option("--im", im_range, "lo:hi:count for Im tau");
    add_common(scan, cfg, tau_text, gamma_text, eps_text);

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) cfg.command = Command::Eval;
        if (polys->parsed()) cfg.command = Command::Polys;
        if (selfloop->parsed()) cfg.command = Command::Selfloop;
        if (aconst->parsed()) cfg.command = Command::AConst;
        if (modularity->parsed()) cfg.command = Command::CheckModularity;
        if (anomaly->parsed()) cfg.command = Command::CheckAnomaly;
        if (scan->parsed()) cfg.command = Command::Scan;

        cfg.tau = ellint::cli::parse_complex(tau_text);
        if (!(cfg.tau.imag() > 0)) throw ellint::Error("tau must have positive imaginary part");
        if (!eps_text.empty()) cfg.quadrature.eps_schedule = parse_schedule(eps_text);
        if (!gamma_text.empty()) {
            const std::vector<double> v = parse_schedule(gamma_text);
            if (v.size() != 4) throw ellint::Error("--gamma needs A,B,C,D");
            cfg.gamma = ellint::ModularGroupElement(
                static_cast<long long>(v[0]), static_cast<long long>(v[1]),
                static_cast<long long>(v[2]), static_cast<long long>(v[3]));
        }
        if (!method_text.empty()) {
            if (method_text == "excised" || method_text == "excised-direct")
                cfg.quadrature.method = ellint::Method::ExcisedDirect;
            else if (method_text == "regulated" || method_text == "regulated-extrapolated")
                cfg.quadrature.method = ellint::Method::RegulatedExtrapolated;
            else
                throw ellint::Error("unknown method: " + method_text);
        }
        if (!t_text.empty())
            for (double v : parse_schedule(t_text)) cfg.schwinger_t.push_back(v);
        if (!ns_text.empty())
            for (double v : parse_schedule(ns_text)) cfg.ns.push_back(static_cast<int>(v));
        if (scan->parsed()) {
            std::stringstream ss(im_range);
            std::string lo, hi, count;
            if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') ||
                !std::getline(ss, count, ':'))
                throw ellint::Error("--im needs lo:hi:count");
            cfg.scan_im_lo = std::stod(lo);
            cfg.scan_im_hi = std::stod(hi);
            cfg.scan_count = std::stoi(count);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    return ellint::cli::run(cfg, std::cout, std::cerr);
}
