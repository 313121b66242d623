#include "ellint/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ellint/graph_io.hpp"
#include "ellint/graph_polynomials.hpp"
#include "ellint/propagator.hpp"

namespace ellint::cli {

using nlohmann::json;

Complex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty complex literal");

    // split into real and imaginary pieces at a '+'/'-' that is not an
    // exponent sign and not leading
    auto read_num = [](const std::string& p) -> double {
        if (p.empty() || p == "+") return 1.0;
        if (p == "-") return -1.0;
        size_t used = 0;
        const double v = std::stod(p, &used);
        if (used != p.size()) throw ParseError("bad number: " + p);
        return v;
    };
    size_t split = std::string::npos;
    for (size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
            split = i; // last such sign separates the parts
    }
    try {
        const bool has_i = s.back() == 'i' || s.back() == 'I';
        if (!has_i) return {read_num(s), 0.0};
        const std::string body = s.substr(0, s.size() - 1);
        if (split == std::string::npos || split >= body.size())
            return {0.0, read_num(body)};
        return {read_num(body.substr(0, split)), read_num(body.substr(split))};
    } catch (const std::exception&) {
        throw ParseError("bad complex literal: " + text);
    }
}

namespace {

json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json params_json(const RunConfig& cfg) {
    json p;
    p["tau"] = complex_json(cfg.tau);
    p["L"] = cfg.quadrature.L;
    p["grid"] = cfg.quadrature.grid_per_dim;
    p["excision"] = cfg.quadrature.excision_radius;
    p["eps_schedule"] = cfg.quadrature.eps_schedule;
    p["tol"] = cfg.quadrature.sums.tol;
    p["method"] = cfg.quadrature.method == Method::RegulatedExtrapolated
                      ? "regulated-extrapolated"
                      : "excised-direct";
    if (!cfg.graph_path.empty()) p["graph"] = cfg.graph_path;
    if (cfg.gamma) {
        p["gamma"] = {cfg.gamma->A, cfg.gamma->B, cfg.gamma->C, cfg.gamma->D};
    }
    return p;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        if (text.empty() || text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw Error("cannot write " + cfg.output);
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

std::string run_command(const RunConfig& cfg) {
    std::ostringstream os;
    os << std::setprecision(17);
    switch (cfg.command) {
        case Command::Eval: {
            const DecoratedGraph g = parse_graph_file(cfg.graph_path);
            const GraphIntegralResult r =
                graph_integral(g, ModularPoint(cfg.tau), cfg.quadrature);
            json j;
            j["value"] = complex_json(r.value);
            j["err"] = r.err;
            j["method"] = r.method;
            j["params"] = params_json(cfg);
            return j.dump(2);
        }
        case Command::Selfloop: {
            const Complex v = self_loop_value(cfg.selfloop_n, ModularPoint(cfg.tau),
                                              cfg.quadrature.sums);
            json j;
            j["n"] = cfg.selfloop_n;
            j["value"] = complex_json(v);
            j["params"] = params_json(cfg);
            return j.dump(2);
        }
        case Command::AConst: {
            const Rational a = a_constant(cfg.n0, cfg.ns);
            json j;
            j["n0"] = cfg.n0;
            j["ns"] = cfg.ns;
            j["a"] = a.to_string();
            j["decimal"] = a.to_double();
            return j.dump(2);
        }
        case Command::Polys: {
            const DecoratedGraph g = parse_graph_file(cfg.graph_path);
            SchwingerVector t = cfg.schwinger_t;
            if (t.empty()) t.assign(g.num_edges(), 1.0);
            if (static_cast<int>(t.size()) != g.num_edges())
                throw Error("need one Schwinger time per edge");
            const int base = cfg.base_vertex.empty() ? g.num_vertices() - 1
                                                     : g.vertex_index(cfg.base_vertex);
            json j;
            j["det"] = kirchhoff_det(g, t, base);
            j["tree_polynomial"] = tree_polynomial(g, t);
            j["trees"] = json::array();
            for (const auto& tree : spanning_trees(g)) j["trees"].push_back(tree);
            j["edge_coeff_bound"] = edge_coeff_bound(g, t, base);
            if (!cfg.side1.empty() && !cfg.side2.empty()) {
                j["cuts"] = json::array();
                for (const CutSet& c :
                     cuts(g, {g.vertex_index(cfg.side1)}, {g.vertex_index(cfg.side2)})) {
                    json cj;
                    cj["edges"] = c.edges;
                    cj["side1"] = c.side1;
                    cj["side2"] = c.side2;
                    j["cuts"].push_back(cj);
                }
            }
            j["params"] = {{"t", t}, {"base", base}, {"graph", cfg.graph_path}};
            return j.dump(2);
        }
        case Command::CheckModularity: {
            const DecoratedGraph g = parse_graph_file(cfg.graph_path);
            if (!cfg.gamma) throw Error("check-modularity needs --gamma A,B,C,D");
            const double r =
                modularity_check(g, ModularPoint(cfg.tau), *cfg.gamma, cfg.quadrature);
            int weight = 0;
            for (const Edge& e : g.edges()) weight += e.n + 2;
            json j;
            j["residual"] = r;
            j["weight"] = weight;
            j["params"] = params_json(cfg);
            return j.dump(2);
        }
        case Command::CheckAnomaly: {
            const DecoratedGraph g = parse_graph_file(cfg.graph_path);
            const AnomalyResult r =
                anomaly_check(g, ModularPoint(cfg.tau), cfg.quadrature, cfg.h);
            json j;
            j["lhs"] = complex_json(r.lhs);
            j["rhs"] = complex_json(r.rhs);
            j["residual"] = r.residual;
            j["lhs_err"] = r.lhs_err;
            json p = params_json(cfg);
            p["h"] = cfg.h;
            j["params"] = p;
            return j.dump(2);
        }
        case Command::Scan: {
            const DecoratedGraph g = parse_graph_file(cfg.graph_path);
            if (cfg.scan_count < 1) throw Error("scan needs at least one point");
            std::ostringstream csv;
            csv << std::setprecision(17);
            json rows = json::array();
            if (cfg.format == "csv") csv << "y,re_w,im_w,err\n";
            for (int i = 0; i < cfg.scan_count; ++i) {
                const double y = cfg.scan_count == 1
                                     ? cfg.scan_im_lo
                                     : cfg.scan_im_lo + (cfg.scan_im_hi - cfg.scan_im_lo) * i /
                                                            (cfg.scan_count - 1);
                const GraphIntegralResult r =
                    graph_integral(g, ModularPoint(cfg.scan_re, y), cfg.quadrature);
                if (cfg.format == "csv") {
                    csv << y << ',' << r.value.real() << ',' << r.value.imag() << ',' << r.err
                        << '\n';
                } else {
                    json row;
                    row["y"] = y;
                    row["value"] = complex_json(r.value);
                    row["err"] = r.err;
                    rows.push_back(row);
                }
            }
            if (cfg.format == "csv") return csv.str();
            json j;
            j["rows"] = rows;
            j["params"] = params_json(cfg);
            return j.dump(2);
        }
    }
    throw Error("unknown command");
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.format != "json" && config.format != "csv")
            throw Error("format must be json or csv");
        emit(config, run_command(config), out);
        return 0;
    } catch (const QuadratureBudgetExceeded& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const QuadratureFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const IllConditionedFit& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const StepTooLarge& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace ellint::cli
