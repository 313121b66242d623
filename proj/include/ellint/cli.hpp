#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ellint/engine.hpp"

namespace ellint::cli {

enum class Command { Eval, Polys, Selfloop, AConst, CheckModularity, CheckAnomaly, Scan };

struct RunConfig {
    Command command = Command::Eval;
    std::string graph_path;
    Complex tau{0, 1};
    std::optional<ModularGroupElement> gamma;
    QuadratureControl quadrature;
    double h = 1e-3;                   // Wirtinger step for check-anomaly
    int selfloop_n = 0;                // selfloop
    int n0 = 0;                        // a-const
    std::vector<int> ns;               // a-const
    std::vector<double> schwinger_t;   // polys: Schwinger times per edge
    std::string base_vertex;           // polys: base (default: last vertex)
    std::string side1, side2;          // polys: cut seeds (optional)
    double scan_re = 0;                // scan
    double scan_im_lo = 0.8, scan_im_hi = 2.0;
    int scan_count = 25;
    std::string output;                // empty = stdout
    std::string format = "json";       // json | csv
};

/// Parse "a+bi" complex literals ("i", "1.1i", "0.2+1.1i", "-0.16 + 0.88i").
Complex parse_complex(const std::string& text);

/// Execute the command; writes the artifact to config.output or `out`.
/// Returns the process exit status: 0 ok, 2 validation error, 3 numeric
/// failure. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace ellint::cli
