#pragma once

#include <string>

#include "ellint/engine.hpp"
#include "ellint/graph.hpp"

namespace ellint {

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error("parse error: " + w) {}
};

/// Graph file schema: {"vertices": [names], "edges": [{"head","tail","n"}]};
/// edge order in the file is the edge index.
DecoratedGraph parse_graph_file(const std::string& path);
DecoratedGraph parse_graph_json(const std::string& text);
std::string graph_to_json(const DecoratedGraph& g);

std::string complex_to_json(const Complex& z);
std::string result_to_json(const GraphIntegralResult& r);

} // namespace ellint
