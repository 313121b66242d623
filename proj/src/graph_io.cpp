#include "ellint/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ellint {

using nlohmann::json;

DecoratedGraph parse_graph_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph file needs \"vertices\" and \"edges\"");
    std::vector<std::string> vertices;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_string()) throw ParseError("vertex names must be strings");
        vertices.push_back(v.get<std::string>());
    }
    std::vector<std::tuple<std::string, std::string, int>> spec;
    int idx = 0;
    for (const auto& e : j.at("edges")) {
        if (!e.is_object() || !e.contains("head") || !e.contains("tail"))
            throw ParseError("edge " + std::to_string(idx) + " needs \"head\" and \"tail\"");
        const int n = e.value("n", 0);
        if (n < 0)
            throw ParseError("edge " + std::to_string(idx) + " has negative decoration");
        spec.emplace_back(e.at("head").get<std::string>(), e.at("tail").get<std::string>(), n);
        ++idx;
    }
    try {
        return build_graph(vertices, spec);
    } catch (const UnknownVertex& e) {
        throw ParseError(e.what());
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

DecoratedGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph_json(ss.str());
}

std::string graph_to_json(const DecoratedGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& name : g.vertex_names()) j["vertices"].push_back(name);
    j["edges"] = json::array();
    for (const Edge& e : g.edges()) {
        j["edges"].push_back({{"head", g.vertex_names()[e.head]},
                              {"tail", g.vertex_names()[e.tail]},
                              {"n", e.n}});
    }
    return j.dump(2);
}

std::string complex_to_json(const Complex& z) {
    json j = {{"re", z.real()}, {"im", z.imag()}};
    return j.dump();
}

std::string result_to_json(const GraphIntegralResult& r) {
    json j;
    j["value"] = {{"re", r.value.real()}, {"im", r.value.imag()}};
    j["err"] = r.err;
    j["method"] = r.method;
    j["params"] = r.params;
    return j.dump(2);
}

} // namespace ellint
