#include "qgeom/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace qgeom::io {

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

const Json& require(const Json& obj, const char* key, const std::string& source, const std::string& ptr) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(source + ":" + ptr, std::string("missing field '") + key + "'");
    return obj.at(key);
}

std::string as_label(const Json& j, const std::string& source, const std::string& ptr) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ParseError(source + ":" + ptr, "expected a vertex label (string or integer)");
}

double as_number(const Json& j, const std::string& source, const std::string& ptr) {
    if (!j.is_number()) throw ParseError(source + ":" + ptr, "expected a number");
    return j.get<double>();
}

std::vector<double> real_array(const Json& j, std::size_t n, const std::string& source, const std::string& ptr) {
    if (!j.is_array()) throw ParseError(source + ":" + ptr, "expected an array");
    if (j.size() != n) throw ParseError(source + ":" + ptr, "expected " + std::to_string(n) + " entries, one per vertex");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], source, ptr + "/" + std::to_string(i)));
    return out;
}

}  // namespace

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object() && j.contains("re") && j.contains("im") && j["re"].is_number() && j["im"].is_number())
        return {j["re"].get<double>(), j["im"].get<double>()};
    throw ParseError(where, "expected a number or {\"re\": x, \"im\": y}");
}

GraphSpec parse_graph_spec(const std::string& text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ":" + line_col(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
    }
    if (!doc.is_object()) throw ParseError(source + ":/", "top level must be an object");

    GraphSpec spec;
    const Json& verts = require(doc, "vertices", source, "/");
    if (!verts.is_array()) throw ParseError(source + ":/vertices", "expected an array");
    for (std::size_t i = 0; i < verts.size(); ++i)
        spec.vertices.push_back(as_label(verts[i], source, "/vertices/" + std::to_string(i)));

    const Json& arrows = require(doc, "arrows", source, "/");
    if (!arrows.is_array()) throw ParseError(source + ":/arrows", "expected an array");
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const std::string ptr = "/arrows/" + std::to_string(i);
        const Json& a = arrows[i];
        if (!a.is_object()) throw ParseError(source + ":" + ptr, "expected an object");
        ArrowSpec s;
        s.from = as_label(require(a, "from", source, ptr), source, ptr + "/from");
        s.to = as_label(require(a, "to", source, ptr), source, ptr + "/to");
        s.weight = a.contains("weight") ? as_number(a["weight"], source, ptr + "/weight") : 0.0;
        spec.arrows.push_back(s);
    }
    if (doc.contains("bidirected")) {
        if (!doc["bidirected"].is_boolean()) throw ParseError(source + ":/bidirected", "expected a boolean");
        spec.bidirected = doc["bidirected"].get<bool>();
    }
    if (doc.contains("stochastic")) {
        if (!doc["stochastic"].is_boolean()) throw ParseError(source + ":/stochastic", "expected a boolean");
        spec.stochastic = doc["stochastic"].get<bool>();
    }
    const std::size_t n = spec.vertices.size();
    if (doc.contains("initial")) spec.initial = real_array(doc["initial"], n, source, "/initial");
    if (doc.contains("potential")) spec.potential = real_array(doc["potential"], n, source, "/potential");
    if (doc.contains("psi")) {
        const Json& p = doc["psi"];
        if (!p.is_array() || p.size() != n)
            throw ParseError(source + ":/psi", "expected " + std::to_string(n) + " entries, one per vertex");
        std::vector<Complex> psi;
        for (std::size_t i = 0; i < p.size(); ++i)
            psi.push_back(complex_from_json(p[i], source + ":/psi/" + std::to_string(i)));
        spec.psi = psi;
    }
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw IoError("write to '" + path + "' failed");
}

GraphSpec load_graph_spec(const std::string& path) { return parse_graph_spec(read_file(path), path); }

Json to_json(const GraphSpec& spec) {
    Json doc;
    doc["vertices"] = spec.vertices;
    Json arrows = Json::array();
    for (const auto& a : spec.arrows) arrows.push_back(Json{{"from", a.from}, {"to", a.to}, {"weight", a.weight}});
    doc["arrows"] = arrows;
    doc["bidirected"] = spec.bidirected;
    doc["stochastic"] = spec.stochastic;
    if (spec.initial) doc["initial"] = *spec.initial;
    if (spec.psi) {
        Json p = Json::array();
        for (Complex z : *spec.psi) p.push_back(complex_json(z));
        doc["psi"] = p;
    }
    if (spec.potential) doc["potential"] = *spec.potential;
    return doc;
}

LoadedGraph build(const GraphSpec& spec, const std::string& source) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
        if (!index.emplace(spec.vertices[i], i).second)
            throw ParseError(source + ":/vertices/" + std::to_string(i), "duplicate vertex '" + spec.vertices[i] + "'");
    }
    std::vector<Arrow> arrows;
    std::vector<double> weights;
    for (std::size_t i = 0; i < spec.arrows.size(); ++i) {
        const std::string ptr = source + ":/arrows/" + std::to_string(i);
        const auto from = index.find(spec.arrows[i].from);
        const auto to = index.find(spec.arrows[i].to);
        if (from == index.end()) throw ParseError(ptr + "/from", "unknown vertex '" + spec.arrows[i].from + "'");
        if (to == index.end()) throw ParseError(ptr + "/to", "unknown vertex '" + spec.arrows[i].to + "'");
        arrows.push_back({from->second, to->second});
        weights.push_back(spec.arrows[i].weight);
    }
    LoadedGraph out;
    try {
        out.calc = GraphCalculus(spec.vertices.size(), arrows, spec.vertices);
    } catch (const GraphError& e) {
        throw ParseError(source + ":/arrows", e.what());
    }
    if (spec.bidirected && !out.calc.is_bidirected()) {
        for (std::size_t a = 0; a < out.calc.arrow_count(); ++a)
            if (out.calc.reverse(a) == GraphCalculus::npos)
                throw ValidationError(source + ":/arrows/" + std::to_string(a) +
                                      ": graph is flagged bidirected but this arrow has no reverse");
    }
    out.weights = MetricWeights<double>(weights, spec.stochastic);
    if (spec.stochastic) {
        std::vector<double> outflow(spec.vertices.size(), 0.0);
        for (std::size_t a = 0; a < arrows.size(); ++a) {
            if (weights[a] < 0.0)
                throw ValidationError(source + ":/arrows/" + std::to_string(a) + "/weight: negative weight in stochastic graph");
            outflow[arrows[a].tail] += weights[a];
        }
        for (std::size_t x = 0; x < outflow.size(); ++x)
            if (outflow[x] > 1.0 + kDefaultEps)
                throw ValidationError(source + ":/vertices/" + std::to_string(x) + ": outgoing weights sum to " +
                                      std::to_string(outflow[x]) + " > 1");
    }
    return out;
}

GraphSpec to_spec(const GraphCalculus& calc, const MetricWeights<double>& w) {
    GraphSpec spec;
    spec.vertices = calc.labels();
    for (std::size_t a = 0; a < calc.arrow_count(); ++a)
        spec.arrows.push_back({calc.labels()[calc.arrow(a).tail], calc.labels()[calc.arrow(a).head], w[a]});
    spec.bidirected = calc.is_bidirected();
    spec.stochastic = w.stochastic;
    return spec;
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunReport::RunReport(std::string command, std::vector<std::string> argv) {
    doc_["command"] = std::move(command);
    doc_["argv"] = std::move(argv);
    doc_["inputs_digest"] = nullptr;
    doc_["results"] = Json::object();
    doc_["residuals"] = Json::array();
    doc_["assertions"] = Json::array();
    doc_["passed"] = true;
}

void RunReport::residual(const std::string& name, double value, double tolerance) {
    const bool ok = value <= tolerance;
    doc_["residuals"].push_back(Json{{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", ok}});
    if (!ok) {
        passed_ = false;
        doc_["passed"] = false;
    }
}

void RunReport::assertion(const std::string& name, bool ok) {
    doc_["assertions"].push_back(Json{{"name", name}, {"passed", ok}});
    if (!ok) {
        passed_ = false;
        doc_["passed"] = false;
    }
}

void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels,
                          const std::vector<std::vector<double>>& rows) {
    os << "step";
    for (const auto& l : labels) os << ',' << l;
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << i;
        for (double v : rows[i]) {
            // Shortest representation that reads back to the same double.
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            os << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        os << '\n';
    }
}

}  // namespace qgeom::io
