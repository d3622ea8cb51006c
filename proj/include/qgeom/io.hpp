#pragma once

// File formats: GraphSpec JSON for weighted graphs, RunReport JSON for
// command results, CSV for trajectories.

#include "qgeom/errors.hpp"
#include "qgeom/graph_calculus.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qgeom::io {

using Json = nlohmann::ordered_json;

/// Raised for malformed input; location is "file:line:column" for syntax
/// errors and "file:/json/pointer" for structural ones.
class ParseError : public QgeomError {
public:
    ParseError(const std::string& location, const std::string& message)
        : QgeomError(location + ": " + message), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

class IoError : public QgeomError {
public:
    using QgeomError::QgeomError;
};

struct ArrowSpec {
    std::string from;
    std::string to;
    double weight = 0.0;
};

/// {
///   "vertices": ["0", "1"],
///   "arrows": [{"from": "0", "to": "1", "weight": 0.25}, ...],
///   "bidirected": true, "stochastic": true,
///   "initial": [...], "psi": [{"re": .., "im": ..}, ...], "potential": [...]
/// }
/// The last three are optional per-vertex data.
struct GraphSpec {
    std::vector<std::string> vertices;
    std::vector<ArrowSpec> arrows;
    bool bidirected = true;
    bool stochastic = false;
    std::optional<std::vector<double>> initial;
    std::optional<std::vector<Complex>> psi;
    std::optional<std::vector<double>> potential;
};

GraphSpec parse_graph_spec(const std::string& text, const std::string& source = "<input>");
GraphSpec load_graph_spec(const std::string& path);
Json to_json(const GraphSpec& spec);

struct LoadedGraph {
    GraphCalculus calc;
    MetricWeights<double> weights;
};

/// Builds the calculus and weights, checking the bidirected and stochastic
/// flags; failures name the offending JSON location.
LoadedGraph build(const GraphSpec& spec, const std::string& source = "<input>");

GraphSpec to_spec(const GraphCalculus& calc, const MetricWeights<double>& w);

Json complex_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

/// 64-bit FNV-1a of the bytes, as "fnv1a64:<16 hex digits>".
std::string digest(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Structured result of one command: echo, input digest, results, residuals
/// and assertions, with keys in insertion order.
class RunReport {
public:
    RunReport(std::string command, std::vector<std::string> argv);

    void set_input_digest(const std::string& d) { doc_["inputs_digest"] = d; }
    Json& results() { return doc_["results"]; }
    void residual(const std::string& name, double value, double tolerance);
    void assertion(const std::string& name, bool ok);
    bool all_passed() const { return passed_; }
    const Json& json() const { return doc_; }
    std::string dump() const { return doc_.dump(2); }

private:
    Json doc_;
    bool passed_ = true;
};

/// Header "step,<label>..." then one row per step.
void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels,
                          const std::vector<std::vector<double>>& rows);

}  // namespace qgeom::io
