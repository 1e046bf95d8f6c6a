#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chainkit/chain.hpp"
#include "chainkit/example_chains.hpp"
#include "chainkit/mixing.hpp"

namespace chainkit {

// Chain text format: first line `n`, then n whitespace-separated rows of n
// decimal probabilities. Lines starting with `#` are ignored. Distributions
// are one line of n decimals. Graph files are 1-indexed `i j` edge lines.

StochasticMatrix read_chain(std::istream& in, double tol = kRowSumTol);
StochasticMatrix read_chain_file(const std::string& path, double tol = kRowSumTol);
void write_chain(std::ostream& out, const StochasticMatrix& P);

Distribution read_distribution(std::istream& in, double tol = kRowSumTol);
Distribution read_distribution_file(const std::string& path, double tol = kRowSumTol);
void write_distribution(std::ostream& out, const Distribution& d);

GraphAdjacency read_edge_list(std::istream& in);
GraphAdjacency read_edge_list_file(const std::string& path);

/// Shortest decimal representation that round-trips a double; used for all
/// emitted numbers so repeated runs are byte-identical.
std::string format_double(double v);

/// One CSV row from already-formatted cells.
std::string csv_row(const std::vector<std::string>& cells);

/// Certificate serialization with fields t_hit, x, A, prob, exhaustive.
/// States are 1-indexed in the output.
std::string certificate_json(const HittingTimeCertificate& cert);

/// A named curve for the SVG emitter.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line chart: axes, tick labels, one polyline per
/// series and a small legend. No plotting dependency; CSV stays
/// authoritative.
std::string svg_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           int width = 640, int height = 420);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace chainkit
