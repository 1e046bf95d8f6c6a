#include "chainkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace chainkit {

namespace {

// Strips comments and splits the remaining tokens, keeping track of the
// source line for error messages.
std::vector<std::pair<std::string, int>> tokenize(std::istream& in) {
    std::vector<std::pair<std::string, int>> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.emplace_back(tok, lineno);
    }
    return tokens;
}

double parse_double(const std::pair<std::string, int>& tok, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok.first, &pos);
        if (pos != tok.first.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(what + ": cannot parse '" + tok.first + "' on line " +
                              std::to_string(tok.second));
    }
}

long parse_long(const std::pair<std::string, int>& tok, const std::string& what) {
    try {
        size_t pos = 0;
        const long v = std::stol(tok.first, &pos);
        if (pos != tok.first.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(what + ": cannot parse '" + tok.first + "' on line " +
                              std::to_string(tok.second));
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return in;
}

}  // namespace

StochasticMatrix read_chain(std::istream& in, double tol) {
    const auto tokens = tokenize(in);
    if (tokens.empty()) throw ValidationError("chain file: empty input");
    const long n = parse_long(tokens[0], "chain file");
    if (n < 1) throw ValidationError("chain file: n must be >= 1");
    const size_t need = 1 + static_cast<size_t>(n) * static_cast<size_t>(n);
    if (tokens.size() != need) {
        throw ValidationError("chain file: expected " + std::to_string(need - 1) +
                              " probabilities for n = " + std::to_string(n) + ", found " +
                              std::to_string(tokens.size() - 1));
    }
    std::vector<double> a;
    a.reserve(static_cast<size_t>(n) * n);
    for (size_t k = 1; k < need; ++k) a.push_back(parse_double(tokens[k], "chain file"));
    try {
        return StochasticMatrix::validate(std::move(a), static_cast<int>(n), tol);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("chain file: ") + e.what());
    }
}

StochasticMatrix read_chain_file(const std::string& path, double tol) {
    auto in = open_or_throw(path);
    return read_chain(in, tol);
}

void write_chain(std::ostream& out, const StochasticMatrix& P) {
    out << P.n() << "\n";
    for (int i = 0; i < P.n(); ++i) {
        for (int j = 0; j < P.n(); ++j) {
            if (j) out << ' ';
            out << format_double(P(i, j));
        }
        out << "\n";
    }
}

Distribution read_distribution(std::istream& in, double tol) {
    const auto tokens = tokenize(in);
    if (tokens.empty()) throw ValidationError("distribution file: empty input");
    std::vector<double> p;
    p.reserve(tokens.size());
    for (const auto& tok : tokens) p.push_back(parse_double(tok, "distribution file"));
    try {
        return Distribution::validated(std::move(p), tol);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("distribution file: ") + e.what());
    }
}

Distribution read_distribution_file(const std::string& path, double tol) {
    auto in = open_or_throw(path);
    return read_distribution(in, tol);
}

void write_distribution(std::ostream& out, const Distribution& d) {
    for (int i = 0; i < d.n(); ++i) {
        if (i) out << ' ';
        out << format_double(d[i]);
    }
    out << "\n";
}

GraphAdjacency read_edge_list(std::istream& in) {
    const auto tokens = tokenize(in);
    if (tokens.empty()) throw ValidationError("graph file: empty input");
    if (tokens.size() % 2 != 0) throw ValidationError("graph file: odd number of endpoints");
    std::vector<std::pair<int, int>> edges;
    long max_state = 0;
    for (size_t k = 0; k < tokens.size(); k += 2) {
        const long u = parse_long(tokens[k], "graph file");
        const long v = parse_long(tokens[k + 1], "graph file");
        if (u < 1 || v < 1) throw ValidationError("graph file: states are 1-indexed");
        max_state = std::max({max_state, u, v});
        edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
    return GraphAdjacency::from_edges(static_cast<int>(max_state), edges);
}

GraphAdjacency read_edge_list_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_edge_list(in);
}

std::string format_double(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        // integral values print without exponent noise
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
        return std::string(buf, res.ptr);
    }
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

std::string certificate_json(const HittingTimeCertificate& cert) {
    std::ostringstream os;
    os << "{\"t_hit\": " << cert.t_hit << ", \"x\": " << (cert.witness_x + 1) << ", \"A\": [";
    for (size_t k = 0; k < cert.witness_A.size(); ++k) {
        if (k) os << ", ";
        os << cert.witness_A[k] + 1;
    }
    os << "], \"prob\": " << format_double(cert.witness_prob)
       << ", \"exhaustive\": " << (cert.exhaustive ? "true" : "false") << "}";
    return os.str();
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string svg_line_chart(const std::vector<PlotSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label, int width,
                           int height) {
    const double ml = 64, mr = 18, mt = 34, mb = 46;  // margins
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    const double px = (width - ml - mr) / (xmax - xmin);
    const double py = (height - mt - mb) / (ymax - ymin);
    auto X = [&](double v) { return ml + (v - xmin) * px; };
    auto Y = [&](double v) { return height - mb - (v - ymin) * py; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << xml_escape(title) << "</text>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << X(xv) << "\" y=\"" << height - mb + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(xv) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 3
           << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label) << "</text>\n";
    os << "<text x=\"14\" y=\"" << (mt + height - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
       << (mt + height - mb) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        os << "<polyline fill=\"none\" stroke=\"" << palette[si % 6]
           << "\" stroke-width=\"1.5\" points=\"";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (k) os << ' ';
            os << format_double(X(s.x[k])) << ',' << format_double(Y(s.y[k]));
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - mr - 6 << "\" y=\"" << mt + 14 + 14 * static_cast<int>(si)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << palette[si % 6] << "\">"
           << xml_escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << contents;
}

}  // namespace chainkit
