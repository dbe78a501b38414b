#ifndef SPARSEKIT_IO_HPP
#define SPARSEKIT_IO_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace sparsekit::io {

namespace detail {

inline std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline bool blank_or_comment(const std::string& line)
{
    for (char c : line) {
        if (c == '#' || c == '%')
            return true;
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    return in;
}

} // namespace detail

using detail::format_double;

/// Edge-list text: "n m" then m lines "u v w", 0-based ids. Lines starting
/// with '#' or '%' are skipped.
inline WeightedGraph read_edge_list(std::istream& in)
{
    std::string line;
    std::size_t n = 0, m = 0;
    bool have_header = false;
    std::vector<RawEdge> raw;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank_or_comment(line))
            continue;
        std::istringstream ls(line);
        if (!have_header) {
            if (!(ls >> n >> m))
                throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected \"n m\"");
            have_header = true;
            raw.reserve(m);
            continue;
        }
        long long u, v;
        double w;
        if (!(ls >> u >> v >> w))
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected \"u v w\"");
        if (u < 0 || v < 0)
            throw Error(ErrorCode::BadNodeId, "line " + std::to_string(lineno) + ": negative node id");
        raw.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
    }
    if (!have_header)
        throw Error(ErrorCode::ParseError, "missing \"n m\" header");
    if (raw.size() != m)
        throw Error(ErrorCode::ParseError,
                    "header announces " + std::to_string(m) + " edges, found " + std::to_string(raw.size()));
    return build_graph(n, raw);
}

inline void write_edge_list(std::ostream& out, const WeightedGraph& g)
{
    out << g.num_nodes() << ' ' << g.num_edges() << '\n';
    for (const auto& e : g.edges())
        out << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

struct MatrixMarket {
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool symmetric = false;
    struct Entry {
        std::size_t row;  // 0-based
        std::size_t col;
        double value;
    };
    std::vector<Entry> entries;
};

/// Coordinate Matrix Market reader (real, integer or pattern; general or
/// symmetric). Indices are converted to 0-based.
inline MatrixMarket read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::ParseError, "empty Matrix Market stream");
    std::istringstream banner(detail::lowercase(line));
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%matrixmarket" || object != "matrix" || format != "coordinate")
        throw Error(ErrorCode::ParseError, "expected a coordinate %%MatrixMarket matrix banner");
    if (field != "real" && field != "integer" && field != "pattern")
        throw Error(ErrorCode::ParseError, "unsupported field type " + field);
    if (symmetry != "general" && symmetry != "symmetric")
        throw Error(ErrorCode::ParseError, "unsupported symmetry " + symmetry);
    const bool pattern = field == "pattern";

    MatrixMarket mm;
    mm.symmetric = symmetry == "symmetric";
    std::size_t nnz = 0;
    bool have_size = false;
    while (std::getline(in, line)) {
        if (detail::blank_or_comment(line))
            continue;
        std::istringstream ls(line);
        if (!have_size) {
            if (!(ls >> mm.rows >> mm.cols >> nnz))
                throw Error(ErrorCode::ParseError, "bad size line: " + line);
            have_size = true;
            mm.entries.reserve(nnz);
            continue;
        }
        std::size_t i, j;
        double value = 1.0;
        if (!(ls >> i >> j) || (!pattern && !(ls >> value)))
            throw Error(ErrorCode::ParseError, "bad entry line: " + line);
        if (i == 0 || j == 0 || i > mm.rows || j > mm.cols)
            throw Error(ErrorCode::BadNodeId, "entry index out of range: " + line);
        mm.entries.push_back({i - 1, j - 1, value});
    }
    if (!have_size)
        throw Error(ErrorCode::ParseError, "missing size line");
    if (mm.entries.size() != nnz)
        throw Error(ErrorCode::ParseError, "size line announces " + std::to_string(nnz) + " entries, found " +
                                               std::to_string(mm.entries.size()));
    return mm;
}

/// Graph from a symmetric Matrix Market adjacency matrix. Diagonal entries
/// are ignored; each stored off-diagonal entry is one edge.
inline WeightedGraph graph_from_matrix_market(const MatrixMarket& mm)
{
    if (!mm.symmetric)
        throw Error(ErrorCode::ParseError, "graph input must use the symmetric Matrix Market format");
    if (mm.rows != mm.cols)
        throw Error(ErrorCode::BadShape, "adjacency matrix must be square");
    std::vector<RawEdge> raw;
    raw.reserve(mm.entries.size());
    for (const auto& e : mm.entries)
        if (e.row != e.col)
            raw.push_back({static_cast<NodeId>(e.row), static_cast<NodeId>(e.col), e.value});
    return build_graph(mm.rows, raw);
}

inline void write_matrix_market(std::ostream& out, const MatrixMarket& mm)
{
    out << "%%MatrixMarket matrix coordinate real " << (mm.symmetric ? "symmetric" : "general") << '\n';
    out << mm.rows << ' ' << mm.cols << ' ' << mm.entries.size() << '\n';
    for (const auto& e : mm.entries)
        out << e.row + 1 << ' ' << e.col + 1 << ' ' << format_double(e.value) << '\n';
}

/// Reads either format, choosing by the first line.
inline WeightedGraph read_graph(const std::string& path)
{
    auto in = detail::open_in(path);
    const int first = in.peek();
    if (first == '%') {
        std::string line;
        std::getline(in, line);
        in.seekg(0);
        if (detail::lowercase(line).rfind("%%matrixmarket", 0) == 0)
            return graph_from_matrix_market(read_matrix_market(in));
    }
    return read_edge_list(in);
}

inline void write_graph(const std::string& path, const WeightedGraph& g)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    write_edge_list(out, g);
}

inline std::vector<double> read_vector(std::istream& in)
{
    std::vector<double> x;
    std::string token;
    while (in >> token) {
        double value;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw Error(ErrorCode::ParseError, "not a number: " + token);
        x.push_back(value);
    }
    return x;
}

inline void write_vector(std::ostream& out, const std::vector<double>& x)
{
    for (double v : x)
        out << format_double(v) << '\n';
}

} // namespace sparsekit::io

#endif // SPARSEKIT_IO_HPP
