#pragma once

// Plain CSV formats: quadrature-rule cache, differentiation-matrix cache,
// dense system dump and solution results. Every decimal is written with 17
// significant digits so doubles round-trip exactly.

#include "fgps/collocation.hpp"
#include "fgps/error.hpp"
#include "fgps/frac_diff.hpp"
#include "fgps/gegenbauer.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace fgps::csv {

inline constexpr std::string_view kRuleHeader = "lambda,n_g";
inline constexpr std::string_view kRuleColumns = "node,shifted_node,weight";
inline constexpr std::string_view kFdmHeader = "gamma,L,N,T,lambda,n_g";

inline std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline double parse_double(std::string_view field)
{
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end)
        detail::fail(ErrorKind::Format, "not a number: '" + std::string(field) + "'");
    return v;
}

inline int parse_int(std::string_view field)
{
    int v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end)
        detail::fail(ErrorKind::Format, "not an integer: '" + std::string(field) + "'");
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',')
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline std::string read_line(std::istream& in, const char* what)
{
    std::string line;
    if (!std::getline(in, line))
        detail::fail(ErrorKind::Format, std::string("unexpected end of file reading ") + what);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

inline void expect_line(std::istream& in, std::string_view expected)
{
    const auto line = read_line(in, "header");
    if (line != expected)
        detail::fail(ErrorKind::Format,
                     "bad header '" + line + "', expected '" + std::string(expected) + "'");
}

template <class Range>
void write_row(std::ostream& out, const Range& values)
{
    bool first = true;
    for (double v : values) {
        if (!first)
            out << ',';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

// Rule cache:
//   lambda,n_g
//   <lambda>,<n_g>
//   node,shifted_node,weight
//   one row per node, increasing
inline void write_rule(std::ostream& out, const QuadratureRule& rule)
{
    out << kRuleHeader << '\n' << format_double(rule.lambda) << ',' << rule.n_g << '\n';
    out << kRuleColumns << '\n';
    for (std::size_t j = 0; j < rule.size(); ++j)
        out << format_double(rule.nodes[j]) << ',' << format_double(rule.shifted_nodes[j]) << ','
            << format_double(rule.weights[j]) << '\n';
}

inline QuadratureRule read_rule(std::istream& in)
{
    expect_line(in, kRuleHeader);
    const auto params = read_line(in, "rule parameters");
    const auto fields = split(params);
    if (fields.size() != 2)
        detail::fail(ErrorKind::Format, "rule parameter row must have 2 fields");
    QuadratureRule rule;
    rule.lambda = parse_double(fields[0]);
    rule.n_g = parse_int(fields[1]);
    if (rule.n_g < 0)
        detail::fail(ErrorKind::Format, "negative n_g in rule file");
    expect_line(in, kRuleColumns);
    for (int j = 0; j <= rule.n_g; ++j) {
        const auto row = split(read_line(in, "rule row"));
        if (row.size() != 3)
            detail::fail(ErrorKind::Format, "rule row must have 3 fields");
        rule.nodes.push_back(parse_double(row[0]));
        rule.shifted_nodes.push_back(parse_double(row[1]));
        rule.weights.push_back(parse_double(row[2]));
    }
    for (std::size_t j = 1; j < rule.nodes.size(); ++j)
        if (!(rule.nodes[j] > rule.nodes[j - 1]))
            detail::fail(ErrorKind::Format, "rule nodes are not increasing");
    return rule;
}

struct FdmCacheKey {
    double gamma = 0.5;
    double memory_len = 30.0;
    int n = 4;
    double period = 0.0;
    double lambda = 0.0;
    int n_g = 1000;

    friend bool operator==(const FdmCacheKey&, const FdmCacheKey&) = default;
};

// Matrix cache:
//   gamma,L,N,T,lambda,n_g
//   <values>
//   2N-1 values: first row, then first column without the corner
inline void write_fdm(std::ostream& out, const FracDiffMatrix& d, double lambda, int n_g)
{
    out << kFdmHeader << '\n';
    out << format_double(d.gamma()) << ',' << format_double(d.memory_len()) << ',' << d.size() << ','
        << format_double(d.grid().period()) << ',' << format_double(lambda) << ',' << n_g << '\n';
    write_row(out, d.diagonals());
}

struct LoadedFdm {
    FdmCacheKey key;
    FracDiffMatrix matrix;
};

inline LoadedFdm read_fdm(std::istream& in)
{
    expect_line(in, kFdmHeader);
    const auto p = split(read_line(in, "matrix parameters"));
    if (p.size() != 6)
        detail::fail(ErrorKind::Format, "matrix parameter row must have 6 fields");
    FdmCacheKey key{parse_double(p[0]), parse_double(p[1]), parse_int(p[2]),
                    parse_double(p[3]), parse_double(p[4]), parse_int(p[5])};
    if (key.n < 2 || key.n % 2 != 0)
        detail::fail(ErrorKind::Format, "matrix size must be a positive even integer");
    const auto v = split(read_line(in, "matrix diagonals"));
    if (v.size() != static_cast<std::size_t>(2 * key.n - 1))
        detail::fail(ErrorKind::Format, "expected " + std::to_string(2 * key.n - 1)
                                            + " diagonal values, got " + std::to_string(v.size()));
    std::vector<double> row(static_cast<std::size_t>(key.n));
    std::vector<double> col(static_cast<std::size_t>(key.n));
    for (int s = 0; s < key.n; ++s)
        row[s] = parse_double(v[s]);
    col[0] = row[0];
    for (int r = 1; r < key.n; ++r)
        col[r] = parse_double(v[static_cast<std::size_t>(key.n - 1 + r)]);
    FracDiffMatrix m(PeriodicGrid(key.period, key.n), key.gamma, key.memory_len, std::move(row),
                     std::move(col));
    return LoadedFdm{key, std::move(m)};
}

/// Dense A row-major, one matrix row per line.
inline void write_matrix(std::ostream& out, const Matrix& a)
{
    for (std::size_t r = 0; r < a.rows(); ++r)
        write_row(out, a.row(r));
}

/// One value per line.
inline void write_vector(std::ostream& out, std::span<const double> v)
{
    for (double x : v)
        out << format_double(x) << '\n';
}

/// Writes through a sibling temporary file and renames it into place, so a
/// failed write leaves no partial file behind.
template <class Writer>
void write_file_atomically(const std::filesystem::path& path, Writer&& writer)
{
    namespace fs = std::filesystem;
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(parent))
        detail::fail(ErrorKind::Io, "output directory does not exist: " + parent.string());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            detail::fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        try {
            writer(out);
        } catch (...) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            detail::fail(ErrorKind::Io, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        detail::fail(ErrorKind::Io, "cannot move output into place at " + path.string());
    }
}

} // namespace fgps::csv
