#include "orthant/io.hpp"

#include "orthant/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace orthant {

namespace {

[[noreturn]] void parse_error(std::string_view source, std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << source << ":" << line << ": " << what;
    throw Error(ErrorCode::ConfigParse, os.str());
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_real(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ifstream open_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::ConfigParse, "cannot open " + file.string());
    return in;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> trailer;
};

// Numeric CSV with a header line. Rows whose first cell is not a number are
// kept verbatim as trailer lines.
Table read_table(std::istream& in, std::string_view source) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto cells = split(body, ',');
        if (t.header.empty()) {
            for (auto c : cells) t.header.emplace_back(trim(c));
            continue;
        }
        double first = 0.0;
        if (!parse_real(cells.front(), first)) {
            t.trailer.emplace_back(body);
            continue;
        }
        if (!t.trailer.empty()) parse_error(source, lineno, "data row after trailer");
        if (cells.size() != t.header.size()) {
            std::ostringstream os;
            os << "expected " << t.header.size() << " columns, got " << cells.size();
            parse_error(source, lineno, os.str());
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_real(cells[c], row[c]) || !std::isfinite(row[c])) {
                std::ostringstream os;
                os << "column " << c << ": not a finite number '" << cells[c] << "'";
                parse_error(source, lineno, os.str());
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) parse_error(source, lineno, "missing header");
    return t;
}

// Recovers (density, horizon) from the time column of a path table.
std::pair<std::size_t, double> infer_grid(const Table& t, std::string_view source) {
    if (t.rows.size() < 2) parse_error(source, t.rows.size() + 1, "need at least two grid points");
    if (t.rows.front()[0] != 0.0) parse_error(source, 2, "time column must start at 0");
    const double horizon = t.rows.back()[0];
    const double spacing = horizon / static_cast<double>(t.rows.size() - 1);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const double dt = t.rows[i][0] - t.rows[i - 1][0];
        if (std::abs(dt - spacing) > 1e-9 * spacing) {
            std::ostringstream os;
            os << "non-uniform spacing " << dt << " (expected " << spacing << ")";
            parse_error(source, i + 2, os.str());
        }
    }
    const double density = 1.0 / spacing;
    const double rounded = std::round(density);
    if (rounded < 1.0 || std::abs(density - rounded) > 1e-9 * rounded)
        parse_error(source, 2, "grid spacing is not 1/n for an integer n");
    return {static_cast<std::size_t>(rounded), horizon};
}

GridPath columns_to_path(const Table& t, std::size_t first, std::size_t dim, std::size_t density, double horizon) {
    std::vector<double> values;
    values.reserve(t.rows.size() * dim);
    for (const auto& row : t.rows) values.insert(values.end(), row.begin() + static_cast<std::ptrdiff_t>(first),
                                                 row.begin() + static_cast<std::ptrdiff_t>(first + dim));
    return {density, horizon, dim, std::move(values)};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return {buf, ptr};
}

ReflectionMatrix read_matrix(std::istream& in, std::string_view source) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!trim(line).empty() && trim(line).front() != '#') return true;
        }
        return false;
    };
    if (!next_line()) parse_error(source, lineno, "missing dimension line");
    std::size_t d = 0;
    {
        const auto text = trim(line);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
        if (ec != std::errc{} || ptr != text.data() + text.size() || d == 0)
            parse_error(source, lineno, "first line must be a positive dimension");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d; ++i) {
        if (!next_line()) {
            std::ostringstream os;
            os << "expected " << d << " rows, found " << i;
            parse_error(source, lineno, os.str());
        }
        std::istringstream ls(line);
        std::vector<double> row;
        std::string cell;
        while (ls >> cell) {
            double v = 0.0;
            if (!parse_real(cell, v)) {
                std::ostringstream os;
                os << "row " << i << ", column " << row.size() << ": not a number '" << cell << "'";
                parse_error(source, lineno, os.str());
            }
            row.push_back(v);
        }
        if (row.size() != d) {
            std::ostringstream os;
            os << "row " << i << " has " << row.size() << " entries, expected " << d;
            parse_error(source, lineno, os.str());
        }
        rows.push_back(std::move(row));
    }
    return ReflectionMatrix::validate(rows);
}

ReflectionMatrix read_matrix_file(const std::filesystem::path& file) {
    auto in = open_file(file);
    return read_matrix(in, file.string());
}

void write_matrix(std::ostream& out, const ReflectionMatrix& q) {
    out << q.dim() << '\n';
    for (std::size_t i = 0; i < q.dim(); ++i) {
        for (std::size_t j = 0; j < q.dim(); ++j) out << (j ? " " : "") << format_double(q(i, j));
        out << '\n';
    }
}

Vec parse_point(std::string_view text) {
    Vec out;
    for (auto cell : split(text, ',')) {
        double v = 0.0;
        if (!parse_real(cell, v) || !std::isfinite(v))
            throw Error(ErrorCode::ConfigParse, "point component '" + std::string(cell) + "' is not a finite number");
        out.push_back(v);
    }
    return out;
}

void write_path_csv(std::ostream& out, const GridPath& path, std::string_view prefix) {
    out << 't';
    for (std::size_t j = 0; j < path.dim(); ++j) out << ',' << prefix << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << format_double(path.time(i));
        for (double v : path[i]) out << ',' << format_double(v);
        out << '\n';
    }
}

GridPath read_path_csv(std::istream& in, std::string_view source) {
    const Table t = read_table(in, source);
    if (t.header.size() < 2 || t.header.front() != "t") parse_error(source, 1, "header must be t,x1,...,xd");
    const auto [density, horizon] = infer_grid(t, source);
    return columns_to_path(t, 1, t.header.size() - 1, density, horizon);
}

GridPath read_path_csv_file(const std::filesystem::path& file) {
    auto in = open_file(file);
    return read_path_csv(in, file.string());
}

void write_solution_csv(std::ostream& out, const SkorokhodSolution& s) {
    const std::size_t d = s.x.dim();
    out << 't';
    for (std::size_t j = 0; j < d; ++j) out << ",x" << (j + 1);
    for (std::size_t j = 0; j < d; ++j) out << ",k" << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << format_double(s.x.time(i));
        for (double v : s.x[i]) out << ',' << format_double(v);
        for (double v : s.k[i]) out << ',' << format_double(v);
        out << '\n';
    }
}

SkorokhodSolution read_solution_csv(std::istream& in, std::string_view source) {
    const Table t = read_table(in, source);
    if (t.header.size() < 3 || t.header.size() % 2 == 0 || t.header.front() != "t")
        parse_error(source, 1, "header must be t,x1..xd,k1..kd");
    const std::size_t d = (t.header.size() - 1) / 2;
    const auto [density, horizon] = infer_grid(t, source);
    return {columns_to_path(t, 1, d, density, horizon), columns_to_path(t, 1 + d, d, density, horizon)};
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
    out << "n,h,mean_err_2p,stderr,log_x,log_y\n";
    for (const auto& row : report.rows) {
        out << row.n << ',' << format_double(row.h) << ',' << format_double(row.mean) << ','
            << format_double(row.std_error) << ',' << format_double(rate_abscissa(row.n)) << ','
            << (row.mean > 0.0 ? format_double(std::log(row.mean)) : std::string("-inf")) << '\n';
    }
    if (report.fit) {
        out << "slope," << format_double(report.fit->slope) << ",intercept," << format_double(report.fit->intercept)
            << ",r_squared," << format_double(report.fit->r_squared) << '\n';
    } else {
        out << "slope,undefined\n";
    }
}

RateReport read_rate_csv(std::istream& in, std::string_view source) {
    RateReport report;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (!header) {
            if (body != "n,h,mean_err_2p,stderr,log_x,log_y") parse_error(source, lineno, "unexpected rate header");
            header = true;
            continue;
        }
        const auto cells = split(body, ',');
        if (cells.front() == "slope") {
            if (cells.size() == 2 && cells[1] == "undefined") continue;
            LogLogFit fit;
            if (cells.size() != 6 || !parse_real(cells[1], fit.slope) || !parse_real(cells[3], fit.intercept) ||
                !parse_real(cells[5], fit.r_squared))
                parse_error(source, lineno, "malformed slope line");
            report.fit = fit;
            continue;
        }
        if (cells.size() != 6) parse_error(source, lineno, "expected 6 columns");
        RateRow row;
        double n = 0.0;
        if (!parse_real(cells[0], n) || !parse_real(cells[1], row.h) || !parse_real(cells[2], row.mean) ||
            !parse_real(cells[3], row.std_error))
            parse_error(source, lineno, "malformed rate row");
        row.n = static_cast<std::size_t>(n);
        report.rows.push_back(row);
    }
    if (!header) parse_error(source, lineno, "missing header");
    return report;
}

KeyValues read_key_values(std::istream& in, std::string_view source) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = std::string_view(line);
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) parse_error(source, lineno, "expected key=value");
        const auto key = trim(body.substr(0, eq));
        if (key.empty()) parse_error(source, lineno, "empty key");
        kv[std::string(key)] = std::string(trim(body.substr(eq + 1)));
    }
    return kv;
}

KeyValues read_key_values_file(const std::filesystem::path& file) {
    auto in = open_file(file);
    return read_key_values(in, file.string());
}

}  // namespace orthant
