#include "cohere/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cohere/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix binary I/O assumes a little-endian host");

namespace cohere::io {

namespace {

constexpr char kMagic[4] = {'C', 'H', 'L', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path);
}

double parse_double(std::string_view token, const std::string& where) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw DataError("bad numeric value in " + where + ": '" + std::string(token) + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const DataMatrix& X) {
    std::string out;
    out.reserve(static_cast<std::size_t>(X.n * X.p) * 20 + 8 * static_cast<std::size_t>(X.p));
    for (std::int64_t j = 0; j < X.p; ++j) {
        if (j) out.push_back(',');
        out += "x" + std::to_string(j + 1);
    }
    out.push_back('\n');
    for (std::int64_t i = 0; i < X.n; ++i) {
        for (std::int64_t j = 0; j < X.p; ++j) {
            if (j) out.push_back(',');
            out += format_double(X.at(i, j));
        }
        out.push_back('\n');
    }
    write_file(path, out);
}

DataMatrix read_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV file: " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> tokens;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = s.find(',', start);
            if (pos == std::string::npos) {
                tokens.push_back(s.substr(start));
                break;
            }
            tokens.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return tokens;
    };

    const std::vector<std::string> header = split(line);
    const std::int64_t p = static_cast<std::int64_t>(header.size());
    if (p < 1) throw DataError("CSV header has no columns: " + path);

    std::vector<std::vector<double>> rows;
    std::int64_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> tokens = split(line);
        if (static_cast<std::int64_t>(tokens.size()) != p)
            throw DataError("CSV row " + std::to_string(lineno) + " has " +
                            std::to_string(tokens.size()) + " fields, expected " + std::to_string(p));
        std::vector<double> row(static_cast<std::size_t>(p));
        for (std::int64_t j = 0; j < p; ++j)
            row[static_cast<std::size_t>(j)] =
                parse_double(tokens[static_cast<std::size_t>(j)], path + " line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("CSV file has no data rows: " + path);

    DataMatrix X;
    X.n = static_cast<std::int64_t>(rows.size());
    X.p = p;
    X.values.resize(static_cast<std::size_t>(X.n * X.p));
    for (std::int64_t i = 0; i < X.n; ++i)
        for (std::int64_t j = 0; j < p; ++j)
            X.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    X.provenance = {Provenance::Kind::external, std::nullopt, 0, path};
    return X;
}

void write_bin(const std::string& path, const DataMatrix& X) {
    std::string out;
    out.reserve(16 + X.values.size() * 8);
    out.append(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(X.n));
    put_u32(out, static_cast<std::uint32_t>(X.p));
    put_u32(out, 1u);  // bit 0: column-major
    const std::size_t payload = X.values.size() * 8;
    const std::size_t head = out.size();
    out.resize(head + payload);
    std::memcpy(out.data() + head, X.values.data(), payload);
    write_file(path, out);
}

DataMatrix read_bin(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 16) throw DataError("binary matrix file too short: " + path);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError("bad magic in binary matrix file: " + path);
    const unsigned char* b = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t n = get_u32(b + 4);
    const std::uint32_t p = get_u32(b + 8);
    const std::uint32_t flags = get_u32(b + 12);
    if (n == 0 || p == 0) throw DataError("binary matrix file has zero dimension: " + path);
    const std::size_t want = 16 + static_cast<std::size_t>(n) * p * 8;
    if (bytes.size() != want)
        throw DataError("binary matrix file truncated or oversized: " + path + " (expected " +
                        std::to_string(want) + " bytes, got " + std::to_string(bytes.size()) + ")");

    DataMatrix X;
    X.n = n;
    X.p = p;
    X.values.resize(static_cast<std::size_t>(n) * p);
    if (flags & 1u) {
        std::memcpy(X.values.data(), bytes.data() + 16, X.values.size() * 8);
    } else {
        std::vector<double> rowmajor(X.values.size());
        std::memcpy(rowmajor.data(), bytes.data() + 16, rowmajor.size() * 8);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < p; ++j)
                X.at(i, j) = rowmajor[static_cast<std::size_t>(i) * p + j];
    }
    X.provenance = {Provenance::Kind::external, std::nullopt, 0, path};
    return X;
}

namespace {
std::string effective_format(const std::string& path, const std::string& format) {
    if (!format.empty()) return format;
    const std::size_t dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv") return "csv";
    if (ext == "bin") return "bin";
    throw ParameterError("cannot infer matrix format from path '" + path +
                         "'; pass --format csv|bin");
}
}  // namespace

void write_matrix(const std::string& path, const DataMatrix& X, const std::string& format) {
    const std::string f = effective_format(path, format);
    if (f == "csv") return write_csv(path, X);
    if (f == "bin") return write_bin(path, X);
    throw ParameterError("unknown matrix format: " + f);
}

DataMatrix read_matrix(const std::string& path, const std::string& format) {
    const std::string f = effective_format(path, format);
    if (f == "csv") return read_csv(path);
    if (f == "bin") return read_bin(path);
    throw ParameterError("unknown matrix format: " + f);
}

void write_values_csv(const std::string& path, const std::vector<double>& values) {
    std::string out;
    out.reserve(values.size() * 20);
    for (double v : values) {
        out += format_double(v);
        out.push_back('\n');
    }
    write_file(path, out);
}

std::vector<double> read_vector(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<double> values;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = line.find(',', start);
            const std::string token =
                pos == std::string::npos ? line.substr(start) : line.substr(start, pos - start);
            if (!token.empty() && token != "\r")
                values.push_back(parse_double(token, path));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    if (values.empty()) throw DataError("no numeric values in " + path);
    return values;
}

}  // namespace cohere::io
