#include "carenet/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace carenet {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
        out.back().pop_back();
    }
    return out;
}

CsvReader::CsvReader(const std::string& path, const std::vector<std::string>& expected_header)
    : in_(path), path_(path) {
    if (!in_) throw ValidationError(path + ": cannot open file");
    std::string header;
    if (!std::getline(in_, header)) throw ValidationError(path + ": empty file, header row required");
    ++line_;
    const auto cols = split_csv_line(header);
    if (cols.size() < expected_header.size()) {
        fail("expected header with " + std::to_string(expected_header.size()) + " columns");
    }
    for (std::size_t i = 0; i < expected_header.size(); ++i) {
        if (cols[i] != expected_header[i]) {
            fail("expected column '" + expected_header[i] + "', got '" + cols[i] + "'");
        }
    }
    n_columns_ = cols.size();
}

bool CsvReader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (line.empty() || line == "\r") continue;
        fields = split_csv_line(line);
        if (fields.size() != n_columns_) {
            fail("expected " + std::to_string(n_columns_) + " fields, got " +
                 std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

void CsvReader::fail(const std::string& message) const {
    throw ValidationError(path_ + ":" + std::to_string(line_) + ": " + message);
}

double CsvReader::field_double(const std::vector<std::string>& fields, std::size_t i) const {
    const std::string& s = fields[i];
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        fail("malformed number '" + s + "'");
    }
    return v;
}

long long CsvReader::field_int(const std::vector<std::string>& fields, std::size_t i) const {
    const std::string& s = fields[i];
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail("malformed integer '" + s + "'");
    }
    return v;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), n_columns_(header.size()) {
    if (!out_) throw RuntimeError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != n_columns_) {
        throw RuntimeError(path_ + ": row width mismatch");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw RuntimeError(path_ + ": write failed");
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace carenet
