#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "carenet/errors.hpp"

namespace carenet {

// Minimal CSV reader for the ingestion schemas: UTF-8, comma-separated,
// no quoting, mandatory header row. Errors name the file and line.
class CsvReader {
public:
    CsvReader(const std::string& path, const std::vector<std::string>& expected_header);

    // Reads the next data row into `fields`. Returns false at EOF.
    bool next(std::vector<std::string>& fields);

    std::size_t line() const { return line_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& message) const;

    double field_double(const std::vector<std::string>& fields, std::size_t i) const;
    long long field_int(const std::vector<std::string>& fields, std::size_t i) const;

private:
    std::ifstream in_;
    std::string path_;
    std::size_t line_ = 0;
    std::size_t n_columns_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line);

// Buffered writer that emits a header and rows with deterministic
// formatting (doubles via format_double below).
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_columns_;
};

// Shortest decimal representation that round-trips, so emitted files are
// byte-stable for equal values.
std::string format_double(double v);

} // namespace carenet
