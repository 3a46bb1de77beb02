#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "acbench/errors.hpp"

namespace acbench::csv {

/// Shortest digit string that round-trips the double exactly (std::to_chars).
std::string format_double(double v);

/// Strict double parse of the whole field; nullopt on any trailing garbage.
std::optional<double> parse_double(const std::string& field);
std::optional<int64_t> parse_int(const std::string& field);

/// Splits one CSV line on commas. No quoting: the project's formats are all
/// plain numeric/id fields. Trims surrounding whitespace and a trailing CR.
std::vector<std::string> split_line(const std::string& line);

/**
 * Line-oriented CSV reader with a mandatory header row. Lines starting with
 * '#' are skipped anywhere in the file (artifact files carry a provenance
 * comment on top).
 */
class Reader {
public:
    explicit Reader(const std::string& path);

    /// Header column index by name; throws Schema when the column is missing.
    size_t require_column(const std::string& name) const;
    std::optional<size_t> find_column(const std::string& name) const;

    /// Next data row; nullopt at EOF. Rows keep raw string fields.
    std::optional<std::vector<std::string>> next_row();

    const std::vector<std::string>& header() const { return header_; }
    size_t line_number() const { return line_number_; }
    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
    std::vector<std::string> header_;
    size_t line_number_ = 0;
};

class Writer {
public:
    explicit Writer(const std::string& path);

    /// Writes "# key=value ..." provenance comment lines.
    void comment(const std::string& text);
    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::string path_;
};

}  // namespace acbench::csv
