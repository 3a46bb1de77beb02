#include "acbench/csv.hpp"

#include <charconv>
#include <cstdlib>

namespace acbench::csv {

std::string format_double(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& field) {
    if (field.empty()) return std::nullopt;
    const char* begin = field.data();
    const char* end = begin + field.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return value;
}

std::optional<int64_t> parse_int(const std::string& field) {
    if (field.empty()) return std::nullopt;
    const char* begin = field.data();
    const char* end = begin + field.size();
    int64_t value = 0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        size_t b = 0, e = f.size();
        while (b < e && (f[b] == ' ' || f[b] == '\t')) ++b;
        while (e > b && (f[e - 1] == ' ' || f[e - 1] == '\t' || f[e - 1] == '\r')) --e;
        f = f.substr(b, e - b);
    }
    return fields;
}

Reader::Reader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw Error(ErrorKind::Io, "cannot open " + path);
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        if (!line.empty() && line[0] == '#') continue;
        header_ = split_line(line);
        return;
    }
    throw Error(ErrorKind::EmptyInput, path + ": no header row");
}

size_t Reader::require_column(const std::string& name) const {
    if (const auto idx = find_column(name)) return *idx;
    throw Error(ErrorKind::Schema, path_ + ": missing column '" + name + "'");
}

std::optional<size_t> Reader::find_column(const std::string& name) const {
    for (size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

std::optional<std::vector<std::string>> Reader::next_row() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        if (line.empty() || line[0] == '#') continue;
        if (line.size() == 1 && line[0] == '\r') continue;
        return split_line(line);
    }
    return std::nullopt;
}

Writer::Writer(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
}

void Writer::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void Writer::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << "\n";
}

}  // namespace acbench::csv
