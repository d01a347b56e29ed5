#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cliffordt::harness {

/// Shortest round-trip decimal form; "NA" for NaN, "inf" / "-inf" otherwise.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Comma-separated file with a header row. Cells are written verbatim.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
        : path_(path), out_(path, std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        row_strings(std::vector<std::string>(header.begin(), header.end()));
    }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw std::runtime_error("write failed for " + path_.string());
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

template <typename T>
std::string cell(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
        return fmt_double(static_cast<double>(v));
    } else if constexpr (std::is_same_v<T, bool>) {
        return v ? "1" : "0";
    } else if constexpr (std::is_arithmetic_v<T>) {
        return std::to_string(v);
    } else {
        return std::string(v);
    }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(1) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

}  // namespace cliffordt::harness
