#include "qrtm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrtm {

std::string csv_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_number(long long x) { return std::to_string(x); }

void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    auto line = [&out](const CsvRow& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw std::runtime_error(path + ": row width does not match header");
        line(r);
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<CsvRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        CsvRow r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(cell);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace qrtm
