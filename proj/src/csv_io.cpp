#include "spikelet/csv_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spikelet/errors.hpp"

namespace spikelet {

Signal readCsvSignal(const std::string& path, double dt) {
    std::ifstream in(path);
    if (!in) throw Error(errcode::kIo, "cannot open " + path);
    Signal s;
    s.dt = dt;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        while (end && (*end == ' ' || *end == '\t' || *end == ',')) ++end;
        if (end == line.c_str() || (end && *end != '\0')) {
            if (lineNo == 1) continue;  // header row
            throw Error(errcode::kFormat,
                        path + ": line " + std::to_string(lineNo) + " is not a number");
        }
        if (errno == ERANGE)
            throw Error(errcode::kFormat,
                        path + ": line " + std::to_string(lineNo) + " out of range");
        s.samples.push_back(v);
    }
    if (s.samples.empty()) throw Error(errcode::kFormat, path + ": no samples");
    return s;
}

void writeCsvSignal(const std::string& path, const Signal& s) {
    std::ofstream out(path);
    if (!out) throw Error(errcode::kIo, "cannot open " + path + " for writing");
    out << "value\n" << std::setprecision(17);
    for (double v : s.samples) out << v << "\n";
    if (!out) throw Error(errcode::kIo, "write failed on " + path);
}

void writeCsvTable(const std::string& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error(errcode::kIo, "cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 == header.size() ? "\n" : ",");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 == row.size() ? "\n" : ",");
    if (!out) throw Error(errcode::kIo, "write failed on " + path);
}

} // namespace spikelet
