#pragma once

#include <string>
#include <vector>

#include "gwcrit/asymptotics.hpp"
#include "gwcrit/iterate.hpp"
#include "gwcrit/montecarlo.hpp"

namespace gwcrit {

/// 17-significant-digit decimal rendering; round-trips binary64 exactly.
std::string format_g17(double x);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const CsvTable& other) const {
        return columns == other.columns && rows == other.rows;
    }
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Writes via a temp file + rename so readers never observe partial output.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

CsvTable asym_to_csv(const AsymReport& rep);
CsvTable trace_to_csv(const IterationTrace& trace);

std::string asym_summary_json(const AsymReport& rep, bool pass);
std::string montecarlo_json(const SimResult& res);

}  // namespace gwcrit
