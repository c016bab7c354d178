#include "gwcrit/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gwcrit/errors.hpp"

namespace gwcrit {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_g17(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw numeric_error("parse_csv: empty input");
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.columns.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != table.columns.size()) {
            throw numeric_error("parse_csv: ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("write_text_atomic: cannot open " + tmp.string());
        out << content;
        if (!out.flush()) throw numeric_error("write_text_atomic: write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw numeric_error("read_text: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CsvTable asym_to_csv(const AsymReport& rep) {
    CsvTable table;
    table.columns = {"n", "lhs", "rhs_main", "rhs_correction", "residual", "normalized"};
    table.rows.reserve(rep.records.size());
    for (const AsymRecord& r : rep.records) {
        table.rows.push_back({r.n, r.lhs, r.rhs_main, r.rhs_correction, r.residual, r.normalized});
    }
    return table;
}

CsvTable trace_to_csv(const IterationTrace& trace) {
    CsvTable table;
    table.columns = {"n", "fn0", "Qn", "p1n"};
    if (trace.has_s) {
        table.columns.push_back("fn_s");
        table.columns.push_back("dfn_s");
    }
    for (const TraceRow& r : trace.rows) {
        std::vector<double> row{static_cast<double>(r.n), r.fn0, r.Qn, r.p1n};
        if (trace.has_s) {
            row.push_back(r.fn_s);
            row.push_back(r.dfn_s);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string asym_summary_json(const AsymReport& rep, bool pass) {
    nlohmann::json j;
    j["quantity"] = rep.quantity;
    j["family"] = rep.family;
    j["fitted_slope"] = rep.fit.slope;
    j["fitted_intercept"] = rep.fit.intercept;
    j["slope_se"] = rep.fit.slope_se;
    j["nested_slope"] = rep.fit_nested.slope;
    j["target_slope"] = rep.target_slope;
    j["reference"] = rep.reference;
    j["pass"] = pass;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j.dump(2);
}

std::string montecarlo_json(const SimResult& res) {
    nlohmann::json j;
    const SimConfig& cfg = res.config;
    j["config_echo"] = {{"family", cfg.family.to_string()},
                        {"n", cfg.horizon},
                        {"reps", cfg.replicates},
                        {"seed", cfg.seed},
                        {"population_cap", cfg.population_cap},
                        {"support_cap", cfg.support_cap},
                        {"jmax", cfg.jmax}};
    std::vector<double> q;
    std::vector<std::vector<double>> p, se;
    for (std::uint32_t g = 1; g <= cfg.horizon; ++g) {
        q.push_back(res.q_hat(g));
        std::vector<double> pg, seg;
        for (std::uint32_t jj = 0; jj <= cfg.jmax; ++jj) {
            pg.push_back(res.p_hat(g, jj));
            seg.push_back(res.stderr_hat(g, jj));
        }
        p.push_back(std::move(pg));
        se.push_back(std::move(seg));
    }
    j["q_hat"] = q;
    j["p_hat"] = p;
    j["stderr"] = se;
    j["capped"] = res.capped;
    j["support_tail_mass"] = res.support_tail_mass;
    return j.dump(2);
}

}  // namespace gwcrit
