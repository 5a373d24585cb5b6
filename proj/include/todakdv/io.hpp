#pragma once

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "todakdv/asymptotics.hpp"
#include "todakdv/errors.hpp"

namespace todakdv::io {

// 17 significant digits round-trips every double.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// RFC 4180 field quoting.
inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

class Cell {
public:
    Cell(double v) : text_(format_double(v)), number_(v), is_number_(true) {}
    Cell(int v) : text_(std::to_string(v)), number_(v), is_number_(true), is_integer_(true) {}
    Cell(std::size_t v) : Cell(static_cast<int>(v)) {}
    Cell(std::string s) : text_(std::move(s)) {}
    Cell(const char* s) : text_(s) {}

    const std::string& text() const { return text_; }
    nlohmann::json json() const
    {
        if (!is_number_) return text_;
        if (is_integer_) return static_cast<long long>(number_);
        return number_;
    }

private:
    std::string text_;
    double number_ = 0.0;
    bool is_number_ = false;
    bool is_integer_ = false;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> r)
    {
        if (r.size() != columns.size()) throw InvalidInput("row width does not match table " + name);
        rows.push_back(std::move(r));
    }
};

inline void write_csv(std::ostream& os, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_quote(t.columns[i]);
    os << "\r\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_quote(r[i].text());
        os << "\r\n";
    }
}

inline nlohmann::json table_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : r) row.push_back(c.json());
        rows.push_back(std::move(row));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

inline nlohmann::json report_json(const ConvergenceReport& r, const std::string& mode = "")
{
    nlohmann::json j;
    j["label"] = r.label;
    j["N"] = r.N;
    j["error"] = r.error;
    j["slope"] = r.fit.determinate ? nlohmann::json(r.fit.slope) : nlohmann::json(nullptr);
    j["intercept"] = r.fit.determinate ? nlohmann::json(r.fit.intercept) : nlohmann::json(nullptr);
    j["fit_residual"] = r.fit.determinate ? nlohmann::json(r.fit.residual) : nlohmann::json(nullptr);
    j["status"] = r.fit.determinate ? "ok" : "rate indeterminate";
    j["floor_limited"] = r.fit.floor_limited;
    if (!mode.empty()) j["mode"] = mode;
    return j;
}

enum class Format { csv, json };

/// Collects the tables and summary of one study and writes them out.
class StudyOutput {
public:
    explicit StudyOutput(std::string study) : study_(std::move(study)) {}

    Table& table(const std::string& name, std::vector<std::string> columns)
    {
        tables_.push_back({name, std::move(columns), {}});
        return tables_.back();
    }
    nlohmann::json& summary() { return summary_; }

    void write(const std::filesystem::path& dir, Format format) const
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
        if (format == Format::csv) {
            for (const auto& t : tables_) {
                std::ofstream os(dir / (t.name + ".csv"), std::ios::binary);
                if (!os) throw InvalidInput("cannot write " + (dir / (t.name + ".csv")).string());
                write_csv(os, t);
            }
            write_json(dir / (study_ + "_summary.json"), summary_);
        } else {
            nlohmann::json all = summary_;
            for (const auto& t : tables_) all["tables"][t.name] = table_json(t);
            write_json(dir / (study_ + ".json"), all);
        }
    }

private:
    static void write_json(const std::filesystem::path& p, const nlohmann::json& j)
    {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw InvalidInput("cannot write " + p.string());
        os << j.dump(2) << "\n";
    }

    std::string study_;
    std::deque<Table> tables_; // stable references from table()
    nlohmann::json summary_ = nlohmann::json::object();
};

} // namespace todakdv::io
