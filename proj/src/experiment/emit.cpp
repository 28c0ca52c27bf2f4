#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/experiment.hpp"

namespace stab::exp {
namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_text(const ExperimentRecord& record) {
    std::ostringstream out;
    out << "kind,family,n,d,q,variant,epsilon,theta,replication,seed,"
           "statistic_name,value,runtime_ms\n";
    const char* kind = kind_name(record.spec.kind);
    for (const Row& r : record.rows) {
        out << kind << ',' << r.family << ',' << r.n << ',' << r.d << ','
            << format_double(r.q) << ',' << r.variant << ','
            << format_double(r.epsilon) << ',' << format_double(r.theta) << ','
            << r.replication << ',' << r.seed << ',' << r.statistic_name << ','
            << format_double(r.value) << ',' << format_double(r.runtime_ms)
            << '\n';
    }
    return out.str();
}

std::string json_text(const ExperimentRecord& record) {
    std::ostringstream out;
    const ExperimentSpec& s = record.spec;
    out << "{\n  \"spec\": {\"kind\": \"" << kind_name(s.kind)
        << "\", \"family\": \"" << core::family_name(s.family)
        << "\", \"master_seed\": " << s.master_seed
        << ", \"replications\": " << s.replications << "},\n";
    out << "  \"rows\": [\n";
    for (std::size_t i = 0; i < record.rows.size(); ++i) {
        const Row& r = record.rows[i];
        out << "    {\"family\": \"" << json_escape(r.family)
            << "\", \"n\": " << r.n << ", \"d\": " << r.d
            << ", \"q\": " << format_double(r.q) << ", \"variant\": \""
            << r.variant << "\", \"epsilon\": " << format_double(r.epsilon)
            << ", \"theta\": " << format_double(r.theta)
            << ", \"replication\": " << r.replication << ", \"seed\": " << r.seed
            << ", \"statistic_name\": \"" << json_escape(r.statistic_name)
            << "\", \"value\": " << format_double(r.value)
            << ", \"runtime_ms\": " << format_double(r.runtime_ms) << "}"
            << (i + 1 < record.rows.size() ? "," : "") << "\n";
    }
    out << "  ],\n  \"summary\": [\n";
    for (std::size_t i = 0; i < record.summaries.size(); ++i) {
        const auto& cs = record.summaries[i];
        out << "    {\"cell\": \"" << json_escape(cs.key)
            << "\", \"count\": " << cs.summary.count
            << ", \"mean\": " << format_double(cs.summary.mean)
            << ", \"stderr\": " << format_double(cs.summary.stderr_mean)
            << ", \"q10\": " << format_double(cs.summary.q10)
            << ", \"q50\": " << format_double(cs.summary.q50)
            << ", \"q90\": " << format_double(cs.summary.q90)
            << ", \"min\": " << format_double(cs.summary.min)
            << ", \"max\": " << format_double(cs.summary.max) << "}"
            << (i + 1 < record.summaries.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> emit_results(const ExperimentRecord& record) {
    namespace fs = std::filesystem;
    const ExperimentSpec& spec = record.spec;
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    std::vector<std::string> written;
    if (spec.format == "csv" || spec.format == "both") {
        const std::string path = (fs::path(spec.out_dir) / "results.csv").string();
        write_file(path, csv_text(record));
        written.push_back(path);
    }
    if (spec.format == "json" || spec.format == "both") {
        const std::string path = (fs::path(spec.out_dir) / "results.json").string();
        write_file(path, json_text(record));
        written.push_back(path);
    }
    return written;
}

} // namespace stab::exp
