#include "bjorling/report.hpp"

#include <fstream>

#include "bjorling/errors.hpp"

namespace bjorling {

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_string(std::string_view bytes)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

ReportDocument::ReportDocument(std::string command, std::string input_source,
                               std::string_view input_bytes)
{
    doc_["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc_["command"] = std::move(command);
    doc_["input"] = {{"source", std::move(input_source)}, {"digest", digest_string(input_bytes)}};
    doc_["checks"] = nlohmann::ordered_json::array();
}

void ReportDocument::add_check(const std::string& name, double residual, double tolerance,
                               bool pass, nlohmann::ordered_json details)
{
    nlohmann::ordered_json rec;
    rec["name"] = name;
    rec["residual"] = residual;
    rec["tolerance"] = tolerance;
    rec["pass"] = pass;
    if (!details.empty()) rec["details"] = std::move(details);
    doc_["checks"].push_back(std::move(rec));
    if (!pass) ++failures_;
}

void ReportDocument::add_section(const std::string& key, nlohmann::ordered_json value)
{
    doc_[key] = std::move(value);
}

void ReportDocument::add_timing(const std::string& name, double milliseconds)
{
    timings_[name] = milliseconds;
}

std::string ReportDocument::to_json(bool include_timings) const
{
    nlohmann::ordered_json out = doc_;
    out["timings_ms"] = include_timings ? timings_ : nlohmann::ordered_json::object();
    return out.dump(2) + "\n";
}

void ReportDocument::write(const std::string& path, bool include_timings) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write report to '" + path + "'");
    out << to_json(include_timings);
}

}  // namespace bjorling
