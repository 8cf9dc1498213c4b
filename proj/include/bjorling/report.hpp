#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace bjorling {

inline constexpr const char* kToolName = "bjorling";
inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit content hash; any byte change changes the digest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes);

/// Single JSON document per run: tool identity, input digest, one record per
/// requested check, and timings. Timings are only serialized on request so
/// the default output bytes are reproducible.
class ReportDocument {
public:
    ReportDocument(std::string command, std::string input_source, std::string_view input_bytes);

    void add_check(const std::string& name, double residual, double tolerance, bool pass,
                   nlohmann::ordered_json details = nlohmann::ordered_json::object());
    void add_section(const std::string& key, nlohmann::ordered_json value);
    void add_timing(const std::string& name, double milliseconds);

    bool all_pass() const { return failures_ == 0; }
    int failures() const { return failures_; }

    std::string to_json(bool include_timings) const;
    void write(const std::string& path, bool include_timings) const;

private:
    nlohmann::ordered_json doc_;
    nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
    int failures_ = 0;
};

}  // namespace bjorling
