#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace solvgeom {

enum class Status { Pass, Fail, Evidence };

struct ReportRecord {
    std::string name;
    Status status = Status::Pass;
    std::string value;
    std::string tolerance;
    std::string anchor = "plumbing";
};

/**
 * @brief Ordered check records printed one per line, tab-separated.
 *
 * The text is deterministic for a given command and seed; wall-clock time is
 * not part of it.
 */
class Report {
public:
    Report(std::string command, std::uint64_t seed);

    void add(ReportRecord record);
    // Pass if ok, Fail otherwise.
    void check(const std::string& name, bool ok, double value, double tolerance, const std::string& anchor = "plumbing");
    void evidence(const std::string& name, double value, double tolerance, const std::string& anchor = "plumbing");
    void note(const std::string& name, const std::string& value, const std::string& anchor = "plumbing");

    bool passed() const;  // no Fail records
    const std::vector<ReportRecord>& records() const { return records_; }
    std::string text() const;

private:
    std::string command_;
    std::uint64_t seed_;
    std::vector<ReportRecord> records_;
};

std::string status_name(Status s);
std::string format_number(double v);

}  // namespace solvgeom
