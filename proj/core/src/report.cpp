#include "solvgeom/report.hpp"

#include <cmath>
#include <cstdio>

namespace solvgeom {

std::string status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        default: return "evidence";
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Report::Report(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

void Report::add(ReportRecord record) { records_.push_back(std::move(record)); }

void Report::check(const std::string& name, bool ok, double value, double tolerance, const std::string& anchor) {
    add({name, ok ? Status::Pass : Status::Fail, format_number(value), format_number(tolerance), anchor});
}

void Report::evidence(const std::string& name, double value, double tolerance, const std::string& anchor) {
    add({name, Status::Evidence, format_number(value), format_number(tolerance), anchor});
}

void Report::note(const std::string& name, const std::string& value, const std::string& anchor) {
    add({name, Status::Evidence, value, "-", anchor});
}

bool Report::passed() const {
    for (const auto& r : records_)
        if (r.status == Status::Fail) return false;
    return true;
}

std::string Report::text() const {
    char seed[32];
    std::snprintf(seed, sizeof seed, "0x%llX", static_cast<unsigned long long>(seed_));
    std::string out = "# command\t" + command_ + "\n# seed\t" + seed + "\n";
    out += "name\tstatus\tvalue\ttolerance\tanchor\n";
    for (const auto& r : records_)
        out += r.name + "\t" + status_name(r.status) + "\t" + r.value + "\t" + r.tolerance + "\t" + r.anchor + "\n";
    out += std::string("# result\t") + (passed() ? "pass" : "fail") + "\n";
    return out;
}

}  // namespace solvgeom
