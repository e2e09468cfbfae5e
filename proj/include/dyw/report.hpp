#pragma once

#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dyw {

/// Relative slack absorbing floating rounding of exactly-derived quantities.
inline constexpr double kInequalitySlack = 1e-9;

struct VerificationReport {
    enum class Status { ok, refused, report };

    std::string name;
    double left = 0.0;
    double right = 0.0;
    double constant = 1.0;
    double margin = 0.0;
    bool pass = false;
    Status status = Status::ok;
    std::string digest;

    std::string to_text() const {
        auto fmt = [](double v) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        const char* st =
            status == Status::ok ? "ok" : (status == Status::refused ? "refused" : "report");
        return "check=" + name + " status=" + st + " lhs=" + fmt(left) + " rhs=" + fmt(right) +
               " constant=" + fmt(constant) + " margin=" + fmt(margin) +
               " pass=" + (pass ? "1" : "0") + " digest=" + digest;
    }
};

inline VerificationReport make_report(std::string name, double left, double right, double constant,
                                      std::string digest,
                                      VerificationReport::Status status = VerificationReport::Status::ok) {
    VerificationReport r;
    r.name = std::move(name);
    r.left = left;
    r.right = right;
    r.constant = constant;
    r.margin = left > 0.0 ? right / left : std::numeric_limits<double>::infinity();
    r.pass = left <= right * (1.0 + kInequalitySlack) ||
             right == std::numeric_limits<double>::infinity();
    r.status = status;
    r.digest = std::move(digest);
    return r;
}

inline VerificationReport refused_report(std::string name, std::string why, std::string digest) {
    VerificationReport r;
    r.name = std::move(name);
    r.status = VerificationReport::Status::refused;
    r.pass = false;
    r.digest = std::move(digest) + " refused=" + why;
    return r;
}

/// Headline record of one verifier plus its sub-step records.
struct CheckResult {
    VerificationReport primary;
    std::vector<VerificationReport> details;

    std::vector<VerificationReport> all() const {
        std::vector<VerificationReport> v{primary};
        v.insert(v.end(), details.begin(), details.end());
        return v;
    }
    bool ok() const {
        if (primary.status == VerificationReport::Status::refused || !primary.pass) return false;
        for (const auto& d : details)
            if (d.status == VerificationReport::Status::ok && !d.pass) return false;
        return true;
    }
};

}  // namespace dyw
