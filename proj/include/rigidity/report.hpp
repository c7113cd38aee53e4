#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rigidity {

/// Two sides of one identity or inequality, with the verdict.
struct IdentityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_gap = 0.0;
    /// abs_gap / max(|lhs|, |rhs|, 1e-14).
    double rel_gap = 0.0;
    /// log2 of the gap ratio between N and 2N; NaN when not measured.
    double refinement_slope = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    /// Grid intervals the report was computed on (0 when not grid based).
    int N = 0;
    bool pass = false;
};

constexpr double kRelGapFloor = 1e-14;

double relative_gap(double lhs, double rhs);

/// Fills the gaps and passes when rel_gap < tolerance.
IdentityReport make_report(const std::string& name, double lhs, double rhs, double tolerance, int N = 0);

bool all_pass(const std::vector<IdentityReport>& reports);

/// Summary table: name,N,lhs,rhs,abs_gap,rel_gap,refinement_slope,tolerance,pass.
void write_reports_csv(std::ostream& os, const std::vector<IdentityReport>& reports);

}  // namespace rigidity
