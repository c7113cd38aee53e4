#include "rigidity/report.hpp"

#include <algorithm>
#include <ostream>

namespace rigidity {

double relative_gap(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kRelGapFloor});
}

IdentityReport make_report(const std::string& name, double lhs, double rhs, double tolerance, int N) {
    IdentityReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_gap = std::abs(lhs - rhs);
    r.rel_gap = relative_gap(lhs, rhs);
    r.tolerance = tolerance;
    r.N = N;
    r.pass = r.rel_gap < tolerance;
    return r;
}

bool all_pass(const std::vector<IdentityReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.pass; });
}

void write_reports_csv(std::ostream& os, const std::vector<IdentityReport>& reports) {
    os << "name,N,lhs,rhs,abs_gap,rel_gap,refinement_slope,tolerance,pass\n";
    os.precision(17);
    for (const auto& r : reports)
        os << r.name << ',' << r.N << ',' << r.lhs << ',' << r.rhs << ',' << r.abs_gap << ',' << r.rel_gap
           << ',' << r.refinement_slope << ',' << r.tolerance << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace rigidity
