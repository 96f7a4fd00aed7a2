#include "kwt/csv.hpp"

#include <charconv>
#include <ostream>

namespace kwt::csv {

std::string format(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void write_path(std::ostream& out, const ReturnPath& path) {
    out << "t,h,eps,eta,nu\n";
    const bool eps = !path.eps.empty(), eta = !path.eta.empty(), nu = !path.nu.empty();
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << i + 1 << ',' << format(path.h[i]) << ',';
        if (eps) out << format(path.eps[i]);
        out << ',';
        if (eta) out << format(path.eta[i]);
        out << ',';
        if (nu) out << format(path.nu[i]);
        out << '\n';
    }
}

void write_curve(std::ostream& out, const GrowthCurve& curve) {
    out << "theta,g_hat,se\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format(curve.grid[i]) << ',' << format(curve.g_hat[i]) << ',' << format(curve.se[i])
            << '\n';
}

void write_surface(std::ostream& out, const GrowthSurface& s) {
    out << "theta1,theta2,g_hat,se\n";
    for (std::size_t j = 0; j < s.grid2.size(); ++j)
        for (std::size_t i = 0; i < s.grid1.size(); ++i) {
            const auto c = j * s.grid1.size() + i;
            out << format(s.grid1[i]) << ',' << format(s.grid2[j]) << ',' << format(s.g_hat[c])
                << ',' << format(s.se[c]) << '\n';
        }
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
    const bool two = !trajectory.theta2.empty();
    out << (two ? "t,theta1,theta2\n" : "t,theta1\n");
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        out << Trajectory::time_of(i) << ',' << format(trajectory.theta1[i]);
        if (two) out << ',' << format(trajectory.theta2[i]);
        out << '\n';
    }
}

void write_mse(std::ostream& out, const MseSeries& series) {
    out << "t,mse\n";
    for (std::size_t i = 0; i < series.t.size(); ++i)
        out << series.t[i] << ',' << format(series.mse[i]) << '\n';
}

void write_table(std::ostream& out, const ScalingTable& table) {
    out << "dynamics,dataset,scaling,mse_at_T\n";
    for (const auto& row : table.rows)
        out << row.dynamics << ',' << row.dataset << ',' << to_string(row.mode) << ','
            << format(row.mse_at_t) << '\n';
}

}  // namespace kwt::csv
