#pragma once

#include <iosfwd>
#include <string>

#include "kwt/dynamics.hpp"
#include "kwt/experiments.hpp"
#include "kwt/kw.hpp"
#include "kwt/oracle.hpp"

namespace kwt::csv {

// Shortest representation that parses back to the same double.
std::string format(double v);

void write_path(std::ostream& out, const ReturnPath& path);              // t,h,eps,eta,nu
void write_curve(std::ostream& out, const GrowthCurve& curve);           // theta,g_hat,se
void write_surface(std::ostream& out, const GrowthSurface& surface);     // theta1,theta2,g_hat,se
void write_trajectory(std::ostream& out, const Trajectory& trajectory);  // t,theta1[,theta2]
void write_mse(std::ostream& out, const MseSeries& series);              // t,mse
void write_table(std::ostream& out, const ScalingTable& table);          // dynamics,dataset,scaling,mse_at_T

}  // namespace kwt::csv
