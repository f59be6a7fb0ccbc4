#ifndef SLELAB_IO_HPP
#define SLELAB_IO_HPP

#include "slelab/drivers.hpp"
#include "slelab/estimators.hpp"
#include "slelab/loewner.hpp"
#include "slelab/radial.hpp"

#include <string>
#include <vector>

namespace slelab {

// 17 significant digits, lossless double round-trip
std::string fmt17(double x);

void write_driver_csv(const std::string& path, const DriverPath& driver);
void write_observables_csv(const std::string& path, const LoewnerObservables& obs);
void write_trace_csv(const std::string& path, const TracePolyline& trace);
void write_tilted_csv(const std::string& path, const TiltedPath& tp);
void write_density_csv(const std::string& path, const std::vector<double>& y,
                       const std::vector<double>& p);
void write_moments_csv(const std::string& path, const std::vector<MomentEstimate>& series);
void write_boxcount_csv(const std::string& path, const std::vector<BoxCountReport>& reports);
void write_audit_csv(const std::string& path, const AuditReport& rep);

} // namespace slelab

#endif
