#include "slelab/io.hpp"

#include <charconv>
#include <fstream>

namespace slelab {

std::string fmt17(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), Guard::bad_argument, "cannot open output file: " + path);
    return out;
}

} // namespace

void write_driver_csv(const std::string& path, const DriverPath& driver) {
    auto out = open_out(path);
    out << "t,w,v\n";
    for (std::size_t k = 0; k < driver.size(); ++k)
        out << fmt17(driver.t(k)) << ',' << fmt17(driver.w[k]) << ',' << fmt17(driver.v[0][k])
            << '\n';
}

void write_observables_csv(const std::string& path, const LoewnerObservables& obs) {
    auto out = open_out(path);
    out << "t,f,log_gprime,v,delta,q\n";
    for (std::size_t k = 0; k < obs.size(); ++k)
        out << fmt17(obs.t(k)) << ',' << fmt17(obs.f[k]) << ',' << fmt17(obs.log_gprime[k]) << ','
            << fmt17(obs.v[k]) << ',' << fmt17(obs.delta[k]) << ',' << fmt17(obs.q[k]) << '\n';
}

void write_trace_csv(const std::string& path, const TracePolyline& trace) {
    auto out = open_out(path);
    out << "re,im\n";
    for (const auto& z : trace.pts) out << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
}

void write_tilted_csv(const std::string& path, const TiltedPath& tp) {
    auto out = open_out(path);
    out << "s,q,l,m_weight\n";
    for (std::size_t k = 0; k < tp.size(); ++k) {
        out << fmt17(tp.s(k)) << ',' << fmt17(tp.q[k]) << ',' << fmt17(tp.l[k]) << ','
            << fmt17(tp.m_weight.empty() ? 0.0 : tp.m_weight[k]) << '\n';
    }
}

void write_density_csv(const std::string& path, const std::vector<double>& y,
                       const std::vector<double>& p) {
    require(y.size() == p.size(), Guard::bad_argument, "density table size mismatch");
    auto out = open_out(path);
    out << "y,p\n";
    for (std::size_t k = 0; k < y.size(); ++k) out << fmt17(y[k]) << ',' << fmt17(p[k]) << '\n';
}

void write_moments_csv(const std::string& path, const std::vector<MomentEstimate>& series) {
    auto out = open_out(path);
    out << "s,value,stderr,method\n";
    for (const auto& e : series)
        out << fmt17(e.s) << ',' << fmt17(e.value) << ',' << fmt17(e.stderr_) << ','
            << to_string(e.method) << '\n';
}

void write_boxcount_csv(const std::string& path, const std::vector<BoxCountReport>& reports) {
    auto out = open_out(path);
    out << "n,count_upper,count_lower,grid_size\n";
    for (const auto& r : reports)
        out << r.n << ',' << fmt17(r.count_upper) << ',' << fmt17(r.count_lower) << ','
            << r.grid_size << '\n';
}

void write_audit_csv(const std::string& path, const AuditReport& rep) {
    auto out = open_out(path);
    out << "t,x,delta,dist,dist_slack,harm_len,gprime,dist_ok,koebe_ok\n";
    for (const auto& a : rep.samples)
        out << fmt17(a.t) << ',' << fmt17(a.x) << ',' << fmt17(a.delta) << ',' << fmt17(a.dist)
            << ',' << fmt17(a.dist_slack) << ',' << fmt17(a.harm_len) << ',' << fmt17(a.gprime)
            << ',' << (a.dist_ok ? 1 : 0) << ',' << (a.koebe_ok ? 1 : 0) << '\n';
}

} // namespace slelab
