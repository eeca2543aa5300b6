#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "ipslab/dual.hpp"
#include "ipslab/dynamics.hpp"
#include "ipslab/error.hpp"

namespace ipslab::harness {

/// 17 significant digits, enough to round-trip any double.
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    return f;
}

/// replica,t,observable,value; one row per sample and observable.
inline void write_trajectories(std::ostream& os, const std::vector<RunRecord>& runs) {
    os << "replica,t,observable,value\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& rec = runs[r];
        for (std::size_t i = 0; i < rec.times.size(); ++i)
            for (std::size_t k = 0; k < rec.observables.size(); ++k)
                os << r << ',' << fmt(rec.times[i]) << ',' << to_string(rec.observables[k]) << ','
                   << fmt(rec.values[k][i]) << '\n';
    }
}

struct AbsorptionRow {
    bool absorbed = false;
    double tau = 0.0;
    std::string final_state;
};

/// replica,absorbed,tau,final_state
inline void write_absorption(std::ostream& os, const std::vector<AbsorptionRow>& rows) {
    os << "replica,absorbed,tau,final_state\n";
    for (std::size_t r = 0; r < rows.size(); ++r)
        os << r << ',' << (rows[r].absorbed ? 1 : 0) << ',' << fmt(rows[r].tau) << ',' << rows[r].final_state << '\n';
}

inline std::vector<AbsorptionRow> absorption_rows(const std::vector<RunRecord>& runs) {
    std::vector<AbsorptionRow> rows;
    rows.reserve(runs.size());
    for (const auto& rec : runs)
        rows.push_back({rec.absorbed, rec.absorbed ? rec.absorption_time : rec.end_time, to_string(rec.final_state)});
    return rows;
}

/// replica,time,survivor,absorbed
inline void write_coalescence(std::ostream& os, const std::vector<WalkerSet>& runs) {
    os << "replica,time,survivor,absorbed\n";
    for (std::size_t r = 0; r < runs.size(); ++r)
        for (const auto& e : runs[r].events) os << r << ',' << fmt(e.t) << ',' << e.survivor << ',' << e.absorbed << '\n';
}

/// replica,tau,capped
inline void write_meeting(std::ostream& os, const std::vector<MeetingResult>& runs) {
    os << "replica,tau,capped\n";
    for (std::size_t r = 0; r < runs.size(); ++r)
        os << r << ',' << fmt(runs[r].tau) << ',' << (runs[r].capped ? 1 : 0) << '\n';
}

}  // namespace ipslab::harness
