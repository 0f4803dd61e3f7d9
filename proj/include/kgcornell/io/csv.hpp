#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/ode.hpp"
#include "kgcornell/spectrum.hpp"
#include "kgcornell/thermo.hpp"
#include "kgcornell/wavefunction.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

namespace kgcornell::io {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// 15 significant digits, printf-style.
inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string fmt(int v) { return std::to_string(v); }

inline void write_csv(const CsvTable& table, std::ostream& os)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw Error(ErrorKind::IoError, "row width does not match the CSV header",
                        static_cast<double>(row.size()));
        line(row);
    }
}

/// Writes to `path`, or to stdout when the path is empty or "-".
inline void write_csv(const CsvTable& table, const std::string& path)
{
    if (path.empty() || path == "-") {
        write_csv(table, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    write_csv(table, out);
    out.flush();
    if (!out)
        throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

inline CsvTable spectrum_csv(const std::vector<TableRow>& rows)
{
    CsvTable t{{"D", "n", "l", "variant", "k", "E_plus", "E_minus", "status"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.D), fmt(r.n), fmt(r.l), std::string(to_string(r.variant)), fmt(r.k),
                          fmt(r.e_plus), fmt(r.e_minus), r.status});
    return t;
}

/// One row per mu: both partition functions plus the thermal quantities of the chosen method.
struct ThermoCsvRow {
    double Z_direct;
    double Z_em;
    ThermoPoint point;
};

inline CsvTable thermo_csv(const std::vector<ThermoCsvRow>& rows)
{
    CsvTable t{{"mu", "Z_direct", "Z_em", "F_bar", "U_bar", "S_bar", "Cv_bar"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.point.mu), fmt(r.Z_direct), fmt(r.Z_em), fmt(r.point.F_bar), fmt(r.point.U_bar),
                          fmt(r.point.S_bar), fmt(r.point.Cv_bar)});
    return t;
}

inline CsvTable wavefunction_csv(const std::vector<WavefunctionSample>& rows)
{
    CsvTable t{{"r", "R_paper", "R_exact"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.r), fmt(r.R_paper), fmt(r.R_exact)});
    return t;
}

struct OdeCsvRow {
    int D;
    int l;
    int nodes;
    OdeEigenvalue level;
};

inline CsvTable ode_csv(const std::vector<OdeCsvRow>& rows)
{
    CsvTable t{{"D", "l", "nodes", "E_numeric", "residual", "h"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({fmt(r.D), fmt(r.l), fmt(r.nodes), fmt(r.level.E), fmt(r.level.mismatch_residual),
                          fmt(r.level.grid_h)});
    return t;
}

} // namespace kgcornell::io
