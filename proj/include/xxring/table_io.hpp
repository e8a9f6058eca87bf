#pragma once

// CSV and JSON-lines serialization of sweep tables and boundary curves.
//
// CSV header: j,b,t,delta,quantity,value[,error]. The error column appears
// only when at least one row failed. Doubles are written with 17 significant
// digits so a read-back reproduces every value bit for bit.

#include <iosfwd>
#include <string>

#include "xxring/sweep.hpp"

namespace xxring {

enum class TableFormat { csv, json_lines };

TableFormat parse_table_format(const std::string& name);

std::string format_double(double value);

void write_csv(std::ostream& out, const SweepTable& table);
void write_json_lines(std::ostream& out, const SweepTable& table);
void write_table(std::ostream& out, const SweepTable& table, TableFormat format);

/// Inverse of write_csv. Throws std::runtime_error on malformed input.
SweepTable read_csv(std::istream& in);

/// Columns b,t_c,branch.
void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve);

/// Columns level,b,t.
void write_contours_csv(std::ostream& out, const std::vector<ContourPoint>& points);

}  // namespace xxring
