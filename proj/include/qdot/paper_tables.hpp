#pragma once

// Published reference energies for the hard-wall disc with a central charge.

#include <span>
#include <string_view>
#include <vector>

namespace qdot::report {

struct TableRow {
    int table_id = 0;
    double r0 = 0.0;
    int n_r = 0;
    int m = 0;
    double coulomb_strength = 0.0;
    double paper_e_wkb = 0.0;
    double paper_e_exact = 0.0;
};

/// All rows of Tables 1-3 in printed order.
std::span<const TableRow> paper_rows();

std::vector<TableRow> table_rows(int table_id);

/// Caption, e.g. "Energy of the ground state (n_r = 0, m = 0)".
std::string_view table_caption(int table_id);

/// Coulomb strength under which a table is reproduced (1 for Table 1, 2 otherwise).
double table_coulomb_strength(int table_id);

} // namespace qdot::report
