#include "qdot/paper_tables.hpp"

#include <array>
#include <stdexcept>

namespace qdot::report {

namespace {

// Values transcribed verbatim. The Coulomb strength is not printed with the
// tables: Table 1 matches Z = 1 and Tables 2-3 match Z = 2 in hbar = 2mu* = 1
// units (see the unit audit in report.cpp).
constexpr std::array rows{
    TableRow{1, 0.4, 0, 0, 1.0, 47.031, 44.505},
    TableRow{1, 0.6, 0, 0, 1.0, 22.989, 21.589},
    TableRow{1, 0.7, 0, 0, 1.0, 17.608, 16.513},
    TableRow{1, 0.8, 0, 0, 1.0, 14.013, 13.135},
    TableRow{1, 0.9, 0, 0, 1.0, 11.479, 10.762},
    TableRow{1, 1.0, 0, 0, 1.0, 9.6186, 9.0240},
    TableRow{1, 1.5, 0, 0, 1.0, 4.9446, 4.6693},
    TableRow{1, 2.0, 0, 0, 1.0, 3.1283, 2.9776},
    TableRow{1, 3.0, 0, 0, 1.0, 1.6742, 1.6152},
    TableRow{1, 4.0, 0, 0, 1.0, 1.0895, 1.0610},
    TableRow{1, 5.0, 0, 0, 1.0, 0.78678, 0.7712},
    TableRow{1, 6.0, 0, 0, 1.0, 0.60592, 0.59663},
    TableRow{1, 9.0, 0, 0, 1.0, 0.34399, 0.34126},
    TableRow{1, 10.0, 0, 0, 1.0, 0.29788, 0.29592},
    TableRow{1, 12.0, 0, 0, 1.0, 0.23288, 0.23180},

    TableRow{2, 0.5, 0, 1, 2.0, 65.835, 66.613},
    TableRow{2, 1.0, 0, 1, 2.0, 18.479, 18.646},
    TableRow{2, 1.5, 0, 1, 2.0, 9.0618, 9.1573},
    TableRow{2, 2.0, 0, 1, 2.0, 5.6020, 5.6328},
    TableRow{2, 3.0, 0, 1, 2.0, 2.9121, 2.9225},
    TableRow{2, 5.0, 0, 1, 2.0, 1.3404, 1.3428},
    TableRow{2, 6.0, 0, 1, 2.0, 1.0288, 1.0303},
    TableRow{2, 8.0, 0, 1, 2.0, 0.68606, 0.68676},
    TableRow{2, 10.0, 0, 1, 2.0, 0.50576, 0.50621},
    TableRow{2, 15.0, 0, 1, 2.0, 0.29604, 0.29629},
    TableRow{2, 20.0, 0, 1, 2.0, 0.20500, 0.20518},

    TableRow{3, 0.5, 1, 1, 2.0, 206.42, 206.51},
    TableRow{3, 1.0, 1, 1, 2.0, 54.222, 54.208},
    TableRow{3, 1.2, 1, 1, 2.0, 38.375, 38.356},
    TableRow{3, 1.5, 1, 1, 2.0, 25.249, 25.227},
    TableRow{3, 2.0, 1, 1, 2.0, 14.842, 14.821},
    TableRow{3, 3.0, 1, 1, 2.0, 7.1557, 7.1399},
    TableRow{3, 4.0, 1, 1, 2.0, 4.3329, 4.3209},
    TableRow{3, 5.0, 1, 1, 2.0, 2.9659, 2.9567},
    TableRow{3, 6.0, 1, 1, 2.0, 2.1910, 2.1837},
    TableRow{3, 8.0, 1, 1, 2.0, 1.3763, 1.3714},
    TableRow{3, 10.0, 1, 1, 2.0, 0.96993, 0.96643},
    TableRow{3, 15.0, 1, 1, 2.0, 0.52556, 0.52379},
    TableRow{3, 20.0, 1, 1, 2.0, 0.34602, 0.34496},
};

void check_id(int table_id)
{
    if (table_id < 1 || table_id > 3)
        throw std::out_of_range("table id must be 1, 2 or 3");
}

} // namespace

std::span<const TableRow> paper_rows() { return rows; }

std::vector<TableRow> table_rows(int table_id)
{
    check_id(table_id);
    std::vector<TableRow> out;
    for (const auto& row : rows)
        if (row.table_id == table_id)
            out.push_back(row);
    return out;
}

std::string_view table_caption(int table_id)
{
    check_id(table_id);
    switch (table_id) {
    case 1: return "Energy of the ground state (n_r = 0, m = 0)";
    case 2: return "Energy of the excited state having n_r = 0, m = 1";
    default: return "Energy of the excited state having (n_r = 1, m = 1)";
    }
}

double table_coulomb_strength(int table_id)
{
    check_id(table_id);
    return table_id == 1 ? 1.0 : 2.0;
}

} // namespace qdot::report
