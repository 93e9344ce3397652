#pragma once

// Runs both solvers over the published rows (or an ad-hoc sweep) and
// renders the comparison as CSV, JSON or Markdown.

#include "qdot/eigen_result.hpp"
#include "qdot/numerov.hpp"
#include "qdot/paper_tables.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qdot::report {

enum class Status { pass, suspect, fail, error, unreferenced };

const char* to_string(Status status) noexcept;

enum class Methods { wkb, exact, both };

struct Tolerances {
    double wkb = 5e-4;              ///< WKB column hard tolerance
    double exact = 5e-3;            ///< exact column hard tolerance
    double transcription = 5e-4;    ///< below this a column is a clean pass
    double suspect_ceiling = 5e-3;  ///< WKB errors up to this are "suspect"
    double mesh_error = 1e-7;       ///< max relative Richardson estimate
};

struct RunOptions {
    Methods methods = Methods::both;
    std::optional<double> coulomb_override;
    numerov::ExactOptions exact;
    unsigned threads = 0; ///< 0: hardware concurrency
};

struct RowResult {
    TableRow row;                ///< paper values are NaN for sweep rows
    double coulomb_used = 0.0;
    std::optional<EigenResult> wkb;
    std::optional<EigenResult> exact;
    double err_wkb = 0.0;        ///< NaN when not applicable
    double err_exact = 0.0;
    double rel_diff = 0.0;       ///< |E_wkb - E_exact| / E_exact
    Status status_wkb = Status::unreferenced;
    Status status_exact = Status::unreferenced;
    Status status = Status::unreferenced;
    std::string message;         ///< solver failure text, empty otherwise

    double e_wkb() const;
    double e_exact() const;
};

struct TableSummary {
    int table_id = 0;
    int rows = 0;
    int passed = 0;
    int suspect = 0;
    int failed = 0;
    int errors = 0;
    double max_err_wkb = 0.0;
    double max_err_exact = 0.0;
    double max_rel_diff = 0.0;
};

struct AuditEntry {
    int table_id = 0;
    double r0 = 0.0;
    double coulomb_used = 0.0;
    double e_wkb = 0.0;
    double paper_e_wkb = 0.0;
    double err = 0.0;
};

struct AuditTable {
    int table_id = 0;
    double coulomb_used = 0.0;
    int rows = 0;
    int rows_over_threshold = 0;
    double min_err = 0.0;
    double min_err_r0 = 0.0;
};

struct AuditSection {
    double threshold = 0.10;
    std::vector<AuditEntry> entries;
    std::vector<AuditTable> tables;
    bool every_row_over_threshold = false;
    std::vector<std::string> findings;
};

struct ReproductionReport {
    Tolerances tolerances;
    std::vector<RowResult> rows;
    std::vector<TableSummary> summaries;
    std::optional<AuditSection> audit;

    bool has_hard_failure() const;
};

/// Solve one row under the given Coulomb strength and grade it.
RowResult compute_row(const TableRow& row, double coulomb, const Tolerances& tol,
                      const RunOptions& opts);

/// table_id in {1, 2, 3}, or 0 for all tables.
ReproductionReport reproduce_table(int table_id, const Tolerances& tol = {},
                                   const RunOptions& opts = {});

/// Re-solves Table 1 under Z = 2 and Tables 2-3 under Z = 1 (WKB only).
AuditSection audit_units(unsigned threads = 0, double threshold = 0.10);

/// Rows without published values (table id 0).
ReproductionReport sweep(const std::vector<double>& radii, int n_r, int m,
                         double coulomb, const RunOptions& opts = {});

std::vector<TableSummary> summarize(const std::vector<RowResult>& rows);

enum class Format { csv, json, md };

std::optional<Format> parse_format(std::string_view name);

class EmitError : public std::runtime_error {
public:
    EmitError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline constexpr const char* csv_header =
    "table,r0,n_r,m,Z,E_wkb,E_exact,rel_diff,paper_wkb,paper_exact,err_wkb,err_exact,pass";

/// %.6g, empty for NaN.
std::string format_number(double value);

nlohmann::json to_json(const ReproductionReport& report);

/// `config` is echoed under "config" in JSON output when non-null.
void emit(const ReproductionReport& report, Format format, std::ostream& out,
          const nlohmann::json& config = nullptr);

/// Writes to a file. Throws EmitError carrying the destination path.
void emit_to_file(const ReproductionReport& report, Format format,
                  const std::string& path, const nlohmann::json& config = nullptr);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace qdot::report
