#pragma once

#include <string>
#include <vector>

#include "fanolab/pipeline.hpp"

namespace fanolab {

/// Decimal string of a double, "%.17g"; "nan" / "inf" / "-inf" for non-finite values.
std::string decimal(double v);

/// The JSON report as text. Numbers are decimal strings, exact constants
/// are "p/q" strings, and wall time is left out so that the text only
/// depends on the configuration.
std::string report_json(const Report& report);

/// Derived constants as a JSON object of "p/q" strings (T as a decimal).
std::string constants_json_text(const DerivedConstants& consts);

/// One CSV profile: a header line, then one row per base node.
std::string profile_csv(const Profile& profile);

/// File name of a profile, e.g. "profile_spr_64x64.csv".
std::string profile_file_name(const Profile& profile);

/// Writes report.json and every profile into `out_dir` (created if needed).
/// Returns the paths written. Raises IoError with the offending path.
std::vector<std::string> emit_report(const Report& report, const std::string& out_dir);

/// Fixed-width text summary of every check, for the terminal.
std::string summary_text(const Report& report);

}  // namespace fanolab
