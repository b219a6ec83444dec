#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oppaccess/smmpp.hpp"

namespace oppaccess {

inline constexpr const char* kTraceHeader = "# oppaccess-trace v1";

/// Writes one cycle per line as `duration_seconds[,state]`, states 1-based.
/// `comments` are emitted after the header, each prefixed with "# ".
/// A `# segment <k> begins` line precedes each segment after the first.
void write_trace(std::ostream& out, const IdleTrace& trace,
                 const std::vector<std::string>& comments = {});

/// Reads the format written by write_trace. The state column is optional
/// but must be present on every line or on none. Lines starting with `#`
/// are comments; blank lines are skipped. Throws DataError on bad input.
IdleTrace read_trace(std::istream& in);

IdleTrace read_trace_file(const std::string& path);

}  // namespace oppaccess
