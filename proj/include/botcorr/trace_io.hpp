#pragma once

#include <iosfwd>

#include "botcorr/trace.hpp"

namespace botcorr {

/// Reads the line-delimited trace format.
///
/// The first non-blank line is the header
/// `{"duration_ms": <int>, "scenario": <string|null>, "seed": <int|null>}`; every following
/// non-blank line is an event `{"t": <int>, "pid": <int>, "proc": <string>, "call": <string>,
/// "bytes": <int, optional>}`. Malformed lines raise ParseError with the 1-based line number;
/// a timestamp at or past the duration raises RangeError.
Trace read_trace(std::istream& source);

/// Writes `trace` in the format accepted by read_trace. Throws IoError when the sink fails.
void write_trace(const Trace& trace, std::ostream& sink);

}  // namespace botcorr
