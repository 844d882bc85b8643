#ifndef ARENA_TRACE_IO_HPP
#define ARENA_TRACE_IO_HPP

#include <string>

#include "arena/trace.hpp"

namespace arena {

/// Normative trace CSV header; column order is fixed.
extern const char* const kTraceHeader;

/// Saves a dataset into directory `path` as traces.csv plus events.json.
/// Numeric fields round-trip bit-exactly. Writes are atomic.
void save_dataset(const Dataset& dataset, const std::string& path);

/// Loads a dataset previously written by save_dataset. Malformed rows are
/// reported with their line number; a missing column is reported by name.
/// An empty traces.csv yields an empty Dataset.
Dataset load_dataset(const std::string& path);

}  // namespace arena

#endif
