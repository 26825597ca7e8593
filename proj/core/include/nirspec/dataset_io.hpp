#pragma once

#include <string>

#include "nirspec/types.hpp"

namespace nirspec {

/// Dataset CSV schema (UTF-8, header required):
///   id,lesion,label,synthetic,nm_0900.0,nm_0906.4,...,nm_1693.6
/// 4 metadata columns followed by one column per grid point. lesion is one
/// of ACK,SEK,NEV,BCC,SCC,MEL or SYN for synthetic records; label and
/// synthetic are 0/1. Values are serialized with shortest round-trip
/// precision, so write/read is bit-exact.
Dataset read_dataset(const std::string& path);

void write_dataset(const Dataset& dataset, const std::string& path);

/// In-memory variants used by tests and the CLI.
Dataset parse_dataset_csv(const std::string& text, const std::string& origin = "<memory>");
std::string dataset_to_csv(const Dataset& dataset);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Column header for spectral column i of a grid, e.g. "nm_0900.0".
std::string spectral_column_name(const WavelengthGrid& grid, int i);

}  // namespace nirspec
