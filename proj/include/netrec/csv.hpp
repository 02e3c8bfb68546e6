#ifndef NETREC_CSV_HPP
#define NETREC_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <string>

#include "netrec/dataset.hpp"

namespace netrec {

struct CsvOptions {
    bool has_header = true;
    char quote_char = '"';
    /// Columns with more distinct values than this become text, not nominal.
    std::size_t nominal_threshold = 64;
};

/// Reads a Wireshark-style CSV export (RFC 4180 quoting). Column kinds are
/// inferred: numeric iff every non-empty cell parses as a real, otherwise
/// nominal up to `nominal_threshold` distinct values, otherwise text.
/// Empty cells become missing.
Dataset read_csv(std::istream& source, const CsvOptions& options = {},
                 std::string name = "capture");

}  // namespace netrec

#endif
