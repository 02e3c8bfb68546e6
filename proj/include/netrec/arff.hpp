#ifndef NETREC_ARFF_HPP
#define NETREC_ARFF_HPP

#include <iosfwd>

#include "netrec/dataset.hpp"

namespace netrec {

/// Reads the ARFF subset: @relation, @attribute (numeric | {v1,...} | string),
/// @data rows with `?` for missing and `%` comment lines. A `%@class <name>`
/// comment, when present, designates the class attribute; plain Weka files
/// load unlabeled.
Dataset read_arff(std::istream& source);

/// Writes a dataset in the same subset; read_arff(write_arff(d)) is
/// structurally identical to d.
void write_arff(const Dataset& dataset, std::ostream& sink);

}  // namespace netrec

#endif
