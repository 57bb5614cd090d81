#ifndef GCS_GRAMMAR_IO_HPP
#define GCS_GRAMMAR_IO_HPP

#include <iosfwd>
#include <string>

#include "gcs/grammar.hpp"

namespace gcs {

// GCS1 text format:
//   GCS1 <sigma> <nrules> <root-id>
//   T <id> <symbol>
//   P <id> <left-id> <right-id>
// Rule lines appear in topological order; ids are arbitrary non-negative
// integers and are renumbered on read.
Grammar read_gcs1(std::istream& in);
Grammar read_gcs1_file(const std::string& path);
void write_gcs1(std::ostream& out, const Grammar& g);

}  // namespace gcs

#endif  // GCS_GRAMMAR_IO_HPP
