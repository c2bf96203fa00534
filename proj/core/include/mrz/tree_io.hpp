#ifndef MRZ_TREE_IO_HPP
#define MRZ_TREE_IO_HPP

#include <string>

#include "mrz/filtration.hpp"

namespace mrz {

// Wire format:
//   tree:     {"levels": [[{"p": 1.0, "parent": -1}], [{"p": 0.5, "parent": 0}, ...], ...]}
//   variable: {"level": 1, "values": [2.0, 0.0]}
// Parsing validates every structural invariant and reports the first violated
// one via InvariantError; malformed documents raise std::runtime_error.

std::string tree_to_json(const FiltrationTree& tree);
FiltrationTree tree_from_json(const std::string& text);

std::string variable_to_json(const RandomVariable& f);
RandomVariable variable_from_json(const std::string& text, const FiltrationTree& tree);

}  // namespace mrz

#endif  // MRZ_TREE_IO_HPP
