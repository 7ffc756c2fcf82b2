#pragma once

#include <string>

#include "ruelle/ifs.hpp"

namespace ruelle {

// Structured text config (JSON syntax):
//   {"kind": "gauss", "n_branches": 3}
//   {"kind": "schottky", "generators": [[a,b,c,d], ...], "intervals": [[lo,hi], ...]}
//   {"kind": "custom", "generators": [[a,b,c,d], ...],   // one Mobius map per target
//    "intervals": [[lo,hi], ...], "adjacency": [[0|1, ...], ...]}  // adjacency optional (full)
IfsSystem ifs_from_json_text(const std::string &text);
IfsSystem ifs_from_json_file(const std::string &path);
std::string ifs_to_json_text(const IfsSystem &ifs);

} // namespace ruelle
