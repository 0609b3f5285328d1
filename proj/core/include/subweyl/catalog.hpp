#ifndef SUBWEYL_CATALOG_HPP
#define SUBWEYL_CATALOG_HPP

#include <string>
#include <vector>

#include "subweyl/specfile.hpp"

namespace subweyl {

// Built-in fixtures, shipped as spec-file sources and parsed on demand.
std::vector<std::string> catalog_names();
const std::string& catalog_text(const std::string& name);
AnySpec catalog_load(const std::string& name);

// Resolve `--spec`: an existing file path wins, then a catalog name.
AnySpec resolve_spec(const std::string& path_or_name);

} // namespace subweyl

#endif
