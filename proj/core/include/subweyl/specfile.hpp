#ifndef SUBWEYL_SPECFILE_HPP
#define SUBWEYL_SPECFILE_HPP

#include <string>
#include <variant>

#include "subweyl/finsler.hpp"
#include "subweyl/manifold.hpp"

namespace subweyl {

using AnySpec = std::variant<ManifoldSpec, FinslerSpec>;

// Parse the sectioned spec-file format (see docs/specfile.md). The document
// must contain exactly one of [manifold]/[finsler]; metric and Weyl entries
// are 1-based and sparse. Throws ParseError with a line number for malformed
// input and ValidationError for violated invariants (index ranges, symbol
// collisions, degenerate metric at the domain center).
AnySpec parse_spec_text(const std::string& text, const std::string& name);
AnySpec load_spec_file(const std::string& path);

const std::string& spec_name(const AnySpec&);
const Box& spec_domain(const AnySpec&);
const FixtureTags& spec_tags(const AnySpec&);

} // namespace subweyl

#endif
