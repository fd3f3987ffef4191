#pragma once

#include <string>
#include <vector>

#include "lat/numfield.hpp"

namespace lat {

/**
 * Contents of a field data file: the field itself, a module basis, and
 * the fundamental units, all validated at load.
 *
 * File format (JSON): keys `label`, `coeffs` (constant term first),
 * `basis` (array of coordinate arrays in the power basis; entries are
 * integers or "p/q" strings), `units` (same encoding), `precision_bits`.
 */
struct FieldData {
    FieldPtr field;
    std::vector<FieldElement> basis;
    std::vector<FieldElement> units;
    std::string label;
    int precision_bits = 60;
};

FieldData load_field_file(const std::string& path);
FieldData parse_field_json(const std::string& json_text, const std::string& origin);

} // namespace lat
