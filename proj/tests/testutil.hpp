#pragma once

#include <string>

#include "lat/fieldfile.hpp"
#include "lat/lattice.hpp"

namespace lattest {

inline std::string fields_dir() { return LAT_FIELDS_DIR; }

inline lat::FieldData load_field(const std::string& name) {
    return lat::load_field_file(fields_dir() + "/" + name + ".fld");
}

inline lat::Lattice load_lattice(const std::string& name) {
    lat::FieldData d = load_field(name);
    return lat::Lattice::from_module(lat::ModuleBasis{d.basis, d.label}, d.precision_bits);
}

} // namespace lattest
