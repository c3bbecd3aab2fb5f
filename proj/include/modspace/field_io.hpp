#ifndef MODSPACE_FIELD_IO_HPP
#define MODSPACE_FIELD_IO_HPP

#include <string>

#include "modspace/grid.hpp"

namespace modspace {

// Binary field file: magic "MSFLD1" (6 bytes), u32 LE dim, u32 LE N,
// f64 LE h, then N^dim complex values as interleaved f64 (re, im) LE,
// row-major with axis 0 slowest.  Total size 22 + 16 N^dim bytes.
SampledField read_field(const std::string& path);
void write_field(const SampledField& f, const std::string& path);

} // namespace modspace

#endif
