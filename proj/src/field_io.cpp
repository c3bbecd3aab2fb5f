#include "modspace/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace modspace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte swapping is not implemented");

namespace {
constexpr char kMagic[6] = {'M', 'S', 'F', 'L', 'D', '1'};
}

SampledField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::io_failure, "cannot open field file: " + path);

    char magic[6];
    in.read(magic, 6);
    require(in.gcount() == 6 && std::memcmp(magic, kMagic, 6) == 0, ErrorCode::io_failure,
            "bad magic in field file: " + path);

    std::uint32_t dim = 0, n = 0;
    double h = 0.0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&h), 8);
    require(in.good(), ErrorCode::io_failure, "truncated field file header: " + path);
    require(dim >= 1 && dim <= 8, ErrorCode::io_failure, "unreasonable field dimension");

    GridSpec grid(static_cast<int>(dim), static_cast<int>(n), h);
    SampledField f(grid);
    const std::size_t bytes = f.values.size() * sizeof(Complex);
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(bytes));
    require(in.gcount() == static_cast<std::streamsize>(bytes), ErrorCode::io_failure,
            "truncated field payload: " + path);
    in.peek();
    require(in.eof(), ErrorCode::io_failure, "trailing bytes in field file: " + path);
    f.check_finite();
    return f;
}

void write_field(const SampledField& f, const std::string& path) {
    require(f.grid.dim >= 1, ErrorCode::bad_argument, "cannot serialize a zero-dimensional field");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io_failure, "cannot open output file: " + path);

    out.write(kMagic, 6);
    std::uint32_t dim = static_cast<std::uint32_t>(f.grid.dim);
    std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
    double h = f.grid.step;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&h), 8);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
    require(out.good(), ErrorCode::io_failure, "write failed: " + path);
}

} // namespace modspace
