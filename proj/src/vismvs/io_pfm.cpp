#include "vismvs/io_pfm.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace vismvs {

namespace {

static_assert(std::endian::native == std::endian::little,
              "PFM writer assumes a little-endian host");

void swap_floats(float* data, std::size_t n) {
    auto* bytes = reinterpret_cast<unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        std::swap(bytes[4 * i + 0], bytes[4 * i + 3]);
        std::swap(bytes[4 * i + 1], bytes[4 * i + 2]);
    }
}

} // namespace

void save_pfm(const std::filesystem::path& path, const ImageF& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_pfm: cannot open " + path.string());
    out << "Pf\n" << map.width() << " " << map.height() << "\n-1.0\n";
    for (int y = map.height() - 1; y >= 0; --y)
        out.write(reinterpret_cast<const char*>(map.row(y)),
                  static_cast<std::streamsize>(map.width()) * sizeof(float));
    if (!out)
        throw std::runtime_error("save_pfm: write failed for " + path.string());
}

ImageF load_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_pfm: cannot open " + path.string());
    std::string magic;
    int w = 0, h = 0;
    double scale = 0.0;
    in >> magic >> w >> h >> scale;
    if (!in || magic != "Pf" || w < 1 || h < 1 || scale == 0.0)
        throw std::runtime_error("load_pfm: bad header in " + path.string());
    in.get(); // single whitespace before raster
    ImageF map(w, h);
    for (int y = h - 1; y >= 0; --y)
        in.read(reinterpret_cast<char*>(map.row(y)),
                static_cast<std::streamsize>(w) * sizeof(float));
    if (!in)
        throw std::runtime_error("load_pfm: truncated raster in " + path.string());
    if (scale > 0.0) // big-endian file
        swap_floats(map.data(), map.size());
    return map;
}

} // namespace vismvs
