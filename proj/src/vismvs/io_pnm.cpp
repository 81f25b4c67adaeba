#include "vismvs/io_pnm.hpp"

#include <cmath>
#include <fstream>

#include "vismvs/features.hpp"

namespace vismvs {

namespace {

void skip_pnm_whitespace(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            while (in.get() != '\n' && in) {}
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            in.get();
        } else {
            return;
        }
    }
}

struct PnmHeader {
    std::string magic;
    int width = 0, height = 0, maxval = 0;
};

PnmHeader read_pnm_header(std::istream& in, const std::filesystem::path& path) {
    PnmHeader h;
    char m[2];
    in.read(m, 2);
    h.magic = std::string(m, 2);
    if (!in || (h.magic != "P5" && h.magic != "P6"))
        throw std::runtime_error("not a binary PNM file: " + path.string());
    skip_pnm_whitespace(in);
    in >> h.width;
    skip_pnm_whitespace(in);
    in >> h.height;
    skip_pnm_whitespace(in);
    in >> h.maxval;
    in.get(); // single whitespace before raster
    if (!in || h.width < 1 || h.height < 1 || h.maxval != 255)
        throw std::runtime_error("unsupported PNM header in " + path.string());
    return h;
}

} // namespace

void save_ppm(const std::filesystem::path& path, const ImageRGB& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_ppm: cannot open " + path.string());
    out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data()), image.size() * 3);
    if (!out)
        throw std::runtime_error("save_ppm: write failed for " + path.string());
}

ImageRGB load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_ppm: cannot open " + path.string());
    const PnmHeader h = read_pnm_header(in, path);
    if (h.magic != "P6")
        throw std::runtime_error("load_ppm: not a PPM file: " + path.string());
    ImageRGB img(h.width, h.height);
    in.read(reinterpret_cast<char*>(img.data()), img.size() * 3);
    if (!in)
        throw std::runtime_error("load_ppm: truncated raster in " + path.string());
    return img;
}

void save_pgm(const std::filesystem::path& path, const ValidityMask& mask) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_pgm: cannot open " + path.string());
    out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(mask.data()), mask.size());
    if (!out)
        throw std::runtime_error("save_pgm: write failed for " + path.string());
}

ValidityMask load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_pgm: cannot open " + path.string());
    const PnmHeader h = read_pnm_header(in, path);
    if (h.magic != "P5")
        throw std::runtime_error("load_pgm: not a PGM file: " + path.string());
    ValidityMask mask(h.width, h.height);
    in.read(reinterpret_cast<char*>(mask.data()), mask.size());
    if (!in)
        throw std::runtime_error("load_pgm: truncated raster in " + path.string());
    return mask;
}

ImageF load_image_gray(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw std::runtime_error("load_image_gray: cannot open " + path.string());
    char m[2] = {0, 0};
    probe.read(m, 2);
    probe.close();
    if (m[0] == 'P' && m[1] == '6')
        return to_grayscale(load_ppm(path));
    const ValidityMask g = load_pgm(path);
    ImageF out(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = static_cast<float>(g[i]) / 255.0f;
    return out;
}

ImageRGB gray_to_rgb(const ImageF& gray) {
    ImageRGB out(gray.width(), gray.height());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const float v = std::clamp(gray[i], 0.0f, 1.0f);
        const auto b = static_cast<std::uint8_t>(std::lround(v * 255.0f));
        out[i] = {b, b, b};
    }
    return out;
}

} // namespace vismvs
