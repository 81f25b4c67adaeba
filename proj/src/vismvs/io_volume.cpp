#include "vismvs/io_volume.hpp"

#include <fstream>
#include <sstream>

namespace vismvs {

void dump_probability_volume(const std::filesystem::path& path, const ProbabilityVolume& p) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("dump_probability_volume: cannot open " + path.string());
    out << "pvol 1\n";
    out << "dims " << p.depth_count() << " " << p.width() << " " << p.height() << "\n";
    if (p.hypotheses().is_per_pixel()) {
        out << "hyps per_pixel\n";
    } else {
        out << "hyps shared";
        out.precision(9);
        for (int j = 0; j < p.depth_count(); ++j)
            out << " " << p.hypotheses().value(j);
        out << "\n";
    }
    out << "data\n";
    if (p.hypotheses().is_per_pixel())
        out.write(reinterpret_cast<const char*>(p.hypotheses().values().data()),
                  static_cast<std::streamsize>(p.hypotheses().values().size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(p.data().data()),
              static_cast<std::streamsize>(p.data().size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(p.validity().data()),
              static_cast<std::streamsize>(p.validity().size()));
    if (!out)
        throw std::runtime_error("dump_probability_volume: write failed for " + path.string());
}

ProbabilityVolume load_probability_volume(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_probability_volume: cannot open " + path.string());
    std::string tag, kind;
    int version = 0, nd = 0, w = 0, h = 0;
    in >> tag >> version;
    if (tag != "pvol" || version != 1)
        throw std::runtime_error("load_probability_volume: bad magic in " + path.string());
    in >> tag >> nd >> w >> h;
    if (tag != "dims" || nd < 1 || w < 1 || h < 1)
        throw std::runtime_error("load_probability_volume: bad dims in " + path.string());
    in >> tag >> kind;
    if (tag != "hyps")
        throw std::runtime_error("load_probability_volume: bad hyps line in " + path.string());

    DepthHypotheses hyps;
    const std::size_t n = static_cast<std::size_t>(nd) * w * h;
    std::vector<float> shared_vals;
    if (kind == "shared") {
        shared_vals.resize(nd);
        for (float& v : shared_vals)
            if (!(in >> v))
                throw std::runtime_error("load_probability_volume: truncated hypotheses");
    } else if (kind != "per_pixel") {
        throw std::runtime_error("load_probability_volume: unknown hypothesis kind " + kind);
    }
    in >> tag;
    if (tag != "data")
        throw std::runtime_error("load_probability_volume: missing data section");
    in.get(); // newline before raster

    if (kind == "per_pixel") {
        std::vector<float> vals(n);
        in.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(n * sizeof(float)));
        hyps = DepthHypotheses::per_pixel(nd, w, h, std::move(vals));
    } else {
        hyps = DepthHypotheses::shared(std::move(shared_vals));
    }
    ProbabilityVolume p(std::move(hyps), w, h);
    in.read(reinterpret_cast<char*>(p.data().data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    in.read(reinterpret_cast<char*>(p.validity().data()),
            static_cast<std::streamsize>(p.validity().size()));
    if (!in)
        throw std::runtime_error("load_probability_volume: truncated data in " + path.string());
    return p;
}

} // namespace vismvs
