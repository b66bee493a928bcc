#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cfnav/errors.hpp"
#include "cfnav/nn.hpp"

namespace cfnav::nn {

// Weight file: text header "cfnav-weights v1", then per block one text line
//   block <name> <ndim> <dims...> <step_count>
// followed by the value, adam_m and adam_v arrays as little-endian f32.
inline constexpr const char* kWeightsHeader = "cfnav-weights v1";

namespace detail {

inline void write_f32_le(std::ostream& os, const std::vector<float>& v) {
    static_assert(std::endian::native == std::endian::little,
                  "big-endian hosts need byte swapping here");
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(float)));
}

inline void read_f32_le(std::istream& is, std::vector<float>& v) {
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(float)));
    if (!is) throw IoError("truncated weight file");
}

}  // namespace detail

inline void save_blocks(std::ostream& os, const std::vector<const ParamBlock*>& blocks) {
    os << kWeightsHeader << "\n";
    for (const ParamBlock* b : blocks) {
        os << "block " << b->name << " " << b->value.shape.size();
        for (int d : b->value.shape) os << " " << d;
        os << " " << b->step_count << "\n";
        detail::write_f32_le(os, b->value.data);
        detail::write_f32_le(os, b->adam_m.data);
        detail::write_f32_le(os, b->adam_v.data);
    }
}

inline void save_blocks_file(const std::string& path,
                             const std::vector<const ParamBlock*>& blocks) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write weight file: " + path);
    save_blocks(f, blocks);
    if (!f) throw IoError("failed writing weight file: " + path);
}

inline std::vector<ParamBlock> load_blocks(std::istream& is, const std::string& what) {
    std::string header;
    if (!std::getline(is, header) || header != kWeightsHeader)
        throw IoError("bad weight file header in " + what);
    std::vector<ParamBlock> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag, name;
        size_t ndim = 0;
        if (!(ls >> tag >> name >> ndim) || tag != "block")
            throw IoError("bad block line in " + what + ": " + line);
        std::vector<int> shape(ndim);
        for (auto& d : shape)
            if (!(ls >> d) || d <= 0) throw IoError("bad block shape in " + what);
        long steps = 0;
        if (!(ls >> steps)) throw IoError("bad block step count in " + what);
        ParamBlock b = ParamBlock::zeros(name, shape);
        b.step_count = steps;
        detail::read_f32_le(is, b.value.data);
        detail::read_f32_le(is, b.adam_m.data);
        detail::read_f32_le(is, b.adam_v.data);
        out.push_back(std::move(b));
    }
    return out;
}

inline std::vector<ParamBlock> load_blocks_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open weight file: " + path);
    return load_blocks(f, path);
}

}  // namespace cfnav::nn
