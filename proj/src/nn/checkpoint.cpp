// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace intmit::nn {

namespace {
constexpr char kMagic[4] = {'I', 'M', 'C', 'K'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void save_checkpoint(const std::string& path, const ParamList& params) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 4);
    write_pod(os, kVersion);
    write_pod(os, static_cast<uint32_t>(params.size()));
    for (const auto& p : params) {
        write_pod(os, static_cast<uint32_t>(p.name.size()));
        os.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        write_pod(os, static_cast<uint32_t>(p.shape.size()));
        for (int d : p.shape) write_pod(os, static_cast<uint32_t>(d));
        os.write(reinterpret_cast<const char*>(p.value),
                 static_cast<std::streamsize>(p.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("short write to checkpoint: " + path);
}

void load_checkpoint(const std::string& path, const ParamList& params) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    if (read_pod<uint32_t>(is) != kVersion)
        throw std::runtime_error("unsupported checkpoint version");
    const auto count = read_pod<uint32_t>(is);
    if (count != params.size())
        throw std::runtime_error("checkpoint parameter count does not match the network");

    std::map<std::string, const ParamRef*> by_name;
    for (const auto& p : params) by_name[p.name] = &p;

    for (uint32_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<uint32_t>(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        const auto ndim = read_pod<uint32_t>(is);
        std::vector<int> shape(ndim);
        for (auto& d : shape) d = static_cast<int>(read_pod<uint32_t>(is));
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw std::runtime_error("checkpoint parameter not in network: " + name);
        const ParamRef& p = *it->second;
        if (shape != p.shape) throw std::runtime_error("checkpoint shape mismatch for " + name);
        is.read(reinterpret_cast<char*>(p.value),
                static_cast<std::streamsize>(p.size() * sizeof(double)));
        if (!is) throw std::runtime_error("truncated checkpoint: " + path);
    }
}

}  // namespace intmit::nn
