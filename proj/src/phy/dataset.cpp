// SPDX-License-Identifier: Apache-2.0

#include "intmit/phy/dataset.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace intmit::phy {

namespace {

constexpr char kMagic[4] = {'I', 'M', 'D', 'S'};
constexpr uint32_t kFormatVersion = 1;

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

void write_grid(std::ofstream& os, const std::vector<cplx>& g) {
    for (const auto& v : g) {
        write_pod(os, v.real());
        write_pod(os, v.imag());
    }
}

void read_grid(std::ifstream& is, std::vector<cplx>& g, size_t count) {
    g.resize(count);
    for (auto& v : g) {
        double re = read_pod<double>(is);
        double im = read_pod<double>(is);
        v = cplx(re, im);
    }
}

}  // namespace

std::vector<EstimatePair> make_dataset(const CellScenario& sc, int n_frames,
                                       const DatasetOptions& opt, uint64_t seed) {
    sc.validate();
    require(n_frames >= 1, "n_frames must be >= 1");
    require(opt.staleness_rho > 0.0 && opt.staleness_rho <= 1.0,
            "staleness_rho must lie in (0, 1]");

    const uint64_t master = derive_seed(sc.seed, "phy.dataset", seed);
    InterferenceSet ints;
    if (opt.interference_on) {
        Rng rng_int(derive_seed(master, "phy.interferers", 0));
        ints = draw_interferers(rng_int, sc);
    }
    const double p_int = opt.interference_on ? sc.interference_power() : 0.0;
    const double noise_var = sc.noise_var();
    const double sinr_db = -linear_to_db(p_int + noise_var);

    std::vector<EstimatePair> out(n_frames);
    for (int f = 0; f < n_frames; ++f) {
        const uint64_t frame_seed = derive_seed(master, "phy.frame", f);
        Rng rng(frame_seed);
        EstimatePair& pair = out[f];
        pair.seed = frame_seed;
        pair.sinr_db = sinr_db;
        pair.h_true = draw_channel(rng, sc.bs_ant, sc.ue_ant, sc.n_re);
        const auto x = draw_pilots(rng, sc.n_re);

        const auto y_int = synth_received_pilot(pair.h_true, x, ints, noise_var, rng);
        pair.h_int_est = zf_estimate(y_int, x, sc.bs_ant, sc.ue_ant, sc.n_re);

        const ChannelRealization clean_ch = opt.staleness_rho < 1.0
                                                ? perturb_channel(rng, pair.h_true, opt.staleness_rho)
                                                : pair.h_true;
        const auto y_clean = synth_received_pilot(clean_ch, x, {}, noise_var, rng);
        pair.h_clean_est = zf_estimate(y_clean, x, sc.bs_ant, sc.ue_ant, sc.n_re);
    }
    return out;
}

uint64_t scenario_hash(const CellScenario& sc) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "cells=%d;ues=%d;m=%d;n=%d;k=%d;sir=%.6f;snr=%.6f;reuse=%d;seed=%llu",
                  sc.n_cells, sc.ues_per_cell, sc.bs_ant, sc.ue_ant, sc.n_re, sc.carrier_sir_db,
                  sc.snr_db, sc.reuse_factor, static_cast<unsigned long long>(sc.seed));
    return fnv1a64(buf);
}

void save_dataset(const std::string& path, const CellScenario& sc,
                  const std::vector<EstimatePair>& frames) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open dataset file for writing: " + path);
    os.write(kMagic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, static_cast<uint32_t>(sc.bs_ant));
    write_pod(os, static_cast<uint32_t>(sc.ue_ant));
    write_pod(os, static_cast<uint32_t>(sc.n_re));
    write_pod(os, scenario_hash(sc));
    write_pod(os, static_cast<uint64_t>(frames.size()));
    const size_t grid = static_cast<size_t>(sc.bs_ant) * sc.ue_ant * sc.n_re;
    for (const auto& pair : frames) {
        require(pair.h_true.h.size() == grid && pair.h_clean_est.size() == grid &&
                    pair.h_int_est.size() == grid,
                "frame shape does not match scenario");
        write_pod(os, pair.seed);
        write_pod(os, pair.sinr_db);
        write_grid(os, pair.h_true.h);
        write_grid(os, pair.h_clean_est);
        write_grid(os, pair.h_int_est);
    }
    if (!os) throw std::runtime_error("short write to dataset file: " + path);
}

std::vector<EstimatePair> load_dataset(const std::string& path, CellScenario* sc_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open dataset file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a dataset file: " + path);
    const auto version = read_pod<uint32_t>(is);
    if (version != kFormatVersion) throw std::runtime_error("unsupported dataset format version");
    const int m = static_cast<int>(read_pod<uint32_t>(is));
    const int n = static_cast<int>(read_pod<uint32_t>(is));
    const int k = static_cast<int>(read_pod<uint32_t>(is));
    (void)read_pod<uint64_t>(is);  // scenario hash, informational
    const auto count = read_pod<uint64_t>(is);
    if (sc_out) {
        sc_out->bs_ant = m;
        sc_out->ue_ant = n;
        sc_out->n_re = k;
    }
    const size_t grid = static_cast<size_t>(m) * n * k;
    std::vector<EstimatePair> frames(count);
    for (auto& pair : frames) {
        pair.seed = read_pod<uint64_t>(is);
        pair.sinr_db = read_pod<double>(is);
        pair.h_true.n_rx = m;
        pair.h_true.n_tx = n;
        pair.h_true.n_re = k;
        pair.h_true.n_taps = 0;
        read_grid(is, pair.h_true.h, grid);
        read_grid(is, pair.h_clean_est, grid);
        read_grid(is, pair.h_int_est, grid);
        if (!is) throw std::runtime_error("truncated dataset file: " + path);
    }
    return frames;
}

}  // namespace intmit::phy
