// SPDX-License-Identifier: Apache-2.0

#include "intmit/dl/link.hpp"

#include <algorithm>
#include <cmath>

#include "intmit/rng.hpp"
#include "intmit/txrx/combine.hpp"
#include "intmit/txrx/qam.hpp"

namespace intmit::dl {

namespace {

// Receive view of the scenario: the UE's antennas form the array, the
// serving stream is single-layer.
phy::CellScenario rx_view(const phy::CellScenario& sc) {
    phy::CellScenario view = sc;
    view.bs_ant = sc.ue_ant;
    view.ue_ant = 1;
    view.validate();
    return view;
}

}  // namespace

void DlLinkConfig::validate() const {
    scenario.validate();
    const int bits = txrx::qam_bits_per_symbol(qam_order);
    require(n_code >= 8 && n_code % 2 == 0, "code length must be even and >= 8");
    require(n_code % bits == 0, "code length must fill whole symbols");
    require(n_code / bits <= scenario.n_re, "symbol sequence must fit the tone grid");
}

int DlLinkConfig::n_symbols() const { return n_code / txrx::qam_bits_per_symbol(qam_order); }

DlEnvironment make_environment(const DlLinkConfig& cfg) {
    cfg.validate();
    const phy::CellScenario view = rx_view(cfg.scenario);

    DlEnvironment env;
    env.n_rx = view.bs_ant;
    env.k = view.n_re;
    env.order = cfg.qam_order;
    env.n_sym = cfg.n_symbols();
    env.p_int = view.interference_power();
    env.noise_var = view.noise_var();

    const uint64_t master = derive_seed(cfg.scenario.seed, "dl.env", 0);
    Rng rng(master);
    env.ints = draw_interferers(rng, view);
    env.int_data.reserve(env.ints.size());
    for (size_t s = 0; s < env.ints.size(); ++s)
        env.int_data.push_back(phy::draw_pilots(rng, env.n_sym));
    env.pilots = phy::draw_pilots(rng, env.k);
    env.code = txrx::build_ldpc(cfg.n_code, derive_seed(master, "dl.code", 0));
    env.il = txrx::Interleaver::make(cfg.n_code, derive_seed(master, "dl.interleaver", 0));
    return env;
}

double data_amplitude(const DlEnvironment& env, double sinr_db) {
    return std::sqrt(db_to_linear(sinr_db) * (env.p_int + env.noise_var));
}

DlSample synth_sample(const DlEnvironment& env, double sinr_db, uint64_t frame_seed) {
    const int n_rx = env.n_rx;
    const int k = env.k;
    const int n_sym = env.n_sym;
    Rng rng(frame_seed);

    const phy::ChannelRealization ch = phy::draw_channel(rng, n_rx, 1, k);
    const auto y_int = phy::synth_received_pilot(ch, env.pilots, env.ints, env.noise_var, rng);
    const auto y_cln = phy::synth_received_pilot(ch, env.pilots, {}, env.noise_var, rng);

    DlSample s;
    s.est.h_true = ch;
    s.est.h_int_est = phy::zf_estimate(y_int, env.pilots, n_rx, 1, k);
    s.est.h_clean_est = phy::zf_estimate(y_cln, env.pilots, n_rx, 1, k);
    s.est.sinr_db = sinr_db;
    s.est.seed = frame_seed;

    s.h_smooth = phy::delay_truncate(s.est.h_int_est, n_rx, 1, k, std::max(1, k / 8));
    std::vector<std::vector<cplx>> residuals(k, std::vector<cplx>(n_rx));
    for (int t = 0; t < k; ++t)
        for (int a = 0; a < n_rx; ++a) {
            const size_t idx = static_cast<size_t>(a) * k + t;
            residuals[t][a] = s.est.h_int_est[idx] - s.h_smooth[idx];
        }
    s.r_uu = txrx::sample_covariance(residuals, n_rx);

    const int bits_per = txrx::qam_bits_per_symbol(env.order);
    std::vector<uint8_t> info(env.code.k_info);
    for (auto& b : info) b = static_cast<uint8_t>(rng.uniform_int(2));
    s.coded.info_bits = info;
    s.coded.codeword = txrx::ldpc_encode(info, env.code);
    const std::vector<uint8_t> tx_bits = env.il.apply(s.coded.codeword);
    s.coded.c_t = txrx::qam_modulate(tx_bits, env.order);
    s.coded.qam_order = env.order;
    s.coded.tx_indices.resize(n_sym);
    for (int i = 0; i < n_sym; ++i) {
        int idx = 0;
        for (int j = 0; j < bits_per; ++j)
            idx = (idx << 1) | tx_bits[static_cast<size_t>(i) * bits_per + j];
        s.coded.tx_indices[i] = idx;
    }

    s.alpha = data_amplitude(env, sinr_db);
    s.coded.c_i.assign(static_cast<size_t>(n_rx) * n_sym, cplx(0.0));
    for (int a = 0; a < n_rx; ++a)
        for (int t = 0; t < n_sym; ++t) {
            cplx v = s.alpha * ch.at(a, 0, t) * s.coded.c_t[t];
            for (size_t src = 0; src < env.ints.size(); ++src)
                v += env.ints[src].power_scale * env.ints[src].h_int[static_cast<size_t>(a) * k + t] *
                     env.int_data[src][t];
            v += rng.cgaussian(env.noise_var);
            s.coded.c_i[static_cast<size_t>(a) * n_sym + t] = v;
        }

    s.c_comb.resize(n_sym);
    std::vector<cplx> ycol(n_rx), hcol(n_rx);
    for (int t = 0; t < n_sym; ++t) {
        for (int a = 0; a < n_rx; ++a) {
            ycol[a] = s.coded.c_i[static_cast<size_t>(a) * n_sym + t];
            hcol[a] = s.h_smooth[static_cast<size_t>(a) * k + t];
        }
        s.c_comb[t] = txrx::mrc_combine(ycol, hcol) / s.alpha;
    }
    return s;
}

std::vector<cplx> synth_clean_estimate(const DlEnvironment& env, uint64_t seed) {
    Rng rng(seed);
    const phy::ChannelRealization ch = phy::draw_channel(rng, env.n_rx, 1, env.k);
    const auto y = phy::synth_received_pilot(ch, env.pilots, {}, env.noise_var, rng);
    return phy::zf_estimate(y, env.pilots, env.n_rx, 1, env.k);
}

std::vector<DlSample> make_dl_dataset(const DlEnvironment& env, int n_frames, double sinr_lo_db,
                                      double sinr_hi_db, uint64_t seed) {
    require(n_frames >= 1, "dataset needs at least one frame");
    require(sinr_lo_db <= sinr_hi_db, "SINR range is inverted");
    const uint64_t master = derive_seed(seed, "dl.dataset", 0);
    Rng sinr_rng(derive_seed(master, "dl.sinr", 0));
    std::vector<DlSample> out;
    out.reserve(n_frames);
    for (int f = 0; f < n_frames; ++f) {
        const double sinr = sinr_lo_db == sinr_hi_db
                                ? sinr_lo_db
                                : sinr_rng.uniform(sinr_lo_db, sinr_hi_db);
        out.push_back(synth_sample(env, sinr, derive_seed(master, "dl.frame", f)));
    }
    return out;
}

namespace {

// Conditions the pilot-residual sample covariance for inversion: rescales
// for the share of interference-plus-noise energy the delay-window
// smoothing absorbed into the channel estimate (the residual keeps only
// 1 - l_keep/k of it), and adds diagonal loading proportional to the
// finite-sample estimation error of a covariance averaged over k tones.
std::vector<cplx> conditioned_covariance(const DlSample& s, const DlEnvironment& env) {
    const int m = env.n_rx;
    const int l_keep = std::max(1, env.k / 8);
    const double kept = 1.0 - static_cast<double>(l_keep) / env.k;
    const double scale = kept > 0.0 ? 1.0 / kept : 1.0;
    std::vector<cplx> r = s.r_uu;
    double tr = 0.0;
    for (int i = 0; i < m; ++i) tr += r[static_cast<size_t>(i) * m + i].real();
    const double load = scale * (tr / m) / std::sqrt(static_cast<double>(env.k));
    for (auto& v : r) v *= scale;
    for (int i = 0; i < m; ++i) r[static_cast<size_t>(i) * m + i] += load;
    return r;
}

txrx::BlockResult decode_combined(const DlSample& s, const DlEnvironment& env, bool use_irc) {
    const int n_rx = env.n_rx;
    const int n_sym = env.n_sym;
    const double a2 = s.alpha * s.alpha;
    std::vector<double> llrs;
    llrs.reserve(static_cast<size_t>(env.code.n_code));
    std::vector<cplx> ycol(n_rx), hcol(n_rx);
    const std::vector<cplx> r_cond =
        use_irc ? conditioned_covariance(s, env) : std::vector<cplx>{};
    for (int t = 0; t < n_sym; ++t) {
        double h2 = 0.0;
        for (int a = 0; a < n_rx; ++a) {
            ycol[a] = s.coded.c_i[static_cast<size_t>(a) * n_sym + t];
            hcol[a] = s.h_smooth[static_cast<size_t>(a) * env.k + t];
            h2 += std::norm(hcol[a]);
        }
        cplx z;
        double var;
        if (use_irc) {
            z = txrx::irc_combine(ycol, hcol, r_cond) / s.alpha;
            var = 1.0 / (a2 * txrx::irc_post_gain(hcol, r_cond));
        } else {
            z = txrx::mrc_combine(ycol, hcol) / s.alpha;
            var = (env.p_int + env.noise_var) / (a2 * h2);
        }
        const auto sym_llrs = txrx::qam_soft_demod({z}, env.order, var);
        llrs.insert(llrs.end(), sym_llrs.begin(), sym_llrs.end());
    }
    return decode_llrs(llrs, s, env);
}

}  // namespace

txrx::BlockResult decode_mrc(const DlSample& s, const DlEnvironment& env) {
    return decode_combined(s, env, false);
}

txrx::BlockResult decode_irc(const DlSample& s, const DlEnvironment& env) {
    return decode_combined(s, env, true);
}

txrx::BlockResult decode_llrs(const std::vector<double>& llrs, const DlSample& s,
                              const DlEnvironment& env) {
    const auto deint = env.il.invert(llrs);
    const auto res = txrx::bp_decode(deint, env.code);
    txrx::BlockResult block;
    block.decoded = res.info;
    block.truth = s.coded.info_bits;
    block.converged = res.converged;
    return block;
}

}  // namespace intmit::dl
