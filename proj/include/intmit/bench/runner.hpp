// SPDX-License-Identifier: Apache-2.0
//
// Benchmark subcommands. Each operation reads its inputs from the config's
// output directory, writes CSV results and checkpoints there, and is a pure
// function of (config, seed) — except the timing report, which measures real
// wall-clock latencies. The CLI maps exceptions to exit codes; tests call
// the operations directly.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "intmit/bench/config.hpp"

namespace intmit::bench {

// A required input artifact (dataset or checkpoint) is absent or stale.
struct missing_artifact : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Synthesizes the paired-estimate dataset for every antenna config.
void gen_data(const ExperimentConfig& cfg, uint64_t run_seed);

// Trains the modular recovery network and the single-chain baseline per
// antenna config; writes checkpoints and the learning-curve CSV.
void train_ul_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Held-out NMSE of both trained networks per antenna config.
void eval_ul_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Trains the constellation-recovery network; writes dl.ckpt and its curve.
void train_dl_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// BLER of the learned, IRC, and MRC receivers over the SINR grid, plus
// symbol-level diagnostics of the learned receiver.
void eval_dl_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// BLER-vs-SINR curve CSV for the three receivers.
void sweep_sinr_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Retrains the modular network at every width multiplier in sf_grid on the
// same data and seeds; writes the width-vs-NMSE curve.
void sweep_sf_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Finite-difference verification of every layer and both pipelines, plus a
// corrupted-gradient negative control. Returns false when any check fails.
bool grad_check_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Per-frame inference latency at batch sizes 1/10/100 against the published
// reference numbers. Report only; excluded from determinism guarantees.
void timing_cmd(const ExperimentConfig& cfg, uint64_t run_seed);

// Dispatches one subcommand by CLI name and maps failures to exit codes:
// 0 success, 2 config error, 3 missing artifact, 4 failed gradient check,
// 1 unexpected internal error.
int run_subcommand(std::string_view name, const ExperimentConfig& cfg, uint64_t run_seed);

}  // namespace intmit::bench
