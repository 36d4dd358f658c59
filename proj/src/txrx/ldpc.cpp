// SPDX-License-Identifier: Apache-2.0

#include "intmit/txrx/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "intmit/rng.hpp"

namespace intmit::txrx {

namespace {

constexpr int kVarDegree = 3;
constexpr int kRowDegree = 6;
constexpr double kMinSumScale = 0.75;

// Tanner graph for one construction attempt; may be rank deficient.
struct Graph {
    std::vector<std::vector<int>> check_cols;
    std::vector<std::vector<int>> var_checks;
};

Graph grow_graph(int n_code, int n_checks, Rng& rng) {
    Graph g;
    g.check_cols.resize(n_checks);
    g.var_checks.resize(n_code);
    std::vector<int> degree(n_checks, 0);
    std::vector<uint8_t> conflict(n_checks), adjacent(n_checks);

    for (int v = 0; v < n_code; ++v) {
        for (int e = 0; e < kVarDegree; ++e) {
            std::fill(conflict.begin(), conflict.end(), 0);
            std::fill(adjacent.begin(), adjacent.end(), 0);
            for (int c0 : g.var_checks[v]) {
                adjacent[c0] = 1;
                // any check already reachable through a shared variable would
                // close a 4-cycle
                for (int v2 : g.check_cols[c0])
                    if (v2 != v)
                        for (int c1 : g.var_checks[v2]) conflict[c1] = 1;
            }

            auto pick = [&](bool allow_conflict) {
                int best_deg = kRowDegree;
                std::vector<int> best;
                for (int c = 0; c < n_checks; ++c) {
                    if (adjacent[c] || degree[c] >= kRowDegree) continue;
                    if (!allow_conflict && conflict[c]) continue;
                    if (degree[c] < best_deg) {
                        best_deg = degree[c];
                        best.assign(1, c);
                    } else if (degree[c] == best_deg) {
                        best.push_back(c);
                    }
                }
                if (best.empty()) return -1;
                return best[rng.uniform_int(static_cast<int>(best.size()))];
            };

            int c = pick(false);
            if (c < 0) c = pick(true);
            require(c >= 0, "ldpc construction ran out of check capacity");
            g.check_cols[c].push_back(v);
            g.var_checks[v].push_back(c);
            ++degree[c];
        }
    }
    for (auto& row : g.check_cols) std::sort(row.begin(), row.end());
    return g;
}

// GF(2) elimination of the dense parity matrix; returns false on rank
// deficiency, otherwise fills the systematic generator and info positions.
bool solve_generator(const Graph& g, int n_code, int n_checks,
                     std::vector<std::vector<uint8_t>>& gen, std::vector<int>& info_pos) {
    std::vector<std::vector<uint8_t>> h(n_checks, std::vector<uint8_t>(n_code, 0));
    for (int c = 0; c < n_checks; ++c)
        for (int v : g.check_cols[c]) h[c][v] = 1;

    std::vector<int> pivot_col(n_checks, -1);
    std::vector<uint8_t> is_pivot(n_code, 0);
    int rank = 0;
    for (int col = 0; col < n_code && rank < n_checks; ++col) {
        int row = -1;
        for (int r = rank; r < n_checks; ++r)
            if (h[r][col]) {
                row = r;
                break;
            }
        if (row < 0) continue;
        std::swap(h[rank], h[row]);
        for (int r = 0; r < n_checks; ++r)
            if (r != rank && h[r][col])
                for (int j = 0; j < n_code; ++j) h[r][j] ^= h[rank][j];
        pivot_col[rank] = col;
        is_pivot[col] = 1;
        ++rank;
    }
    if (rank < n_checks) return false;

    info_pos.clear();
    for (int j = 0; j < n_code; ++j)
        if (!is_pivot[j]) info_pos.push_back(j);

    const int k = n_code - n_checks;
    gen.assign(k, std::vector<uint8_t>(n_code, 0));
    for (int i = 0; i < k; ++i) {
        gen[i][info_pos[i]] = 1;
        // parity positions follow from the reduced rows: c[pivot_r] = sum of
        // info bits with coefficient h[r][info]
        for (int r = 0; r < n_checks; ++r)
            if (h[r][info_pos[i]]) gen[i][pivot_col[r]] = 1;
    }
    return true;
}

}  // namespace

LdpcCode build_ldpc(int n_code, uint64_t seed) {
    require(n_code >= 8 && n_code % 2 == 0, "n_code must be even and >= 8");
    require((n_code * kVarDegree) % kRowDegree == 0, "degree sequence must balance");
    const int n_checks = n_code / 2;

    for (int attempt = 0; attempt < 64; ++attempt) {
        Rng rng(derive_seed(seed, "ldpc.attempt", attempt));
        Graph g = grow_graph(n_code, n_checks, rng);
        LdpcCode code;
        if (!solve_generator(g, n_code, n_checks, code.gen, code.info_pos)) continue;
        code.n_code = n_code;
        code.k_info = n_code - n_checks;
        code.seed = seed;
        code.check_cols = std::move(g.check_cols);
        code.var_checks = std::move(g.var_checks);
        return code;
    }
    throw std::runtime_error("ldpc construction failed to reach full rank");
}

std::vector<uint8_t> ldpc_encode(const std::vector<uint8_t>& info_bits, const LdpcCode& code) {
    require(static_cast<int>(info_bits.size()) == code.k_info, "info length mismatch");
    std::vector<uint8_t> c(code.n_code, 0);
    for (int i = 0; i < code.k_info; ++i)
        if (info_bits[i])
            for (int j = 0; j < code.n_code; ++j) c[j] ^= code.gen[i][j];
    return c;
}

bool ldpc_parity_ok(const std::vector<uint8_t>& codeword, const LdpcCode& code) {
    require(static_cast<int>(codeword.size()) == code.n_code, "codeword length mismatch");
    for (const auto& row : code.check_cols) {
        int parity = 0;
        for (int v : row) parity ^= codeword[v];
        if (parity) return false;
    }
    return true;
}

std::vector<uint8_t> extract_info(const std::vector<uint8_t>& codeword, const LdpcCode& code) {
    require(static_cast<int>(codeword.size()) == code.n_code, "codeword length mismatch");
    std::vector<uint8_t> info(code.k_info);
    for (int i = 0; i < code.k_info; ++i) info[i] = codeword[code.info_pos[i]];
    return info;
}

DecodeResult bp_decode(const std::vector<double>& llrs, const LdpcCode& code, int max_iter) {
    require(static_cast<int>(llrs.size()) == code.n_code, "llr length mismatch");
    require(max_iter >= 1, "max_iter must be >= 1");
    const int n_checks = static_cast<int>(code.check_cols.size());

    // messages indexed by (check, position within the check's column list)
    std::vector<std::vector<double>> v2c(n_checks), c2v(n_checks);
    for (int c = 0; c < n_checks; ++c) {
        v2c[c].assign(code.check_cols[c].size(), 0.0);
        c2v[c].assign(code.check_cols[c].size(), 0.0);
    }
    // edge lookup from the variable side: (check, slot)
    std::vector<std::vector<std::pair<int, int>>> var_edges(code.n_code);
    for (int c = 0; c < n_checks; ++c)
        for (size_t s = 0; s < code.check_cols[c].size(); ++s)
            var_edges[code.check_cols[c][s]].push_back({c, static_cast<int>(s)});

    for (int c = 0; c < n_checks; ++c)
        for (size_t s = 0; s < code.check_cols[c].size(); ++s)
            v2c[c][s] = llrs[code.check_cols[c][s]];

    DecodeResult result;
    result.codeword.assign(code.n_code, 0);
    std::vector<double> posterior(code.n_code);

    for (int iter = 1; iter <= max_iter; ++iter) {
        result.iters = iter;
        for (int c = 0; c < n_checks; ++c) {
            const auto& cols = code.check_cols[c];
            // two-pass min/submin with sign aggregation
            double min1 = 1e300, min2 = 1e300;
            int min_slot = -1;
            int sign_all = 1;
            for (size_t s = 0; s < cols.size(); ++s) {
                const double m = v2c[c][s];
                const double a = std::abs(m);
                if (m < 0.0) sign_all = -sign_all;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    min_slot = static_cast<int>(s);
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (size_t s = 0; s < cols.size(); ++s) {
                const double m = v2c[c][s];
                const int sign_rest = (m < 0.0 ? -sign_all : sign_all);
                const double mag = (static_cast<int>(s) == min_slot ? min2 : min1);
                c2v[c][s] = kMinSumScale * sign_rest * mag;
            }
        }

        for (int v = 0; v < code.n_code; ++v) {
            double total = llrs[v];
            for (const auto& [c, s] : var_edges[v]) total += c2v[c][s];
            posterior[v] = total;
            result.codeword[v] = total < 0.0 ? 1 : 0;
            for (const auto& [c, s] : var_edges[v]) v2c[c][s] = total - c2v[c][s];
        }

        if (ldpc_parity_ok(result.codeword, code)) {
            bool informative = true;
            for (double p : posterior)
                if (p == 0.0) informative = false;
            result.converged = informative;
            break;
        }
    }
    result.info = extract_info(result.codeword, code);
    return result;
}

void save_code(const std::string& path, const LdpcCode& code) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open code file for writing: " + path);
    os << code.n_code << ' ' << code.k_info << ' ' << code.seed << '\n';
    for (const auto& row : code.check_cols) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
        os << '\n';
    }
    if (!os) throw std::runtime_error("short write to code file: " + path);
}

LdpcCode load_code(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open code file: " + path);
    LdpcCode code;
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("empty code file: " + path);
    {
        std::istringstream hs(header);
        if (!(hs >> code.n_code >> code.k_info >> code.seed))
            throw std::runtime_error("bad code file header: " + path);
    }
    const int n_checks = code.n_code - code.k_info;
    Graph g;
    g.check_cols.resize(n_checks);
    g.var_checks.resize(code.n_code);
    std::string line;
    for (int c = 0; c < n_checks; ++c) {
        if (!std::getline(is, line)) throw std::runtime_error("truncated code file: " + path);
        std::istringstream ls(line);
        int v;
        while (ls >> v) {
            require(v >= 0 && v < code.n_code, "column index out of range in code file");
            g.check_cols[c].push_back(v);
            g.var_checks[v].push_back(c);
        }
    }
    if (!solve_generator(g, code.n_code, n_checks, code.gen, code.info_pos))
        throw std::runtime_error("code file parity matrix is rank deficient");
    code.check_cols = std::move(g.check_cols);
    code.var_checks = std::move(g.var_checks);
    return code;
}

Interleaver Interleaver::make(int n, uint64_t seed) {
    require(n >= 1, "interleaver length must be positive");
    Interleaver il;
    il.perm.resize(n);
    for (int i = 0; i < n; ++i) il.perm[i] = i;
    Rng rng(derive_seed(seed, "interleaver", n));
    for (int i = n - 1; i > 0; --i) {
        int j = rng.uniform_int(i + 1);
        std::swap(il.perm[i], il.perm[j]);
    }
    return il;
}

double bler(const std::vector<BlockResult>& frames) {
    require(!frames.empty(), "bler over empty frame list");
    int errors = 0;
    for (const auto& f : frames) {
        require(f.decoded.size() == f.truth.size(), "decoded/truth length mismatch");
        errors += !f.converged || f.decoded != f.truth;
    }
    return static_cast<double>(errors) / static_cast<double>(frames.size());
}

}  // namespace intmit::txrx
