#ifndef PIDLAB_ISING_HPP
#define PIDLAB_ISING_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pidlab/measures.hpp"

namespace pidlab::ising {

// L x L spin grid with periodic boundaries in both axes; entries are -1/+1.
struct Grid {
    int L = 0;
    std::vector<std::int8_t> spins;  // row-major

    std::int8_t at(int r, int c) const { return spins[static_cast<std::size_t>(r) * L + c]; }
};

Grid random_grid(int L, std::mt19937_64& rng);

struct IsingConfig {
    int L = 128;
    double J = 1.0;
    std::vector<double> temperatures;  // strictly increasing
    int burn_in = 20000;
    int recorded = 80000;
    int n_sites = 50;
    std::uint64_t master_seed = 0;
    bool cross_temporal = false;  // neighbors at sweep t, center at sweep t+1

    void validate() const;
};

// Counts of the 2^5 joint spin patterns of one sample site's neighborhood.
// Bit order U,D,L,R,C with U the highest bit; spin -1 -> 0, +1 -> 1.
// Counts always sum to the recorded sweep count.
struct SiteHistogram {
    std::array<std::uint64_t, 32> counts{};
    int row = 0;
    int col = 0;

    std::uint64_t total() const;
};

// Averaged two-source atoms of one task at one temperature.
struct PidSummary {
    double red = 0, un1 = 0, un2 = 0, syn = 0, mi = 0;
};

// Averaged per-neighbor unique information (order U,D,L,R) and total
// synergistic effect of the four-source task.
struct TaskCSummary {
    std::array<double, 4> un{};
    double tse = 0;
};

struct TempRecord {
    double temperature = 0;
    double mean_abs_m = 0;
    double chi = 0;
    double cv = 0;
    PidSummary task_a;  // sources L,R -> target C
    PidSummary task_b;  // composite sources (U,D),(L,R) -> target C
    TaskCSummary task_c;
};

// Hamiltonian with every unordered nearest-neighbor bond counted once
// (each site contributes its right and down bonds).
double total_energy(const Grid& g, double J);

// 1 / (1 + exp(dE / T)) with dE = 2 J spin (sum of the four neighbor spins).
double flip_probability(int spin, int neighbor_sum, double J, double temperature);

// One full update attempt over all sites in a fresh uniformly-random order,
// flipping each with flip_probability.
void glauber_sweep(Grid& g, double temperature, double J, std::mt19937_64& rng);

struct SimResult {
    std::vector<double> m_series;  // mean spin per recorded sweep
    std::vector<double> e_series;  // total energy per recorded sweep
    std::vector<SiteHistogram> histograms;
};

// Random initialization, burn-in sweeps, then recorded sweeps accumulating
// magnetization, energy, and the neighborhood histograms at the fixed
// sample sites. Snapshots are not retained.
SimResult simulate(const IsingConfig& cfg, double temperature, std::uint64_t seed);

struct SummaryStats {
    double mean_abs_m = 0;
    double chi = 0;  // L^2 Var(M) / T, population variance of the signed M
    double cv = 0;   // Var(E) / T^2
};

SummaryStats observables(std::span<const double> m_series,
                         std::span<const double> e_series, double temperature,
                         int L, bool chi_from_abs_m = false);

// n_sites distinct sites sampled without replacement; deterministic in seed.
// With periodic boundaries every site is interior, so the draw covers the
// whole grid.
std::vector<std::pair<int, int>> pick_sites(int L, int n_sites, std::uint64_t seed);

// Left/right neighbors as sources, center as target.
PidResult task_a(const SiteHistogram& h);
// Vertical and horizontal neighbor pairs as two composite sources.
PidResult task_b(const SiteHistogram& h);
// Each neighbor its own source: general unique information plus total
// synergistic effect.
TaskCSummary task_c(const SiteHistogram& h);

double pearson(std::span<const double> x, std::span<const double> y);

// One record per temperature, in order. Temperatures are independent work
// units; with n_threads > 1 they run concurrently, each with its own rng
// and grid, and the output is bit-identical to the sequential run.
std::vector<TempRecord> run_experiment(const IsingConfig& cfg, int n_threads = 1);

extern const std::array<const char*, 19> kCsvColumns;

void write_csv(std::ostream& os, const std::vector<TempRecord>& records);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[column][row]

    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);

}  // namespace pidlab::ising

#endif  // PIDLAB_ISING_HPP
