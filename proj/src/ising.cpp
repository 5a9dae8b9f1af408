#include "pidlab/ising.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "pidlab/rng.hpp"

namespace pidlab::ising {

namespace {

// Seed streams carved out of the master seed.
constexpr std::uint64_t kSiteStream = 0;
constexpr std::uint64_t kTempStreamBase = 1000;

int wrap_up(int r, int L) { return r == 0 ? L - 1 : r - 1; }
int wrap_down(int r, int L) { return r == L - 1 ? 0 : r + 1; }

double mean_spin(const Grid& g) {
    long long sum = 0;
    for (std::int8_t s : g.spins) sum += s;
    return static_cast<double>(sum) / static_cast<double>(g.spins.size());
}

double population_variance(std::span<const double> xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return var / static_cast<double>(xs.size());
}

// (U,D,L,R,C) pattern of a site, U highest bit, spin -1 -> 0.
unsigned neighborhood_pattern(const Grid& g, int r, int c) {
    const int L = g.L;
    const unsigned u = g.at(wrap_up(r, L), c) > 0;
    const unsigned d = g.at(wrap_down(r, L), c) > 0;
    const unsigned l = g.at(r, c == 0 ? L - 1 : c - 1) > 0;
    const unsigned rr = g.at(r, c == L - 1 ? 0 : c + 1) > 0;
    const unsigned cc = g.at(r, c) > 0;
    return (u << 4) | (d << 3) | (l << 2) | (rr << 1) | cc;
}

JointDistribution histogram_distribution(const SiteHistogram& h,
                                         std::span<const std::size_t> index_map,
                                         std::vector<Variable> vars) {
    const std::uint64_t total = h.total();
    if (total == 0) throw EmptyHistogram("histogram has no counts");
    std::size_t n = 1;
    for (const auto& v : vars) n *= static_cast<std::size_t>(v.alphabet.cardinality());
    std::vector<double> probs(n, 0.0);
    for (std::size_t pattern = 0; pattern < 32; ++pattern) {
        probs[index_map[pattern]] +=
            static_cast<double>(h.counts[pattern]) / static_cast<double>(total);
    }
    return JointDistribution(std::move(vars), std::move(probs));
}

PidSummary average_pid(const std::vector<PidResult>& results) {
    PidSummary s;
    for (const auto& r : results) {
        s.red += r.red;
        s.un1 += r.un[0];
        s.un2 += r.un[1];
        s.syn += r.syn;
        s.mi += r.mi_joint;
    }
    const double n = static_cast<double>(results.size());
    s.red /= n;
    s.un1 /= n;
    s.un2 /= n;
    s.syn /= n;
    s.mi /= n;
    return s;
}

}  // namespace

Grid random_grid(int L, std::mt19937_64& rng) {
    if (L < 2) throw OutOfRangeValue("grid side must be >= 2");
    Grid g;
    g.L = L;
    g.spins.resize(static_cast<std::size_t>(L) * L);
    for (auto& s : g.spins) s = (rng() & 1) ? std::int8_t{1} : std::int8_t{-1};
    return g;
}

void IsingConfig::validate() const {
    if (L < 8) throw OutOfRangeValue("config grid side must be >= 8");
    if (J <= 0.0) throw OutOfRangeValue("coupling J must be positive");
    if (temperatures.empty()) throw OutOfRangeValue("need at least one temperature");
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        if (temperatures[i] <= 0.0) throw OutOfRangeValue("temperatures must be positive");
        if (i > 0 && temperatures[i] <= temperatures[i - 1]) {
            throw OutOfRangeValue("temperatures must be strictly increasing");
        }
    }
    if (burn_in < 1 || recorded < 1) throw OutOfRangeValue("sweep counts must be >= 1");
    if (n_sites < 1 || static_cast<long long>(n_sites) > static_cast<long long>(L) * L) {
        throw TooManySites("site count must be in [1, L^2]");
    }
}

std::uint64_t SiteHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double total_energy(const Grid& g, double J) {
    const int L = g.L;
    long long bonds = 0;
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            const int s = g.at(r, c);
            bonds += s * g.at(r, c == L - 1 ? 0 : c + 1);
            bonds += s * g.at(wrap_down(r, L), c);
        }
    }
    return -J * static_cast<double>(bonds);
}

double flip_probability(int spin, int neighbor_sum, double J, double temperature) {
    if (temperature <= 0.0) throw OutOfRangeValue("sweep temperature must be positive");
    const double dE = 2.0 * J * spin * neighbor_sum;
    return 1.0 / (1.0 + std::exp(dE / temperature));
}

void glauber_sweep(Grid& g, double temperature, double J, std::mt19937_64& rng) {
    if (temperature <= 0.0) throw OutOfRangeValue("sweep temperature must be positive");
    const int L = g.L;
    const int n = L * L;

    // Neighbor sum is one of -4,-2,0,2,4; tabulate the flip probabilities.
    double flip_p[2][5];
    for (int si = 0; si < 2; ++si) {
        for (int k = 0; k < 5; ++k) {
            flip_p[si][k] = flip_probability(si == 0 ? -1 : 1, 2 * k - 4, J, temperature);
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    for (int idx : order) {
        const int r = idx / L;
        const int c = idx % L;
        const int nsum = g.at(wrap_up(r, L), c) + g.at(wrap_down(r, L), c) +
                         g.at(r, c == 0 ? L - 1 : c - 1) + g.at(r, c == L - 1 ? 0 : c + 1);
        const auto& row = flip_p[g.spins[static_cast<std::size_t>(idx)] > 0];
        if (uniform01(rng) < row[(nsum + 4) / 2]) {
            g.spins[static_cast<std::size_t>(idx)] =
                static_cast<std::int8_t>(-g.spins[static_cast<std::size_t>(idx)]);
        }
    }
}

SimResult simulate(const IsingConfig& cfg, double temperature, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    Grid g = random_grid(cfg.L, rng);

    const auto sites = pick_sites(cfg.L, cfg.n_sites, derive_seed(cfg.master_seed, kSiteStream));

    SimResult out;
    out.m_series.reserve(static_cast<std::size_t>(cfg.recorded));
    out.e_series.reserve(static_cast<std::size_t>(cfg.recorded));
    out.histograms.resize(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        out.histograms[i].row = sites[i].first;
        out.histograms[i].col = sites[i].second;
    }

    for (int b = 0; b < cfg.burn_in; ++b) glauber_sweep(g, temperature, cfg.J, rng);

    // In cross-temporal mode each neighbor pattern pairs with the center
    // one sweep later, so one extra sweep closes the last pair and the
    // counts still sum to the recorded sweep count.
    std::vector<unsigned> prev_neighbors(sites.size(), 0);
    for (int n = 1; n <= cfg.recorded; ++n) {
        glauber_sweep(g, temperature, cfg.J, rng);
        out.m_series.push_back(mean_spin(g));
        out.e_series.push_back(total_energy(g, cfg.J));
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const unsigned pattern =
                neighborhood_pattern(g, sites[i].first, sites[i].second);
            if (!cfg.cross_temporal) {
                ++out.histograms[i].counts[pattern];
            } else {
                if (n > 1) ++out.histograms[i].counts[prev_neighbors[i] | (pattern & 1u)];
                prev_neighbors[i] = pattern & ~1u;
            }
        }
    }
    if (cfg.cross_temporal) {
        glauber_sweep(g, temperature, cfg.J, rng);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const unsigned pattern =
                neighborhood_pattern(g, sites[i].first, sites[i].second);
            ++out.histograms[i].counts[prev_neighbors[i] | (pattern & 1u)];
        }
    }
    return out;
}

SummaryStats observables(std::span<const double> m_series,
                         std::span<const double> e_series, double temperature,
                         int L, bool chi_from_abs_m) {
    if (m_series.empty() || e_series.empty()) throw EmptySeries("empty observable series");

    SummaryStats s;
    std::vector<double> abs_m(m_series.size());
    for (std::size_t i = 0; i < m_series.size(); ++i) abs_m[i] = std::abs(m_series[i]);
    for (double x : abs_m) s.mean_abs_m += x;
    s.mean_abs_m /= static_cast<double>(abs_m.size());

    const double var_m = population_variance(chi_from_abs_m ? std::span<const double>(abs_m)
                                                            : m_series);
    s.chi = static_cast<double>(L) * static_cast<double>(L) * var_m / temperature;
    s.cv = population_variance(e_series) / (temperature * temperature);
    return s;
}

std::vector<std::pair<int, int>> pick_sites(int L, int n_sites, std::uint64_t seed) {
    const long long total = static_cast<long long>(L) * L;
    if (n_sites < 1 || n_sites > total) {
        throw TooManySites("cannot pick " + std::to_string(n_sites) + " of " +
                           std::to_string(total) + " sites");
    }
    std::mt19937_64 rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(total));
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first n_sites entries are a uniform draw
    // without replacement.
    for (int i = 0; i < n_sites; ++i) {
        const auto j = i + static_cast<int>(uniform_below(
                               rng, static_cast<std::uint64_t>(total - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<std::pair<int, int>> sites;
    sites.reserve(static_cast<std::size_t>(n_sites));
    for (int i = 0; i < n_sites; ++i) {
        sites.emplace_back(idx[static_cast<std::size_t>(i)] / L,
                           idx[static_cast<std::size_t>(i)] % L);
    }
    return sites;
}

PidResult task_a(const SiteHistogram& h) {
    // Marginalize U,D out of the pattern: (L,R,C) row-major.
    std::array<std::size_t, 32> map{};
    for (std::size_t p = 0; p < 32; ++p) map[p] = p & 7u;
    const JointDistribution d = histogram_distribution(
        h, map, {{"L", Alphabet(2)}, {"R", Alphabet(2)}, {"C", Alphabet(2)}});
    return pid2_full(d, {{"L", "R"}, "C"});
}

PidResult task_b(const SiteHistogram& h) {
    // Composite vertical pair (U,D) and horizontal pair (L,R); the pattern
    // bits already sit in that order, so the flat index carries over.
    std::array<std::size_t, 32> map{};
    for (std::size_t p = 0; p < 32; ++p) map[p] = p;
    const JointDistribution d = histogram_distribution(
        h, map, {{"UD", Alphabet(4)}, {"LR", Alphabet(4)}, {"C", Alphabet(2)}});
    return pid2_full(d, {{"UD", "LR"}, "C"});
}

TaskCSummary task_c(const SiteHistogram& h) {
    std::array<std::size_t, 32> map{};
    for (std::size_t p = 0; p < 32; ++p) map[p] = p;
    const JointDistribution d = histogram_distribution(
        h, map,
        {{"U", Alphabet(2)}, {"D", Alphabet(2)}, {"L", Alphabet(2)}, {"R", Alphabet(2)},
         {"C", Alphabet(2)}});
    const SystemSpec spec{{"U", "D", "L", "R"}, "C"};

    TaskCSummary s;
    for (std::size_t i = 0; i < 4; ++i) s.un[i] = unique_info(d, spec, i);
    s.tse = tse(d, spec).tse;
    return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw DegenerateSeries("series must have equal length >= 3");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateSeries("zero-variance series");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<TempRecord> run_experiment(const IsingConfig& cfg, int n_threads) {
    cfg.validate();
    if (n_threads < 1) throw OutOfRangeValue("thread count must be >= 1");

    std::vector<TempRecord> records(cfg.temperatures.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t t_idx = next.fetch_add(1);
            if (t_idx >= cfg.temperatures.size()) return;
            const double temperature = cfg.temperatures[t_idx];
            const std::uint64_t seed =
                derive_seed(cfg.master_seed, kTempStreamBase + t_idx);
            const SimResult sim = simulate(cfg, temperature, seed);
            const SummaryStats stats =
                observables(sim.m_series, sim.e_series, temperature, cfg.L);

            std::vector<PidResult> a, b;
            TaskCSummary c_sum;
            a.reserve(sim.histograms.size());
            b.reserve(sim.histograms.size());
            for (const auto& h : sim.histograms) {
                a.push_back(task_a(h));
                b.push_back(task_b(h));
                const TaskCSummary c = task_c(h);
                for (std::size_t k = 0; k < 4; ++k) c_sum.un[k] += c.un[k];
                c_sum.tse += c.tse;
            }
            const double n_hist = static_cast<double>(sim.histograms.size());
            for (std::size_t k = 0; k < 4; ++k) c_sum.un[k] /= n_hist;
            c_sum.tse /= n_hist;

            TempRecord& rec = records[t_idx];
            rec.temperature = temperature;
            rec.mean_abs_m = stats.mean_abs_m;
            rec.chi = stats.chi;
            rec.cv = stats.cv;
            rec.task_a = average_pid(a);
            rec.task_b = average_pid(b);
            rec.task_c = c_sum;
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const std::size_t count =
            std::min<std::size_t>(static_cast<std::size_t>(n_threads),
                                  cfg.temperatures.size());
        pool.reserve(count);
        for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

const std::array<const char*, 19> kCsvColumns = {
    "temperature", "mean_abs_m", "chi",    "cv",     "a_red",  "a_un_l", "a_un_r",
    "a_syn",       "a_mi",       "b_red",  "b_un_ud", "b_un_lr", "b_syn", "b_mi",
    "c_un_u",      "c_un_d",     "c_un_l", "c_un_r", "c_tse"};

void write_csv(std::ostream& os, const std::vector<TempRecord>& records) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        os << (i == 0 ? "" : ",") << kCsvColumns[i];
    }
    os << '\n';
    os << std::setprecision(6);
    for (const auto& r : records) {
        os << r.temperature << ',' << r.mean_abs_m << ',' << r.chi << ',' << r.cv << ','
           << r.task_a.red << ',' << r.task_a.un1 << ',' << r.task_a.un2 << ','
           << r.task_a.syn << ',' << r.task_a.mi << ',' << r.task_b.red << ','
           << r.task_b.un1 << ',' << r.task_b.un2 << ',' << r.task_b.syn << ','
           << r.task_b.mi << ',' << r.task_c.un[0] << ',' << r.task_c.un[1] << ','
           << r.task_c.un[2] << ',' << r.task_c.un[3] << ',' << r.task_c.tse << '\n';
    }
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return data[i];
    }
    throw UnknownColumn("no column named '" + name + "'");
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty CSV input");
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) table.columns.push_back(field);
    if (table.columns.empty()) throw ParseError("CSV header has no columns");
    table.data.resize(table.columns.size());

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::size_t col = 0;
        while (std::getline(row, field, ',')) {
            if (col >= table.columns.size()) throw ParseError("CSV row has too many fields");
            try {
                table.data[col].push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ParseError("CSV field '" + field + "' is not a number");
            }
            ++col;
        }
        if (col != table.columns.size()) throw ParseError("CSV row has too few fields");
    }
    return table;
}

}  // namespace pidlab::ising
