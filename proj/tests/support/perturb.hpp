#ifndef PIDLAB_TESTS_PERTURB_HPP
#define PIDLAB_TESTS_PERTURB_HPP

// Rectangle-swap moves on a three-variable tensor (S1, S2, T) stored
// row-major with T fastest. Adding +eps on cells (a,c,t),(b,d,t) and -eps on
// (a,d,t),(b,c,t) preserves both the (S1,T) and (S2,T) marginals, i.e. it is
// the elementary move that stays inside the polytope of couplings with fixed
// pairwise marginals. A move is rejected when it would drive a cell negative.

#include <cstddef>
#include <random>
#include <vector>

#include "pidlab/rng.hpp"

namespace perturb {

struct Tensor3 {
    int n1 = 0, n2 = 0, nt = 0;
    std::vector<double> p;  // index (s1 * n2 + s2) * nt + t

    double& at(int s1, int s2, int t) {
        return p[(static_cast<std::size_t>(s1) * n2 + s2) * nt + t];
    }
};

inline bool try_rectangle_swap(Tensor3& q, std::mt19937_64& rng, double eps) {
    if (q.n1 < 2 || q.n2 < 2) return false;
    const int t = static_cast<int>(pidlab::uniform_below(rng, q.nt));
    const int a = static_cast<int>(pidlab::uniform_below(rng, q.n1));
    int b = static_cast<int>(pidlab::uniform_below(rng, q.n1 - 1));
    if (b >= a) ++b;
    const int c = static_cast<int>(pidlab::uniform_below(rng, q.n2));
    int d = static_cast<int>(pidlab::uniform_below(rng, q.n2 - 1));
    if (d >= c) ++d;

    if (q.at(a, d, t) < eps || q.at(b, c, t) < eps) return false;
    q.at(a, c, t) += eps;
    q.at(b, d, t) += eps;
    q.at(a, d, t) -= eps;
    q.at(b, c, t) -= eps;
    return true;
}

inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log2(x);
    }
    return h;
}

}  // namespace perturb

#endif  // PIDLAB_TESTS_PERTURB_HPP
