#include "qrm/splitting.hpp"

#include "qrm/eigen.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace qrm {

namespace {

template <unsigned Digits>
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

struct Level {
    int sector;
    int index;  // position inside its parity sector
    double value;
};

// Sturm-sequence eigenvalue counting for one parity sector.
//
// Entries are generated in the working precision: rounding lambda * sqrt(n + 1)
// to double perturbs each sector differently at the 1e-17 level, which is
// larger than the splittings this code exists to resolve.
template <class R>
class SturmChain {
public:
    SturmChain(const ModelParams& params, const Truncation& trunc, int parity, const R& pivmin)
        : pivmin_(pivmin) {
        const int size = trunc.n_max() + 1;
        const R half_omega = R(params.omega()) / 2;
        const R lambda_sq = R(params.g()) * R(params.g()) * R(params.ratio()) / 4;
        diag_.reserve(static_cast<std::size_t>(size));
        off_sq_.reserve(static_cast<std::size_t>(size - 1));
        for (int n = 0; n < size; ++n) {
            const bool up = (n + parity) % 2 == 1;
            diag_.push_back(R(n) + (up ? half_omega : R(-half_omega)));
            if (n + 1 < size) off_sq_.push_back(lambda_sq * R(n + 1));
        }
    }

    // Number of eigenvalues strictly below x.
    std::size_t count_below(const R& x) const {
        std::size_t count = 0;
        R q = diag_[0] - x;
        for (std::size_t i = 0;; ++i) {
            if (abs(q) < pivmin_) q = -pivmin_;
            if (q < 0) ++count;
            if (i + 1 == diag_.size()) break;
            q = diag_[i + 1] - x - off_sq_[i] / q;
        }
        return count;
    }

private:
    std::vector<R> diag_;
    std::vector<R> off_sq_;
    R pivmin_;
};

template <class R>
R bisect_eigenvalue(const SturmChain<R>& chain, int index, double guess, double scale, int digits) {
    const auto k = static_cast<std::size_t>(index);
    double delta = 1e-7 * scale;
    R lo(guess - delta);
    R hi(guess + delta);
    for (int expand = 0; expand < 64 && (chain.count_below(lo) > k || chain.count_below(hi) <= k);
         ++expand) {
        delta *= 16.0;
        lo = R(guess - delta);
        hi = R(guess + delta);
    }

    const R width = R(scale) * pow(R(10), -(digits - 6));
    for (int it = 0; it < 8 * digits && hi - lo > width; ++it) {
        R mid = (lo + hi) / 2;
        if (chain.count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

struct Refined {
    double gap;
    double ground;
    bool resolved;
};

template <unsigned Digits>
Refined refine(const ModelParams& params, const Truncation& trunc, const std::vector<Level>& levels,
               double scale) {
    using R = Real<Digits>;
    constexpr int digits = static_cast<int>(Digits);
    const R pivmin = R(scale) * pow(R(10), -2 * digits);
    const SturmChain<R> chains[2] = {SturmChain<R>(params, trunc, 0, pivmin),
                                     SturmChain<R>(params, trunc, 1, pivmin)};

    std::vector<R> values;
    values.reserve(levels.size());
    for (const Level& level : levels)
        values.push_back(bisect_eigenvalue(chains[level.sector], level.index, level.value, scale, digits));
    std::sort(values.begin(), values.end());

    const R gap = values[1] - values[0];
    const R resolution = R(scale) * pow(R(10), -(digits - 12));
    return {static_cast<double>(gap), static_cast<double>(values[0]), gap > resolution};
}

}  // namespace

GroundGap ground_gap(const ModelParams& params, const Truncation& trunc) {
    const TridiagonalBlock blocks[2] = {parity_block(params, trunc, 0), parity_block(params, trunc, 1)};

    std::vector<Level> levels;
    double scale = 1.0;
    for (int sector = 0; sector < 2; ++sector) {
        const Eigen::VectorXd ev = tridiagonal_eigenvalues(blocks[sector]);
        for (int i = 0; i < std::min<int>(2, static_cast<int>(ev.size())); ++i)
            levels.push_back({sector, i, ev[i]});
        const auto& b = blocks[sector];
        for (std::size_t i = 0; i < b.diagonal.size(); ++i) {
            double radius = std::abs(b.diagonal[i]);
            if (i > 0) radius += std::abs(b.off_diagonal[i - 1]);
            if (i < b.off_diagonal.size()) radius += std::abs(b.off_diagonal[i]);
            scale = std::max(scale, radius);
        }
    }
    std::sort(levels.begin(), levels.end(),
              [](const Level& a, const Level& b) { return a.value < b.value; });

    GroundGap out;
    out.n_max_used = trunc.n_max();
    out.converged = false;
    out.ground_energy = levels[0].value;
    out.gap = levels[1].value - levels[0].value;

    const double threshold = 1e-6 * scale;
    if (out.gap > threshold) return out;

    // Only levels inside the unresolved window need the slow arithmetic.
    std::vector<Level> close;
    for (const Level& level : levels)
        if (level.value - levels[0].value <= 2.0 * threshold) close.push_back(level);

    Refined r = refine<50>(params, trunc, close, scale);
    out.digits = 50;
    if (!r.resolved) {
        r = refine<120>(params, trunc, close, scale);
        out.digits = 120;
    }
    if (!r.resolved) {
        r = refine<300>(params, trunc, close, scale);
        out.digits = 300;
    }
    out.gap = r.gap;
    out.ground_energy = r.ground;
    out.resolved = r.resolved;
    return out;
}

GroundGap resolve_ground_gap(const ModelParams& params, const GapOptions& options) {
    if (options.n_start < 1) throw std::invalid_argument("resolve_ground_gap: n_start must be >= 1");
    if (options.n_cap < options.n_start)
        throw std::invalid_argument("resolve_ground_gap: n_cap must be >= n_start");
    if (!(options.rel_tol > 0.0)) throw std::invalid_argument("resolve_ground_gap: rel_tol must be > 0");

    int n = options.n_start;
    GroundGap current = ground_gap(params, Truncation(n));
    while (n < options.n_cap) {
        const int next_n = std::min(2 * n, options.n_cap);
        GroundGap next = ground_gap(params, Truncation(next_n));
        const bool stable = std::abs(next.gap - current.gap) <= options.rel_tol * std::abs(next.gap);
        if (stable && current.resolved == next.resolved) {
            current.converged = true;
            return current;
        }
        n = next_n;
        current = next;
    }
    current.converged = false;
    return current;
}

}  // namespace qrm
