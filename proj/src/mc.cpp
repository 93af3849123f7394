#include "selfnorm/mc.hpp"

#include "selfnorm/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

namespace selfnorm {

namespace {

constexpr double kExactTol = 1e-12;

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

// Draws T(n) with per-law fast paths. One instance per chunk, so the
// distribution objects' internal state never crosses chunk boundaries.
class ChunkSampler {
public:
    ChunkSampler(const DistributionModel& dist, std::int64_t n, Rng& rng)
        : dist_(dist), n_(n), rng_(rng), sqrt_n_(std::sqrt(static_cast<double>(n))),
          uniform_(-dist.half_width(), dist.half_width())
    {
    }

    double next()
    {
        switch (dist_.kind()) {
        case LawKind::Rademacher: return next_rademacher();
        case LawKind::StandardGaussian: return accumulate([this] { return normal_(rng_); });
        case LawKind::UniformSymmetric: return accumulate([this] { return uniform_(rng_); });
        default: return accumulate([this] { return dist_.sample(rng_); });
        }
    }

private:
    template <class Draw>
    double accumulate(Draw&& draw)
    {
        double sum = 0.0, sum_sq = 0.0;
        for (std::int64_t i = 0; i < n_; ++i) {
            const double x = draw();
            sum += x;
            sum_sq += x * x;
        }
        return sum_sq == 0.0 ? 0.0 : sqrt_n_ * sum / sum_sq;
    }

    // Signs come 64 at a time from the raw generator output.
    double next_rademacher()
    {
        std::int64_t positives = 0;
        std::int64_t left = n_;
        while (left > 0) {
            std::uint64_t bits = rng_();
            if (left < 64) bits &= (std::uint64_t{1} << left) - 1;
            positives += std::popcount(bits);
            left -= 64;
        }
        const double sum = static_cast<double>(2 * positives - n_);
        return sqrt_n_ * sum / static_cast<double>(n_);
    }

    const DistributionModel& dist_;
    std::int64_t n_;
    Rng& rng_;
    double sqrt_n_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

Referee referee_from(const TailEstimate& e) { return {e.point, e.ci_lo, e.ci_hi, false, e.hits, e.trials}; }

bool contains(std::span<const double> grid, double B)
{
    return std::find(grid.begin(), grid.end(), B) != grid.end();
}

}  // namespace

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence)
{
    if (trials == 0) throw std::invalid_argument("Clopper-Pearson needs at least one trial");
    if (hits > trials) throw std::invalid_argument("hits cannot exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
    const double alpha = 1.0 - confidence;
    const double k = static_cast<double>(hits);
    const double N = static_cast<double>(trials);
    const double lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, N - k + 1.0, alpha / 2.0);
    const double hi = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, N - k, 1.0 - alpha / 2.0);
    return {lo, hi};
}

double self_normalized_t(std::span<const double> xs)
{
    double sum = 0.0, sum_sq = 0.0;
    for (const double x : xs) {
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0.0) return 0.0;
    return std::sqrt(static_cast<double>(xs.size())) * sum / sum_sq;
}

double simulate_t(const DistributionModel& dist, std::int64_t n, Rng& rng)
{
    if (n < 1) throw std::invalid_argument("n must be positive");
    ChunkSampler sampler(dist, n, rng);
    return sampler.next();
}

Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk_index)
{
    std::seed_seq seq{lo32(seed), hi32(seed), lo32(chunk_index), hi32(chunk_index), 0x5e1fu};
    return Rng(seq);
}

unsigned worker_count(unsigned requested)
{
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("SELFNORM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return std::max(1u, n);
}

std::vector<TailEstimate> empirical_tail(const DistributionModel& dist, const MCConfig& cfg,
                                         std::span<const double> B_grid)
{
    if (cfg.n < 1) throw std::invalid_argument("n must be positive");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (cfg.chunk_size < 1) throw std::invalid_argument("chunk_size must be at least 1");
    if (!dist.can_sample()) throw std::invalid_argument(dist.name() + " cannot be sampled");

    std::vector<double> sorted(B_grid.begin(), B_grid.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();

    const std::uint64_t chunks = (cfg.trials + cfg.chunk_size - 1) / cfg.chunk_size;
    // exceed[c][k]: trials of chunk c whose T exceeds exactly the k smallest grid values.
    std::vector<std::vector<std::uint64_t>> exceed(chunks, std::vector<std::uint64_t>(m + 1, 0));
    std::atomic<std::uint64_t> next_chunk{0};

    const auto worker = [&] {
        for (std::uint64_t c = next_chunk++; c < chunks; c = next_chunk++) {
            Rng rng = chunk_rng(cfg.seed, c);
            ChunkSampler sampler(dist, cfg.n, rng);
            const std::uint64_t begin = c * cfg.chunk_size;
            const std::uint64_t count = std::min(cfg.chunk_size, cfg.trials - begin);
            auto& row = exceed[c];
            for (std::uint64_t i = 0; i < count; ++i) {
                const double t = sampler.next();
                row[std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin()]++;
            }
        }
    };
    const unsigned threads = std::min<std::uint64_t>(worker_count(cfg.threads), chunks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    std::vector<std::uint64_t> total(m + 1, 0);
    for (const auto& row : exceed)
        for (std::size_t k = 0; k <= m; ++k) total[k] += row[k];
    // hits for sorted[j] = trials whose T exceeds more than j grid values.
    std::vector<std::uint64_t> hits_sorted(m, 0);
    std::uint64_t running = 0;
    for (std::size_t j = m; j-- > 0;) {
        running += total[j + 1];
        hits_sorted[j] = running;
    }

    std::vector<TailEstimate> out;
    out.reserve(m);
    for (const double B : B_grid) {
        const auto j = std::lower_bound(sorted.begin(), sorted.end(), B) - sorted.begin();
        const std::uint64_t hits = hits_sorted[j];
        const auto ci = clopper_pearson(hits, cfg.trials, cfg.confidence);
        const double point = static_cast<double>(hits) / static_cast<double>(cfg.trials);
        out.push_back({B, cfg.n, hits, cfg.trials, point, std::min(ci.lo, point), std::max(ci.hi, point),
                       cfg.confidence});
    }
    return out;
}

double rademacher_exact_tail(std::int64_t n, double B)
{
    if (n < 1 || n > 60) throw std::invalid_argument("exact Rademacher tail supports 1 <= n <= 60");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double prob = 0.0;
    std::uint64_t binom = 1;  // C(n, k)
    for (std::int64_t k = 0; k <= n; ++k) {
        const double t = sqrt_n * static_cast<double>(2 * k - n) / static_cast<double>(n);
        if (t > B) prob += std::ldexp(static_cast<double>(binom), -static_cast<int>(n));
        binom = binom * static_cast<std::uint64_t>(n - k) / static_cast<std::uint64_t>(k + 1);
    }
    return prob;
}

std::string_view status_name(CellStatus s)
{
    switch (s) {
    case CellStatus::Pass: return "PASS";
    case CellStatus::Fail: return "FAIL";
    case CellStatus::Skip: return "SKIP";
    case CellStatus::Report: return "REPORT";
    }
    return "?";
}

std::size_t VerificationReport::fail_count() const
{
    return std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.status == CellStatus::Fail; });
}

VerificationReport verify_bounds(const DistributionModel& dist, std::span<const std::int64_t> n_grid,
                                 std::span<const double> B_grid, const MCConfig& cfg,
                                 std::span<const BoundCurve> curves)
{
    if (n_grid.empty() || B_grid.empty()) throw GridMismatch("verification grids must be nonempty");

    std::map<std::int64_t, std::vector<Referee>> referees;
    const auto referees_for = [&](std::int64_t n) -> const std::vector<Referee>& {
        auto it = referees.find(n);
        if (it != referees.end()) return it->second;
        std::vector<Referee> refs;
        if (dist.kind() == LawKind::Rademacher && n <= kExactRademacherMaxN) {
            for (const double B : B_grid) {
                const double q = rademacher_exact_tail(n, B);
                refs.push_back({q, q, q, true, 0, 0});
            }
        } else {
            MCConfig c = cfg;
            c.n = n;
            for (const auto& e : empirical_tail(dist, c, B_grid)) refs.push_back(referee_from(e));
        }
        return referees.emplace(n, std::move(refs)).first->second;
    };
    const auto B_index = [&](double B) {
        const auto it = std::find(B_grid.begin(), B_grid.end(), B);
        if (it == B_grid.end()) throw GridMismatch("curve point B = " + std::to_string(B) + " is not on the B grid");
        return static_cast<std::size_t>(it - B_grid.begin());
    };

    VerificationReport report{dist.name(), {}};
    for (const auto& curve : curves) {
        const bool is_range = std::holds_alternative<NRange>(curve.n);
        std::vector<std::int64_t> ns;
        if (is_range) {
            const auto r = std::get<NRange>(curve.n);
            if (curve.family == BoundFamily::LowerCLT) {
                ns.push_back(*std::max_element(n_grid.begin(), n_grid.end()));
            } else {
                for (const auto n : n_grid)
                    if (n >= r.lo && n <= r.hi) ns.push_back(n);
            }
        } else {
            const auto n = std::get<std::int64_t>(curve.n);
            if (std::find(n_grid.begin(), n_grid.end(), n) == n_grid.end() &&
                curve.family != BoundFamily::LowerQ1)
                throw GridMismatch("curve n = " + std::to_string(n) + " is not on the n grid");
            ns.push_back(n);
        }

        for (const auto n : ns) {
            for (const auto& pt : curve.points) {
                const std::size_t j = B_index(pt.B);
                const Referee ref = referees_for(n)[j];
                VerificationCell cell{n, pt.B, curve.family, is_range, pt, ref, CellStatus::Pass, 0.0, 0.0};
                cell.tightness = ref.point > 0.0 ? pt.value / ref.point : kInf;
                switch (curve.family) {
                case BoundFamily::ExpLevel:
                case BoundFamily::PowerLevel: {
                    const double slack = ref.exact ? kExactTol * std::max(ref.lo, 1e-300) : 0.0;
                    cell.margin = pt.value - ref.lo;
                    cell.status = pt.value + slack >= ref.lo ? CellStatus::Pass : CellStatus::Fail;
                    break;
                }
                case BoundFamily::LowerQ1: {
                    const double slack = ref.exact ? kExactTol * std::max(ref.hi, 1e-300) : 0.0;
                    cell.margin = ref.hi - pt.value;
                    cell.status = pt.value <= ref.hi + slack ? CellStatus::Pass : CellStatus::Fail;
                    break;
                }
                case BoundFamily::LowerCLT:
                    cell.margin = ref.hi - pt.value;
                    cell.status = CellStatus::Report;
                    break;
                }
                report.cells.push_back(cell);
            }
        }
    }
    (void)contains;
    return report;
}

}  // namespace selfnorm
