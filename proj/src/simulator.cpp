#include "mcvd/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "mcvd/errors.hpp"
#include "mcvd/parallel.hpp"

namespace mcvd {

using Engine = boost::random::mt19937_64;

void SimConfig::validate() const {
    if (n_particles < 1) throw ConfigError("sim: n_particles must be >= 1");
    if (n_frames < 1) throw ConfigError("sim: n_frames must be >= 1");
    if (warmup_frames < 0) throw ConfigError("sim: warmup_frames must be >= 0");
    if (sampling == Sampling::EulerMaruyama && !(dt > 0.0)) throw ConfigError("sim: dt must be positive for Euler-Maruyama");
    if (threads < 1) throw ConfigError("sim: threads must be >= 1");
    if (chunk < 1) throw ConfigError("sim: chunk must be >= 1");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 applied to the seed, then to the stream index offset by it.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) + 0x632be59bd9b4e019ULL * (index + 1));
}

namespace {

std::size_t chunk_count(long total, long chunk) {
    return static_cast<std::size_t>((total + chunk - 1) / chunk);
}

long chunk_size(std::size_t c, long total, long chunk) {
    const long begin = static_cast<long>(c) * chunk;
    return std::min(chunk, total - begin);
}

}  // namespace

ArrivalEstimate simulate_arrival(const ChannelParams& channel, Vec3 source, double t, const SimConfig& cfg) {
    channel.validate();
    cfg.validate();
    if (!(t > 0.0)) throw DomainError("simulate_arrival: t must be positive");

    const std::size_t chunks = chunk_count(cfg.n_particles, cfg.chunk);
    std::vector<long> inside(chunks, 0);
    const double d2 = channel.receiver_radius * channel.receiver_radius;

    parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        Engine rng(stream_seed(cfg.seed, c));
        boost::random::normal_distribution<double> normal;
        const long n = chunk_size(c, cfg.n_particles, cfg.chunk);
        long hits = 0;
        if (cfg.sampling == Sampling::ExactGaussian) {
            const double sigma = std::sqrt(2.0 * channel.diffusion_coefficient * t);
            const Vec3 mean = source + t * channel.drift - channel.receiver_center;
            for (long i = 0; i < n; ++i) {
                const Vec3 p = mean + sigma * Vec3{normal(rng), normal(rng), normal(rng)};
                hits += p.dot(p) <= d2 ? 1 : 0;
            }
        } else {
            const long steps = std::max(1L, static_cast<long>(std::ceil(t / cfg.dt - 1e-9)));
            const double h = t / static_cast<double>(steps);
            const double sigma = std::sqrt(2.0 * channel.diffusion_coefficient * h);
            const Vec3 step_drift = h * channel.drift;
            for (long i = 0; i < n; ++i) {
                Vec3 p = source - channel.receiver_center;
                for (long k = 0; k < steps; ++k) {
                    p = p + step_drift + sigma * Vec3{normal(rng), normal(rng), normal(rng)};
                }
                hits += p.dot(p) <= d2 ? 1 : 0;
            }
        }
        inside[c] = hits;
    });

    ArrivalEstimate out;
    out.trials = cfg.n_particles;
    out.inside = std::accumulate(inside.begin(), inside.end(), 0L);
    out.probability = static_cast<double>(out.inside) / static_cast<double>(out.trials);
    out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(out.trials));
    return out;
}

std::vector<double> EmpiricalReport::bers() const {
    std::vector<double> out;
    for (const auto& t : tx) out.push_back(t.ber);
    return out;
}

namespace {

struct LeakTerm {
    std::size_t tx = 0;
    int lag = 0;  // frames back; 0 is the current frame
    double prob = 0.0;
    long molecules = 0;
};

std::vector<std::vector<LeakTerm>> leak_terms(const Schedule& schedule, const Allocation& allocation,
                                              const Network& network, int memory, LeakModel model) {
    const std::size_t r = network.size();
    auto count = [&](std::size_t j) { return std::lround(allocation.molecules[j]); };
    std::vector<std::vector<LeakTerm>> out(r);
    for (std::size_t s = 0; s < r; ++s) {
        auto& terms = out[s];
        terms.push_back({s, 0, network.arrival(s, schedule.slot_durations[s]), count(s)});
        for (std::size_t j = 0; j < s; ++j) {
            double p;
            if (model == LeakModel::Modeled) {
                p = intra_frame_leak_prob(j, s, schedule, network).value;
            } else {
                double elapsed = 0.0;
                for (std::size_t q = j; q <= s; ++q) elapsed += schedule.slot_durations[q];
                p = network.arrival(j, elapsed);
            }
            terms.push_back({j, 0, p, count(j)});
        }
        for (int u = 1; u <= memory; ++u) {
            for (std::size_t j = 0; j < r; ++j) {
                const double p = model == LeakModel::Modeled
                                     ? iui_leak_prob(u, j, s, schedule, network).value
                                     : network.arrival(j, slot_offset(u, j, s, schedule));
                terms.push_back({j, u, p, count(j)});
            }
        }
    }
    return out;
}

struct Histograms {
    // [tx][bit] -> counts indexed by molecule number
    std::vector<std::array<std::vector<long>, 2>> h;

    explicit Histograms(std::size_t r) : h(r) {}

    void add(std::size_t tx, int bit, long value) {
        auto& v = h[tx][static_cast<std::size_t>(bit)];
        if (static_cast<std::size_t>(value) >= v.size()) v.resize(static_cast<std::size_t>(value) + 1, 0);
        ++v[static_cast<std::size_t>(value)];
    }

    void merge(const Histograms& o) {
        for (std::size_t tx = 0; tx < h.size(); ++tx) {
            for (std::size_t b = 0; b < 2; ++b) {
                auto& dst = h[tx][b];
                const auto& src = o.h[tx][b];
                if (src.size() > dst.size()) dst.resize(src.size(), 0);
                for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
            }
        }
    }
};

struct Moments {
    long n = 0;
    double mean = 0.0, var = 0.0, mean_se = 0.0, var_se = 0.0;
};

Moments moments(const std::vector<long>& hist) {
    Moments m;
    double sum = 0.0;
    for (std::size_t c = 0; c < hist.size(); ++c) {
        m.n += hist[c];
        sum += static_cast<double>(hist[c]) * static_cast<double>(c);
    }
    if (m.n == 0) return m;
    const double n = static_cast<double>(m.n);
    m.mean = sum / n;
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t c = 0; c < hist.size(); ++c) {
        const double d = static_cast<double>(c) - m.mean;
        m2 += static_cast<double>(hist[c]) * d * d;
        m4 += static_cast<double>(hist[c]) * d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    m.var = m.n > 1 ? m2 * n / (n - 1.0) : 0.0;
    m.mean_se = std::sqrt(m2 / n);
    m.var_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return m;
}

// Errors with "decide 1 iff count ≥ τ".
long errors_at(const TxReport& t, double tau) {
    long e = 0;
    for (std::size_t c = 0; c < t.histogram1.size(); ++c) {
        if (static_cast<double>(c) < tau) e += t.histogram1[c];
    }
    for (std::size_t c = 0; c < t.histogram0.size(); ++c) {
        if (static_cast<double>(c) >= tau) e += t.histogram0[c];
    }
    return e;
}

EmpiricalReport run_frames(const Schedule& schedule, const Allocation& allocation, const Network& network,
                           int memory, const SimConfig& cfg) {
    network.validate();
    schedule.validate();
    allocation.validate();
    cfg.validate();
    const std::size_t r = network.size();
    if (schedule.size() != r || allocation.size() != r) {
        throw DomainError("simulate_frames: schedule, allocation and layout sizes differ");
    }
    if (memory < 0) throw DomainError("simulate_frames: memory length must be >= 0");

    const auto terms = leak_terms(schedule, allocation, network, memory, cfg.leak);
    const std::size_t chunks = chunk_count(cfg.n_frames, cfg.chunk);
    std::vector<Histograms> partial(chunks, Histograms(r));
    const std::size_t history = static_cast<std::size_t>(memory) + 1;

    parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        Engine rng(stream_seed(cfg.seed, c));
        boost::random::bernoulli_distribution<double> coin(0.5);
        Histograms& hist = partial[c];
        // bits[(frame) % history][tx]
        std::vector<std::vector<int>> bits(history, std::vector<int>(r, 0));
        const long recorded = chunk_size(c, cfg.n_frames, cfg.chunk);
        const long skip = memory + cfg.warmup_frames;
        for (long f = 0; f < skip + recorded; ++f) {
            auto& now = bits[static_cast<std::size_t>(f) % history];
            for (auto& b : now) b = coin(rng) ? 1 : 0;
            for (std::size_t s = 0; s < r; ++s) {
                long count = 0;
                for (const auto& term : terms[s]) {
                    const long frame = f - term.lag;
                    if (frame < 0) continue;
                    if (bits[static_cast<std::size_t>(frame) % history][term.tx] == 0) continue;
                    if (term.prob <= 0.0 || term.molecules == 0) continue;
                    if (term.prob >= 1.0) {
                        count += term.molecules;
                        continue;
                    }
                    boost::random::binomial_distribution<long, double> draw(term.molecules, term.prob);
                    count += draw(rng);
                }
                if (f >= skip) hist.add(s, now[s], count);
            }
        }
    });

    Histograms total(r);
    for (const auto& p : partial) total.merge(p);

    EmpiricalReport report;
    report.frames = cfg.n_frames;
    for (std::size_t s = 0; s < r; ++s) {
        TxReport t;
        t.histogram0 = std::move(total.h[s][0]);
        t.histogram1 = std::move(total.h[s][1]);
        const Moments m0 = moments(t.histogram0);
        const Moments m1 = moments(t.histogram1);
        t.bits0 = m0.n;
        t.bits1 = m1.n;
        t.mu0 = m0.mean;
        t.mu1 = m1.mean;
        t.var0 = m0.var;
        t.var1 = m1.var;
        t.mu0_se = m0.mean_se;
        t.mu1_se = m1.mean_se;
        t.var0_se = m0.var_se;
        t.var1_se = m1.var_se;
        report.tx.push_back(std::move(t));
    }
    return report;
}

void score(TxReport& t, double tau) {
    t.tau = tau;
    t.errors = errors_at(t, tau);
    const double n = static_cast<double>(t.bits0 + t.bits1);
    t.ber = n > 0 ? static_cast<double>(t.errors) / n : 0.0;
    t.ber_se = n > 0 ? std::sqrt(t.ber * (1.0 - t.ber) / n) : 0.0;
}

}  // namespace

EmpiricalReport simulate_frames(const Schedule& schedule, const Allocation& allocation, const Network& network,
                                int memory, std::span<const double> thresholds, const SimConfig& cfg) {
    if (thresholds.size() != network.size()) throw DomainError("simulate_frames: one threshold per transmitter required");
    EmpiricalReport report = run_frames(schedule, allocation, network, memory, cfg);
    for (std::size_t s = 0; s < report.tx.size(); ++s) score(report.tx[s], thresholds[s]);
    return report;
}

EmpiricalReport simulate_frames(const Schedule& schedule, const Allocation& allocation, const Network& network,
                                int memory, const SimConfig& cfg) {
    EmpiricalReport report = run_frames(schedule, allocation, network, memory, cfg);
    for (auto& t : report.tx) {
        const std::size_t top = std::max(t.histogram0.size(), t.histogram1.size());
        double best_tau = 0.0;
        long best = std::numeric_limits<long>::max();
        for (std::size_t k = 0; k <= top; ++k) {
            const long e = errors_at(t, static_cast<double>(k));
            if (e < best) {
                best = e;
                best_tau = static_cast<double>(k);
            }
        }
        score(t, best_tau);
    }
    return report;
}

}  // namespace mcvd
