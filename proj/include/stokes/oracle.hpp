#pragma once

// Numeric cross-check: sample a region, measure log|exp(phi)| against the distance to the
// boundary and decide empirically whether exp(phi) has polynomial growth there.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/growth.hpp"
#include "stokes/region.hpp"

namespace stokes {

struct OracleConfig {
  unsigned precision_bits = 128;
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  int strata = 20;           // log2 octaves sampled below the bounding radius
  int fit_from_stratum = 10;  // envelope fit uses |z| <= R 2^-fit_from_stratum
  double residual_threshold = 1.0;
  double delta_m_threshold = 0.5;
  double growth_ratio = 2.0;
  double growth_floor = 50.0;
};

/// key = value lines, '#' starts a comment. Unknown keys are errors.
inline OracleConfig parse_oracle_config(std::string_view text) {
  OracleConfig cfg;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    std::size_t line_start = pos;
    pos = eol + 1;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key = value", line_start);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      std::size_t used = 0;
      auto whole = [&](std::size_t n) {
        if (n != value.size()) throw std::invalid_argument(key);
      };
      if (key == "precision_bits") {
        cfg.precision_bits = static_cast<unsigned>(std::stoul(value, &used));
      } else if (key == "samples") {
        cfg.samples = std::stoull(value, &used);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value, &used);
      } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(std::stoul(value, &used));
      } else if (key == "strata") {
        cfg.strata = std::stoi(value, &used);
      } else if (key == "fit_from_stratum") {
        cfg.fit_from_stratum = std::stoi(value, &used);
      } else if (key == "residual_threshold") {
        cfg.residual_threshold = std::stod(value, &used);
      } else if (key == "delta_m_threshold") {
        cfg.delta_m_threshold = std::stod(value, &used);
      } else if (key == "growth_ratio") {
        cfg.growth_ratio = std::stod(value, &used);
      } else if (key == "growth_floor") {
        cfg.growth_floor = std::stod(value, &used);
      } else {
        throw ParseError("config: unknown key '" + key + "'", line_start);
      }
      whole(used);
    } catch (const std::invalid_argument&) {
      throw ParseError("config: bad value for '" + key + "'", line_start + eq + 1);
    } catch (const std::out_of_range&) {
      throw ParseError("config: value out of range for '" + key + "'", line_start + eq + 1);
    }
  }
  if (cfg.strata < 2 || cfg.fit_from_stratum < 0 || cfg.fit_from_stratum >= cfg.strata)
    throw DomainError("config: need 0 <= fit_from_stratum < strata and strata >= 2");
  return cfg;
}

namespace detail {

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Runs body(i) for i in [0, n) on up to `threads` workers; each index is written by one worker.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// `count` members of the region, log-uniform in modulus over 20 octaves below the bounding
/// radius, uniform in angle over the region's window at that modulus.
inline std::vector<cplx> sample_region(const RegionSpec& region, std::size_t count, std::uint64_t seed,
                                       int octaves = 20) {
  if (count < 1) throw DomainError("sample_region: count must be at least 1");
  const double R = bounding_radius(region);
  const double log_hi = std::log(R), log_lo = log_hi - octaves * std::log(2.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<cplx> out;
  out.reserve(count);
  std::size_t misses = 0;
  while (out.size() < count) {
    double r = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    auto [center, half] = angular_window(region, r);
    double theta = center + half * (2 * unit(rng) - 1);
    cplx z = std::polar(r, theta);
    if (contains(region, z)) {
      out.push_back(z);
      misses = 0;
    } else if (++misses >= 1000000) {
      throw DomainError("sample_region: region looks empty (10^6 consecutive rejections)");
    }
  }
  return out;
}

struct GrowthSample {
  cplx z;
  double log_abs = 0;   // log|f(z)|
  double distance = 0;  // dist(z, boundary)
};

struct GrowthFit {
  double fitted_M = 0;
  double fitted_logC = 0;
  double max_residual = 0;
  std::size_t sample_count = 0;
  bool reliable = false;  // max_residual under the threshold
};

/// Least-squares line through the upper envelope of max(log|f|, 0) against log(1/dist): the top
/// tenth of each of 16 equal-width distance bins holding at least 10 samples.
inline GrowthFit growth_fit(const std::vector<GrowthSample>& samples, double residual_threshold = 1.0) {
  if (samples.size() < 32) throw DomainError("growth_fit: need at least 32 samples");
  constexpr int kBins = 16;
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (!(s.distance > 0)) throw DomainError("growth_fit: non-positive boundary distance");
    xs.push_back(-std::log(s.distance));
    ys.push_back(std::max(s.log_abs, 0.0));
  }
  auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  double lo = *mn, hi = *mx;
  if (hi - lo < 1e-9) throw DomainError("growth_fit: degenerate distance spread");
  std::vector<std::vector<std::size_t>> bins(kBins);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    int b = std::min(kBins - 1, static_cast<int>((xs[i] - lo) / (hi - lo) * kBins));
    bins[static_cast<std::size_t>(b)].push_back(i);
  }
  // Sparse bins have no meaningful top decile; skip them unless that leaves fewer than two.
  constexpr std::size_t kMinBin = 10;
  std::size_t populated = 0;
  for (const auto& bin : bins) populated += bin.size() >= kMinBin;
  const std::size_t min_bin = populated >= 2 ? kMinBin : 1;
  std::vector<std::size_t> chosen;
  for (auto& bin : bins) {
    if (bin.size() < min_bin) continue;
    std::sort(bin.begin(), bin.end(), [&](std::size_t a, std::size_t b) {
      return ys[a] != ys[b] ? ys[a] > ys[b] : a < b;
    });
    std::size_t keep = std::max<std::size_t>(1, bin.size() / 10);
    chosen.insert(chosen.end(), bin.begin(), bin.begin() + static_cast<long>(keep));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(chosen.size());
  for (auto i : chosen) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double var = sxx - sx * sx / m;
  GrowthFit fit;
  fit.sample_count = samples.size();
  if (chosen.size() < 2 || var < 1e-12) {
    fit.fitted_M = 0;
    fit.fitted_logC = sy / m;
  } else {
    fit.fitted_M = (sxy - sx * sy / m) / var;
    fit.fitted_logC = (sy - fit.fitted_M * sx) / m;
  }
  for (auto i : chosen)
    fit.max_residual = std::max(fit.max_residual, std::fabs(ys[i] - fit.fitted_M * xs[i] - fit.fitted_logC));
  fit.reliable = fit.max_residual < residual_threshold;
  return fit;
}

struct OracleReport {
  Verdict verdict = Verdict::Boundary;
  GrowthFit fit_a, fit_b;               // the two independent sample sets
  std::vector<double> stratum_growth;   // max log|exp phi| / (1 + log(1/r)) per radius stratum
  std::size_t samples = 0;
  std::string reason;
};

/// Empirical temperedness of exp(phi) on the region, from `budget` samples split into two seeded
/// halves. NotTempered when max Re phi over the deepest populated strata grows faster than any
/// multiple of log(1/r); Tempered when both halves give a small-residual envelope fit with close
/// exponents; Boundary otherwise.
inline OracleReport oracle_verdict(const NumericExpPolynomial& phi, const RegionSpec& region, std::size_t budget,
                                   std::uint64_t seed, const OracleConfig& cfg = {}) {
  if (budget < 1000) throw DomainError("oracle_verdict: budget must be at least 1000");
  OracleReport rep;
  const double R = bounding_radius(region);
  std::vector<std::vector<GrowthSample>> sets(2);
  for (int s = 0; s < 2; ++s) {
    std::size_t n = budget / 2 + (s == 0 ? budget % 2 : 0);
    auto pts = sample_region(region, n, detail::split_seed(seed, static_cast<std::uint64_t>(s)), cfg.strata);
    auto& out = sets[static_cast<std::size_t>(s)];
    out.resize(pts.size());
    detail::parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
      out[i] = GrowthSample{pts[i], phi.log_abs_exp(pts[i]), boundary_distance(region, pts[i])};
    });
  }
  rep.samples = sets[0].size() + sets[1].size();

  // Stratum k holds |z| in (R 2^-(k+1), R 2^-k].
  const int K = cfg.strata;
  std::vector<double> peak(static_cast<std::size_t>(K), -std::numeric_limits<double>::infinity());
  for (const auto& set : sets)
    for (const auto& s : set) {
      int k = static_cast<int>(std::floor(std::log2(R / std::abs(s.z))));
      if (k < 0 || k >= K) continue;
      peak[static_cast<std::size_t>(k)] = std::max(peak[static_cast<std::size_t>(k)], s.log_abs);
    }
  std::vector<double> g;
  for (int k = 0; k < K; ++k) {
    double x = std::max(0.0, std::log(std::pow(2.0, k + 1) / R));
    double v = peak[static_cast<std::size_t>(k)];
    rep.stratum_growth.push_back(std::isfinite(v) ? v / (1 + x) : 0.0);
    if (std::isfinite(v) && v > 0) g.push_back(v / (1 + x));
  }
  if (g.size() >= 3) {
    double g0 = g[g.size() - 3], g1 = g[g.size() - 2], g2 = g[g.size() - 1];
    if (g0 < g1 && g1 < g2 && g2 >= cfg.growth_ratio * g0 && g2 > cfg.growth_floor) {
      rep.verdict = Verdict::NotTempered;
      std::ostringstream os;
      os << "log|exp phi| / log(1/r) rises " << g0 << " -> " << g2 << " over the deepest strata";
      rep.reason = os.str();
      return rep;
    }
  }

  const double deep = R * std::pow(2.0, -cfg.fit_from_stratum);
  std::vector<GrowthFit*> fits{&rep.fit_a, &rep.fit_b};
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<GrowthSample> near;
    for (const auto& x : sets[s])
      if (std::abs(x.z) <= deep) near.push_back(x);
    if (near.size() < 32) near = sets[s];
    try {
      *fits[s] = growth_fit(near, cfg.residual_threshold);
    } catch (const DomainError& e) {
      rep.reason = e.what();
      return rep;
    }
  }
  double dm = std::fabs(rep.fit_a.fitted_M - rep.fit_b.fitted_M);
  if (rep.fit_a.reliable && rep.fit_b.reliable && dm < cfg.delta_m_threshold) {
    rep.verdict = Verdict::Tempered;
    rep.reason = "stable envelope fit";
  } else {
    std::ostringstream os;
    os << "envelope fit unstable (residuals " << rep.fit_a.max_residual << ", " << rep.fit_b.max_residual
       << "; |dM| = " << dm << ")";
    rep.reason = os.str();
  }
  return rep;
}

inline OracleReport oracle_verdict(const ExpPolynomial& phi, const RegionSpec& region, std::size_t budget,
                                   std::uint64_t seed, const OracleConfig& cfg = {}) {
  return oracle_verdict(NumericExpPolynomial(phi), region, budget, seed, cfg);
}

}  // namespace stokes
