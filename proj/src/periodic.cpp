#include "cubelam/periodic.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace cubelam {

std::string pattern_to_string(SignPattern eps, int n) {
  std::string s(static_cast<std::size_t>(n), '+');
  for (int i = 0; i < n; ++i) {
    if (sign_of(eps, i) < 0) s[i] = '-';
  }
  return s;
}

SignPattern pattern_from_string(const std::string& s) {
  if (s.empty() || s.size() > 16) throw InputError("bad sign pattern \"" + s + "\"");
  SignPattern eps = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '-') {
      eps |= SignPattern{1} << i;
    } else if (s[i] != '+') {
      throw InputError("bad sign pattern \"" + s + "\"");
    }
  }
  return eps;
}

Rational sawtooth(const Rational& t) {
  const Rational r = t - floor(t);
  return r <= Rational(1, 2) ? r : Rational(1 - r);
}

double sawtooth(double t) {
  const double r = t - std::floor(t);
  return r <= 0.5 ? r : 1.0 - r;
}

std::optional<int> sawtooth_slope(const Rational& t) {
  const Rational r = t - floor(t);
  if (r == 0 || r == Rational(1, 2)) return std::nullopt;
  return r < Rational(1, 2) ? 1 : -1;
}

std::optional<int> sawtooth_slope(double t) {
  const double r = t - std::floor(t);
  if (r == 0.0 || r == 0.5) return std::nullopt;
  return r < 0.5 ? 1 : -1;
}

namespace {

// k x + l y = rhs, one translate of a breakpoint family.
struct Line {
  Rational k, l, rhs;

  bool vertical() const { return l == 0; }
  Rational y_at(const Rational& x) const { return (rhs - k * x) / l; }
};

std::vector<Line> breakpoint_lines(const PeriodicDeformation<Rational>& d) {
  std::vector<Line> lines;
  for (const auto& m : d.modes) {
    const std::int64_t k = m.frequency[0];
    const std::int64_t l = m.frequency[1];
    const Rational lo = m.phase + std::min<std::int64_t>(0, k) + std::min<std::int64_t>(0, l);
    const Rational hi = m.phase + std::max<std::int64_t>(0, k) + std::max<std::int64_t>(0, l);
    // x.n + c = j/2 for every half-integer j/2 in [lo, hi]
    Rational j = floor(2 * lo);
    if (j < 2 * lo) j += 1;
    for (; j <= 2 * hi; j += 1) {
      lines.push_back({Rational(k), Rational(l), j / 2 - m.phase});
    }
  }
  return lines;
}

void add_if_inside(std::vector<Rational>& xs, const Rational& x) {
  if (x > 0 && x < 1) xs.push_back(x);
}

SignPattern classify_point(const PeriodicDeformation<Rational>& d, const Rational& x,
                           const Rational& y) {
  SignPattern eps = 0;
  for (int i = 0; i < d.size(); ++i) {
    const auto& m = d.modes[i];
    const auto slope = sawtooth_slope(Rational(m.frequency[0]) * x +
                                      Rational(m.frequency[1]) * y + m.phase);
    if (!slope) throw std::logic_error("cell sample landed on a breakpoint line");
    if (*slope < 0) eps |= SignPattern{1} << i;
  }
  return eps;
}

}  // namespace

// Vertical-slab decomposition of the unit square: between consecutive
// critical abscissae no two breakpoint lines cross, so every cell is a
// trapezoid whose area and sign pattern are computed exactly.
SignPatternMeasure<Rational> exact_weights(const PeriodicDeformation<Rational>& d) {
  check_deformation(d);
  const std::vector<Line> lines = breakpoint_lines(d);

  std::vector<Line> sloped;
  std::vector<Rational> xs{Rational(0), Rational(1)};
  for (const auto& ln : lines) {
    if (ln.vertical()) {
      add_if_inside(xs, ln.rhs / ln.k);
    } else {
      sloped.push_back(ln);
      if (ln.k != 0) {
        add_if_inside(xs, ln.rhs / ln.k);
        add_if_inside(xs, (ln.rhs - ln.l) / ln.k);
      }
    }
  }
  for (std::size_t i = 0; i < sloped.size(); ++i) {
    for (std::size_t j = i + 1; j < sloped.size(); ++j) {
      const auto& p = sloped[i];
      const auto& q = sloped[j];
      const Rational slope_gap = q.k / q.l - p.k / p.l;
      if (slope_gap == 0) continue;
      add_if_inside(xs, (q.rhs / q.l - p.rhs / p.l) / slope_gap);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  SignPatternMeasure<Rational> out;
  out.n = d.size();
  out.weights.assign(std::size_t{1} << out.n, Rational(0));

  struct Chord {
    Rational left, mid, right;
  };
  std::vector<Chord> chords;
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    const Rational& x0 = xs[s];
    const Rational& x1 = xs[s + 1];
    const Rational xm = (x0 + x1) / 2;
    chords.clear();
    chords.push_back({Rational(0), Rational(0), Rational(0)});
    chords.push_back({Rational(1), Rational(1), Rational(1)});
    for (const auto& ln : sloped) {
      const Rational ym = ln.y_at(xm);
      if (ym > 0 && ym < 1) chords.push_back({ln.y_at(x0), ym, ln.y_at(x1)});
    }
    std::sort(chords.begin(), chords.end(),
              [](const Chord& a, const Chord& b) { return a.mid < b.mid; });
    chords.erase(std::unique(chords.begin(), chords.end(),
                             [](const Chord& a, const Chord& b) { return a.mid == b.mid; }),
                 chords.end());
    const Rational width = x1 - x0;
    for (std::size_t c = 0; c + 1 < chords.size(); ++c) {
      const auto& lo = chords[c];
      const auto& hi = chords[c + 1];
      const Rational area = width * ((hi.left - lo.left) + (hi.right - lo.right)) / 2;
      const SignPattern eps = classify_point(d, xm, (lo.mid + hi.mid) / 2);
      out.weights[eps] += area;
    }
  }
  return out;
}

namespace {

constexpr std::uint64_t kBlock = 1U << 16;

std::vector<std::uint64_t> mc_block(const PeriodicDeformation<Rational>& d,
                                    std::uint64_t block, std::uint64_t count,
                                    std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n = d.size();
  std::vector<double> kx(n), ly(n), ph(n);
  for (int i = 0; i < n; ++i) {
    kx[i] = static_cast<double>(d.modes[i].frequency[0]);
    ly[i] = static_cast<double>(d.modes[i].frequency[1]);
    ph[i] = to_double(d.modes[i].phase);
  }
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  for (std::uint64_t s = 0; s < count; ++s) {
    const double x = unit(rng);
    const double y = unit(rng);
    SignPattern eps = 0;
    for (int i = 0; i < n; ++i) {
      const double t = kx[i] * x + ly[i] * y + ph[i];
      // breakpoints have probability zero; resolve them toward '+'
      if (t - std::floor(t) > 0.5) eps |= SignPattern{1} << i;
    }
    ++counts[eps];
  }
  return counts;
}

}  // namespace

SignPatternMeasure<double> mc_weights(const PeriodicDeformation<Rational>& d,
                                      std::uint64_t samples, std::uint64_t seed,
                                      unsigned workers) {
  check_deformation(d);
  if (samples == 0) throw InputError("mc_weights needs at least one sample");
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  std::vector<std::vector<std::uint64_t>> per_block(blocks);
  auto run = [&](unsigned w) {
    for (std::uint64_t b = w; b < blocks; b += workers) {
      const std::uint64_t count = std::min(kBlock, samples - b * kBlock);
      per_block[b] = mc_block(d, b, count, seed);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  SignPatternMeasure<double> out;
  out.n = d.size();
  std::vector<std::uint64_t> totals(std::size_t{1} << out.n, 0);
  for (const auto& counts : per_block) {
    for (std::size_t i = 0; i < counts.size(); ++i) totals[i] += counts[i];
  }
  out.weights.resize(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) {
    out.weights[i] = static_cast<double>(totals[i]) / static_cast<double>(samples);
  }
  return out;
}

Rational correlation_integral(std::int64_t k, std::int64_t l, const Rational& c) {
  if (k <= 0 || l <= 0) throw InputError("correlation_integral needs k, l >= 1");
  if (k % 2 == 0 || l % 2 == 0) return Rational(0);
  const Rational r = c - 2 * floor(c / 2);  // c mod 2 in [0,2)
  const Rational kl(k * l);
  if (r < 1) return 2 * r * (r - 1) / kl;
  return -2 * (r - 1) * (r - 2) / kl;
}

}  // namespace cubelam
