// Copyright 2026 The replaydf-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPLAYDF_TESTS_ORACLES_HPP_
#define REPLAYDF_TESTS_ORACLES_HPP_

// Reference implementations written straight from the definitions. They are
// deliberately slow and share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace replaydf::oracle {

// Full linear convolution, O(n*m).
inline std::vector<double> convolve(const std::vector<double>& x,
                                    const std::vector<double>& h) {
  if (x.empty() || h.empty()) return {};
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
  }
  return y;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Equal error rate by counting, for every candidate threshold, how many bona
// fide scores reach it and how many spoof scores fall below it.
struct Eer {
  double eer;
  double threshold;
};

inline Eer eer(const std::vector<double>& spoof, const std::vector<double>& bona) {
  std::set<double> distinct(spoof.begin(), spoof.end());
  distinct.insert(bona.begin(), bona.end());
  std::vector<double> thresholds(distinct.begin(), distinct.end());
  auto far = [&](double t) {
    return static_cast<double>(std::count_if(bona.begin(), bona.end(),
                                             [&](double s) { return s >= t; })) /
           static_cast<double>(bona.size());
  };
  auto frr = [&](double t) {
    return static_cast<double>(std::count_if(spoof.begin(), spoof.end(),
                                             [&](double s) { return s < t; })) /
           static_cast<double>(spoof.size());
  };
  std::vector<std::pair<double, double>> points;  // (far, frr)
  for (double t : thresholds) points.emplace_back(far(t), frr(t));
  points.emplace_back(0.0, 1.0);  // above every score
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = points[i].first - points[i].second;
    if (d == 0.0) {
      return {points[i].first,
              i < thresholds.size() ? thresholds[i] : thresholds.back()};
    }
    if (d < 0.0) {
      const auto [fa, ra] = points[i - 1];
      const auto [fb, rb] = points[i];
      const double da = fa - ra;
      const double alpha = da / (da - d);
      const double ta = thresholds[i - 1];
      const double tb = i < thresholds.size() ? thresholds[i] : thresholds.back();
      return {fa + alpha * (fb - fa), ta + alpha * (tb - ta)};
    }
  }
  return {points.back().first, thresholds.back()};
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double mean_square(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

inline double excess_kurtosis(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

// Recursive radix-2 DFT, independent of the library transform.
inline void dft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return;
  std::vector<std::complex<double>> even(n / 2), odd(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    even[i] = a[2 * i];
    odd[i] = a[2 * i + 1];
  }
  dft(even);
  dft(odd);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto w = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                       static_cast<double>(n)) * odd[k];
    a[k] = even[k] + w;
    a[k + n / 2] = even[k] - w;
  }
}

// Least-squares slope of log10(power) against log10(frequency) over
// [lo_hz, hi_hz], from a Hann-windowed Welch periodogram.
inline double periodogram_slope(const std::vector<double>& x, int rate,
                                std::size_t segment, double lo_hz, double hi_hz) {
  std::vector<double> psd(segment / 2 + 1, 0.0);
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= x.size(); start += segment / 2) {
    std::vector<std::complex<double>> a(segment);
    for (std::size_t i = 0; i < segment; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(segment));
      a[i] = x[start + i] * w;
    }
    dft(a);
    for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += std::norm(a[k]);
    ++count;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k < psd.size(); ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(segment);
    if (f < lo_hz || f > hi_hz) continue;
    lx.push_back(std::log10(f));
    ly.push_back(std::log10(psd[k] / static_cast<double>(count)));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

// Triangular filter on the mel scale: index of the band whose response to a
// pure tone at f_hz is largest, for num_bands bands spanning 0..rate/2.
inline std::size_t mel_band_for(double f_hz, int rate, std::size_t num_bands) {
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double top = mel(rate / 2.0);
  std::size_t best = 0;
  double best_w = -1.0;
  for (std::size_t b = 0; b < num_bands; ++b) {
    const double lo = hz(top * static_cast<double>(b) / static_cast<double>(num_bands + 1));
    const double mid = hz(top * static_cast<double>(b + 1) / static_cast<double>(num_bands + 1));
    const double hi = hz(top * static_cast<double>(b + 2) / static_cast<double>(num_bands + 1));
    double w = 0.0;
    if (f_hz > lo && f_hz <= mid) w = (f_hz - lo) / (mid - lo);
    else if (f_hz > mid && f_hz < hi) w = (hi - f_hz) / (hi - mid);
    if (w > best_w) {
      best_w = w;
      best = b;
    }
  }
  return best;
}

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

}  // namespace replaydf::oracle

#endif  // REPLAYDF_TESTS_ORACLES_HPP_
